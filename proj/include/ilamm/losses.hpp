#pragma once

#include "ilamm/core.hpp"

namespace ilamm {

struct LossEval {
  double value = 0.0;
  Vector gradient;
};

/// (2n)^-1 ||y - X beta||^2 and its gradient n^-1 X^T (X beta - y).
LossEval squared_eval(const ProblemInstance& instance, const Coefficients& beta);

/// n^-1 sum log(1 + exp(-y_i x_i^T beta)), labels in {-1, +1}.
LossEval logistic_eval(const ProblemInstance& instance, const Coefficients& beta);

/// n^-1 sum l_alpha(y_i - x_i^T beta) where l_alpha(r) = r^2 for |r| <= 1/alpha
/// and 2|r|/alpha - 1/alpha^2 beyond.
LossEval huber_eval(const ProblemInstance& instance, const Coefficients& beta);

/// Dispatches on instance.loss().kind.
LossEval evaluate_loss(const ProblemInstance& instance, const Coefficients& beta);
double loss_value(const ProblemInstance& instance, const Coefficients& beta);

// Per-sample pieces, exposed for the tests and the validation metrics.

/// log(1 + exp(-m)) for margin m = y x^T beta, overflow-safe for any m.
double logistic_sample_loss(double margin);
/// 1 / (1 + exp(m)), the weight -d/dm of logistic_sample_loss.
double logistic_sample_weight(double margin);
double huber_sample_loss(double residual, double alpha);
/// d/dr of huber_sample_loss; at the knot the quadratic-branch value 2r.
double huber_sample_derivative(double residual, double alpha);

/// X beta, touching only the support columns.
Vector linear_predictor(const ProblemInstance& instance, const Vector& beta);
/// Loss value given the linear predictor eta = X beta.
double loss_value_at(const ProblemInstance& instance, const Vector& eta);
/// Gradient of the loss given the linear predictor eta = X beta.
Vector loss_gradient_at(const ProblemInstance& instance, const Vector& eta);

struct Divergence {
  double value = 0.0;
  /// Upper bound on the rounding error in `value`.
  double error_bound = 0.0;
};

/// L(new) - L(old) - <grad L(old), new - old> from the two linear predictors.
/// Summed per sample in closed form where one exists, so it stays accurate
/// when the step is tiny and the loss values agree to many digits.
Divergence loss_divergence(const ProblemInstance& instance,
                           const Vector& eta_new, const Vector& eta_old);

}  // namespace ilamm
