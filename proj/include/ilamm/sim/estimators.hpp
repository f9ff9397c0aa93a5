#pragma once

#include "ilamm/core.hpp"
#include "ilamm/penalties.hpp"
#include "ilamm/solver.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ilamm::sim {

/// Hessian of the loss at beta: X^T X / n (squared), X^T W X / n with
/// W = sigma(m)(1 - sigma(m)) (logistic), 2 X_I^T X_I / n over the residuals
/// inside the quadratic branch (Huber; valid off the knots).
Matrix loss_hessian(const ProblemInstance& instance, const Coefficients& beta);

/// argmin of the loss over vectors supported on `support` (zero elsewhere).
/// Squared loss solves the normal equations; logistic and Huber use damped
/// Newton on the restricted problem to a gradient norm of 1e-10. Throws
/// ErrorCode::Numerical when X_S is rank deficient.
Coefficients oracle_estimator(const ProblemInstance& instance,
                              const std::vector<Index>& support);

/// As oracle_estimator, but a rank-deficient or oversized support falls back
/// to the minimum-norm least-squares fit (squared loss) or a ridge-damped
/// Newton (other losses). Used for the refitted Lasso.
Coefficients refit_on_support(const ProblemInstance& instance,
                              const std::vector<Index>& support);

/// One reciprocal-weight stage lambda_j = lambda / |lasso_j| started at the
/// Lasso estimate and solved to eps_t. Zeros of the Lasso stay zero.
Coefficients adaptive_lasso_stage(const ProblemInstance& instance,
                                  const Coefficients& lasso, double lambda,
                                  const SolverConfig& config);

/// Held-out error of beta on `instance`: mean squared error (squared loss),
/// mean deviance 2 log(1 + exp(-y eta)) (logistic), mean Huber loss (Huber).
double validation_error(const ProblemInstance& instance,
                        const Coefficients& beta);

struct CvPoint {
  double c = 0.0;
  double lambda = 0.0;
  double mean_error = 0.0;
};

struct CvResult {
  double lambda = 0.0;
  double c = 0.0;
  std::vector<CvPoint> curve;
};

/// lambda = c * base_rate(n, d) for c in 0.5 * {1, ..., 20}.
std::vector<double> default_c_grid();

/// Fits on a training fold for a given lambda.
using FoldFit =
    std::function<Coefficients(const ProblemInstance& train, double lambda)>;

/// Generic K-fold search over lambda = c * base_rate(n, d) of the full
/// instance. Folds come from a seeded shuffle. The smallest mean held-out
/// error wins; exact ties go to the larger lambda.
CvResult cross_validate(const ProblemInstance& instance, int folds,
                        const std::vector<double>& c_grid, std::uint64_t seed,
                        const FoldFit& fit);

/// cross_validate with solve_tac(train, penalty, config with lambda) as fit.
CvResult cross_validate_lambda(const ProblemInstance& instance,
                               const PenaltySpec& penalty, int folds,
                               const std::vector<double>& c_grid,
                               std::uint64_t seed, const SolverConfig& config);

}  // namespace ilamm::sim
