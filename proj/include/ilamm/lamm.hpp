#pragma once

#include "ilamm/core.hpp"
#include "ilamm/losses.hpp"
#include "ilamm/penalties.hpp"

namespace ilamm {

/// Isotropic quadratic parameter carried from one LAMM step to the next and
/// across stages.
struct PhiState {
  double phi = 1e-6;
};

/// sign(x_j) * max(|x_j| - t_j, 0); t_j = +inf gives 0.
Vector soft_threshold(const Vector& x, const Vector& t);

/// F(beta, lambda) = L(beta) + sum_j lambda_j |beta_j|. Frozen coordinates
/// contribute nothing but must be zero.
double objective(const ProblemInstance& instance, const Coefficients& beta,
                 const WeightVector& weights);

/// Point of the iteration with its cached linear predictor, loss value and
/// gradient, so each LAMM step evaluates X and X^T once.
struct Iterate {
  Coefficients beta;
  Vector predictor;
  double loss = 0.0;
  Vector gradient;
};

Iterate make_iterate(const ProblemInstance& instance, Coefficients beta);

/// Minimizer of the isotropic majorization at beta_old:
/// S(beta_old - grad / phi, weights / phi), frozen coordinates pinned at 0.
Coefficients prox_step(const ProblemInstance& instance,
                       const Coefficients& beta_old,
                       const WeightVector& weights, double phi);
Coefficients prox_step(const Iterate& old, const WeightVector& weights,
                       double phi);

struct MajorizationCheck {
  bool holds = false;
  /// Psi(beta_new; beta_old) - F(beta_new).
  double gap = 0.0;
};

/// Compares F(beta_new) against the local majorizer
/// Psi = L(old) + <grad L(old), new - old> + phi/2 ||new - old||^2 + sum lambda_j |new_j|
/// The gap is formed as phi/2 ||new - old||^2 minus the loss divergence, so
/// it stays exact to rounding when the two sides agree to many digits.
MajorizationCheck majorization_holds(const ProblemInstance& instance,
                                     const Coefficients& beta_new,
                                     const Coefficients& beta_old,
                                     const WeightVector& weights, double phi);

struct LammStep {
  Iterate next;
  PhiState phi;
  int inflations = 0;
};

/// One LAMM step. Starts from phi = max(phi0, phi_in / gamma_u) and inflates
/// by gamma_u until the majorization holds. Throws ErrorCode::Numerical once
/// config.max_inflations is exceeded.
LammStep lamm_iterate(const ProblemInstance& instance,
                      const WeightVector& weights, const Iterate& previous,
                      PhiState phi, const SolverConfig& config);
LammStep lamm_iterate(const ProblemInstance& instance,
                      const WeightVector& weights, const Coefficients& previous,
                      PhiState phi, const SolverConfig& config);

}  // namespace ilamm
