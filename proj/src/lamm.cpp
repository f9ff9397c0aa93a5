#include "ilamm/lamm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ilamm {

namespace {

void check_weights(const WeightVector& weights, Index d) {
  if (weights.size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "weight vector length does not match dimension");
  }
}

double weighted_l1(const Vector& beta, const WeightVector& weights) {
  double total = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta[j] == 0.0) continue;
    if (is_frozen(weights[j])) {
      throw Error(ErrorCode::InvalidArgument,
                  "frozen coordinate " + std::to_string(j) + " is nonzero");
    }
    total += weights[j] * std::abs(beta[j]);
  }
  return total;
}

// Psi - F = phi/2 |step|^2 - D with D the loss divergence; the linear and
// weighted-l1 terms cancel. Forming it this way keeps the test meaningful
// once F and Psi agree to more digits than a double holds.
MajorizationCheck check_step(const ProblemInstance& instance,
                             const Iterate& old, const Vector& new_beta,
                             const Vector& new_eta, double phi) {
  const double quad = 0.5 * phi * (new_beta - old.beta.values()).squaredNorm();
  const Divergence div = loss_divergence(instance, new_eta, old.predictor);
  const double gap = quad - div.value;
  const double tolerance =
      div.error_bound + 4.0 * std::numeric_limits<double>::epsilon() * quad;
  return {std::isfinite(gap) && gap >= -tolerance, gap};
}

}  // namespace

Vector soft_threshold(const Vector& x, const Vector& t) {
  if (x.size() != t.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "soft_threshold arguments differ in length");
  }
  Vector out(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    if (is_frozen(t[j])) {
      out[j] = 0.0;
      continue;
    }
    const double mag = std::abs(x[j]) - t[j];
    out[j] = mag > 0.0 ? std::copysign(mag, x[j]) : 0.0;
  }
  return out;
}

double objective(const ProblemInstance& instance, const Coefficients& beta,
                 const WeightVector& weights) {
  check_weights(weights, instance.d());
  const double penalty = weighted_l1(beta.values(), weights);
  return loss_value(instance, beta) + penalty;
}

Iterate make_iterate(const ProblemInstance& instance, Coefficients beta) {
  if (beta.size() != instance.d()) {
    throw Error(ErrorCode::DimensionMismatch,
                "coefficient length does not match dimension");
  }
  Iterate it;
  it.predictor = linear_predictor(instance, beta.values());
  it.loss = loss_value_at(instance, it.predictor);
  it.gradient = loss_gradient_at(instance, it.predictor);
  it.beta = std::move(beta);
  return it;
}

Coefficients prox_step(const Iterate& old, const WeightVector& weights,
                       double phi) {
  if (!(phi > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "phi must be positive");
  }
  check_weights(weights, old.beta.size());
  const Vector& b = old.beta.values();
  Vector out(b.size());
  for (Index j = 0; j < b.size(); ++j) {
    if (is_frozen(weights[j])) {
      out[j] = 0.0;
      continue;
    }
    const double z = b[j] - old.gradient[j] / phi;
    const double mag = std::abs(z) - weights[j] / phi;
    out[j] = mag > 0.0 ? std::copysign(mag, z) : 0.0;
  }
  return Coefficients(std::move(out));
}

Coefficients prox_step(const ProblemInstance& instance,
                       const Coefficients& beta_old,
                       const WeightVector& weights, double phi) {
  return prox_step(make_iterate(instance, beta_old), weights, phi);
}

MajorizationCheck majorization_holds(const ProblemInstance& instance,
                                     const Coefficients& beta_new,
                                     const Coefficients& beta_old,
                                     const WeightVector& weights, double phi) {
  check_weights(weights, instance.d());
  weighted_l1(beta_new.values(), weights);
  const Iterate old = make_iterate(instance, beta_old);
  return check_step(instance, old, beta_new.values(),
                    linear_predictor(instance, beta_new.values()), phi);
}

LammStep lamm_iterate(const ProblemInstance& instance,
                      const WeightVector& weights, const Iterate& previous,
                      PhiState phi, const SolverConfig& config) {
  if (!(config.phi0 > 0.0) || !(config.gamma_u > 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "LAMM needs phi0 > 0 and gamma_u > 1");
  }
  check_weights(weights, instance.d());
  LammStep step;
  step.phi.phi = std::max(config.phi0, phi.phi / config.gamma_u);
  for (;;) {
    Coefficients candidate = prox_step(previous, weights, step.phi.phi);
    const Vector eta = linear_predictor(instance, candidate.values());
    if (check_step(instance, previous, candidate.values(), eta, step.phi.phi)
            .holds) {
      const double new_loss = loss_value_at(instance, eta);
      step.next.gradient = loss_gradient_at(instance, eta);
      step.next.predictor = eta;
      step.next.loss = new_loss;
      step.next.beta = std::move(candidate);
      return step;
    }
    if (++step.inflations > config.max_inflations) {
      throw Error(ErrorCode::Numerical,
                  "LAMM majorization not reached after " +
                      std::to_string(config.max_inflations) +
                      " inflations (phi = " + std::to_string(step.phi.phi) +
                      "); loss evaluation is non-finite or non-smooth");
    }
    step.phi.phi *= config.gamma_u;
  }
}

LammStep lamm_iterate(const ProblemInstance& instance,
                      const WeightVector& weights, const Coefficients& previous,
                      PhiState phi, const SolverConfig& config) {
  return lamm_iterate(instance, weights, make_iterate(instance, previous), phi,
                      config);
}

}  // namespace ilamm
