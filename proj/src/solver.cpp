#include "ilamm/solver.hpp"

#include <algorithm>
#include <cmath>

namespace ilamm {

double suboptimality(const Vector& gradient, const Coefficients& beta,
                     const WeightVector& weights) {
  const Vector& b = beta.values();
  if (gradient.size() != b.size() || weights.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "suboptimality arguments differ in length");
  }
  double omega = 0.0;
  for (Index j = 0; j < b.size(); ++j) {
    double r = 0.0;
    if (is_frozen(weights[j])) {
      r = 0.0;
    } else if (b[j] != 0.0) {
      r = std::abs(gradient[j] + std::copysign(weights[j], b[j]));
    } else {
      r = std::max(std::abs(gradient[j]) - weights[j], 0.0);
    }
    omega = std::max(omega, r);
  }
  return omega;
}

double suboptimality(const ProblemInstance& instance, const Coefficients& beta,
                     const WeightVector& weights) {
  return suboptimality(evaluate_loss(instance, beta).gradient, beta, weights);
}

SubproblemResult solve_subproblem(const ProblemInstance& instance,
                                  const WeightVector& weights,
                                  const Coefficients& init, double tolerance,
                                  PhiState phi, const SolverConfig& config,
                                  int stage, const IterateObserver& observer) {
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  }
  if (weights.size() != instance.d()) {
    throw Error(ErrorCode::DimensionMismatch,
                "weight vector length does not match dimension");
  }
  // Frozen coordinates start (and stay) at zero.
  Vector start = init.values();
  for (Index j = 0; j < start.size(); ++j) {
    if (is_frozen(weights[j])) start[j] = 0.0;
  }

  SubproblemResult out;
  out.trace.stage = stage;
  Iterate current = make_iterate(instance, Coefficients(std::move(start)));
  double omega = suboptimality(current.gradient, current.beta, weights);
  Coefficients best = current.beta;
  double best_omega = omega;

  int k = 0;
  while (omega > tolerance) {
    if (k >= config.k_max) {
      throw NotConverged("stage " + std::to_string(stage) +
                             ": omega " + std::to_string(best_omega) +
                             " above tolerance after " +
                             std::to_string(config.k_max) + " iterations",
                         best, best_omega);
    }
    LammStep step = lamm_iterate(instance, weights, current, phi, config);
    ++k;
    const double step_norm =
        (step.next.beta.values() - current.beta.values()).norm();
    current = std::move(step.next);
    phi = step.phi;
    omega = suboptimality(current.gradient, current.beta, weights);
    if (observer) observer(stage, k, current.beta);
    if (omega < best_omega) {
      best = current.beta;
      best_omega = omega;
    }
    TraceRecord rec;
    rec.k = k;
    rec.phi = phi.phi;
    rec.objective = current.loss;
    for (Index j : current.beta.support()) {
      rec.objective += weights[j] * std::abs(current.beta[j]);
    }
    rec.omega = omega;
    rec.step_norm = step_norm;
    rec.inflations = step.inflations;
    out.trace.records.push_back(rec);
  }
  out.beta = std::move(current.beta);
  out.phi = phi;
  out.omega = omega;
  out.iterations = k;
  return out;
}

SolveResult solve_tac(const ProblemInstance& instance,
                      const PenaltySpec& penalty, const SolverConfig& config,
                      const IterateObserver& observer) {
  config.validate(instance.n(), instance.d());
  const PenaltySpec spec =
      PenaltySpec::make(penalty.family, config.lambda, penalty.a);
  if (!is_tightening_family(spec.family)) {
    throw Error(ErrorCode::InvalidArgument,
                "solve_tac needs a tightening-class penalty");
  }
  const Index d = instance.d();
  const double eps_c = config.resolved_eps_c(instance.n(), d);
  const double eps_t = config.resolved_eps_t(instance.n(), d);

  SolveResult result;
  WeightVector weights = WeightVector::Constant(d, config.lambda);
  Coefficients beta = config.initial_beta ? Coefficients(*config.initial_beta)
                                          : Coefficients::zeros(d);
  PhiState phi{config.phi0};

  for (int stage = 1; stage <= config.t_max; ++stage) {
    const double tol = stage == 1 ? eps_c : eps_t;
    SubproblemResult sub;
    try {
      sub = solve_subproblem(instance, weights, beta, tol, phi, config, stage,
                             observer);
    } catch (NotConverged& e) {
      result.per_stage_estimates.push_back(e.best());
      result.stage_weights.push_back(weights);
      result.stage_tolerances.push_back(tol);
      result.stage_omegas.push_back(e.best_omega());
      result.traces.push_back(StageTrace{stage, {}});
      result.total_lamm_iterations += config.k_max;
      result.stages_run = stage;
      result.final = e.best();
      result.final_weights = weights;
      result.final_phi = phi.phi;
      result.converged = false;
      e.set_partial(result);
      throw;
    }
    result.total_lamm_iterations += sub.iterations;
    result.per_stage_estimates.push_back(sub.beta);
    result.traces.push_back(std::move(sub.trace));
    result.stage_weights.push_back(weights);
    result.stage_tolerances.push_back(tol);
    result.stage_omegas.push_back(sub.omega);
    result.stages_run = stage;
    beta = std::move(sub.beta);
    phi = sub.phi;

    if (spec.family == PenaltyFamily::Lasso) break;
    WeightVector next = adaptive_weights(spec, beta);
    if (next == weights) break;
    weights = std::move(next);
  }
  result.final = result.per_stage_estimates.back();
  result.final_weights = result.stage_weights.back();
  result.final_phi = phi.phi;
  return result;
}

}  // namespace ilamm
