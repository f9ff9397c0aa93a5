#pragma once

#include "ilamm/core.hpp"
#include "ilamm/lamm.hpp"
#include "ilamm/penalties.hpp"

#include <functional>
#include <optional>

namespace ilamm {

/// omega_lambda(beta) = min over subgradients xi of ||grad + lambda .* xi||_inf,
/// taken coordinatewise in closed form. Frozen coordinates contribute 0.
double suboptimality(const Vector& gradient, const Coefficients& beta,
                     const WeightVector& weights);
double suboptimality(const ProblemInstance& instance, const Coefficients& beta,
                     const WeightVector& weights);

struct SubproblemResult {
  Coefficients beta;
  StageTrace trace;
  PhiState phi;
  double omega = 0.0;
  int iterations = 0;
};

/// Raised when a subproblem exhausts k_max. Carries the iterate with the
/// smallest omega seen and, from solve_tac, the partial SolveResult whose
/// last stage is that iterate.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, Coefficients best, double best_omega)
      : Error(ErrorCode::NotConverged, what),
        best_(std::move(best)),
        best_omega_(best_omega) {}

  const Coefficients& best() const { return best_; }
  double best_omega() const { return best_omega_; }
  const std::optional<SolveResult>& partial() const { return partial_; }
  void set_partial(SolveResult r) { partial_ = std::move(r); }

 private:
  Coefficients best_;
  double best_omega_;
  std::optional<SolveResult> partial_;
};

/// Called with (stage, k, beta^(stage, k)) after every accepted LAMM step.
using IterateObserver =
    std::function<void(int stage, int k, const Coefficients& beta)>;

/// Runs LAMM steps from `init` until omega <= tolerance, at most config.k_max
/// steps. `stage` only labels the trace.
SubproblemResult solve_subproblem(const ProblemInstance& instance,
                                  const WeightVector& weights,
                                  const Coefficients& init, double tolerance,
                                  PhiState phi, const SolverConfig& config,
                                  int stage = 1,
                                  const IterateObserver& observer = {});

/// Contraction stage with uniform weights config.lambda to eps_c, then
/// tightening stages with weights lambda * w(|beta_prev|) to eps_t, until the
/// weights repeat exactly or t_max stages have run. penalty.lambda is
/// ignored in favour of config.lambda.
SolveResult solve_tac(const ProblemInstance& instance,
                      const PenaltySpec& penalty, const SolverConfig& config,
                      const IterateObserver& observer = {});

}  // namespace ilamm
