#pragma once

#include "ilamm/core.hpp"
#include "ilamm/solver.hpp"

#include <vector>

namespace ilamm {

struct TraceRow {
  int stage = 0;
  int k = 0;
  double phi = 0.0;
  double objective = 0.0;
  double omega = 0.0;
  double dist_to_stage_opt = 0.0;
  double log10_dist = 0.0;
};

struct TraceReport {
  SolveResult result;
  /// Each stage's subproblem re-solved to omega <= reference_tolerance,
  /// with its objective value.
  std::vector<Coefficients> stage_optima;
  std::vector<double> stage_optimal_objective;
  std::vector<TraceRow> rows;
};

/// solve_tac, then a tight re-solve of every stage subproblem so each LAMM
/// iterate can be reported with its distance to the stage minimizer.
TraceReport trace_solve(const ProblemInstance& instance,
                        const PenaltySpec& penalty, const SolverConfig& config,
                        double reference_tolerance = 1e-10,
                        int reference_k_max = 1000000);

}  // namespace ilamm
