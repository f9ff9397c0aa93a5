#include "ilamm/trace.hpp"

#include <cmath>
#include <map>

namespace ilamm {

TraceReport trace_solve(const ProblemInstance& instance,
                        const PenaltySpec& penalty, const SolverConfig& config,
                        double reference_tolerance, int reference_k_max) {
  std::map<int, std::vector<Coefficients>> iterates;
  TraceReport report;
  report.result = solve_tac(instance, penalty, config,
                            [&](int stage, int, const Coefficients& beta) {
                              iterates[stage].push_back(beta);
                            });

  SolverConfig tight = config;
  tight.k_max = reference_k_max;
  const SolveResult& res = report.result;
  for (int s = 0; s < res.stages_run; ++s) {
    const WeightVector& weights = res.stage_weights[static_cast<std::size_t>(s)];
    const SubproblemResult ref = solve_subproblem(
        instance, weights, res.per_stage_estimates[static_cast<std::size_t>(s)],
        reference_tolerance, PhiState{res.final_phi}, tight, s + 1);
    report.stage_optimal_objective.push_back(
        objective(instance, ref.beta, weights));
    report.stage_optima.push_back(ref.beta);

    const StageTrace& trace = res.traces[static_cast<std::size_t>(s)];
    const auto& betas = iterates[s + 1];
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      const TraceRecord& rec = trace.records[i];
      TraceRow row;
      row.stage = s + 1;
      row.k = rec.k;
      row.phi = rec.phi;
      row.objective = rec.objective;
      row.omega = rec.omega;
      row.dist_to_stage_opt =
          (betas[i].values() - ref.beta.values()).norm();
      row.log10_dist = std::log10(row.dist_to_stage_opt);
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace ilamm
