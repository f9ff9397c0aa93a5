#include "ilamm/sim/benchmark.hpp"

#include "ilamm/sim/estimators.hpp"
#include "ilamm/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <thread>

namespace ilamm::sim {

Metrics metrics(const Coefficients& estimate, const Coefficients& truth) {
  if (estimate.size() != truth.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "estimate and truth differ in dimension");
  }
  Metrics m;
  m.mse = (estimate.values() - truth.values()).squaredNorm();
  for (Index j : estimate.support()) {
    if (truth[j] != 0.0) {
      ++m.tp;
    } else {
      ++m.fp;
    }
  }
  return m;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::IlammScad: return "ILAMM_SCAD";
    case Method::IlammMcp: return "ILAMM_MCP";
    case Method::Lasso: return "LASSO";
    case Method::Refit: return "REFIT";
    case Method::ALasso: return "ALASSO";
    case Method::Oracle: return "ORACLE";
  }
  return "UNKNOWN";
}

Method method_from_string(const std::string& name) {
  for (Method m : {Method::IlammScad, Method::IlammMcp, Method::Lasso,
                   Method::Refit, Method::ALasso, Method::Oracle}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::Parse, "unknown method '" + name + "'");
}

const SummaryRow& BenchSummary::row(Method method) const {
  for (const auto& r : rows) {
    if (r.method == method) return r;
  }
  throw Error(ErrorCode::InvalidArgument,
              "method " + to_string(method) + " not in summary");
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ProblemInstance fitting_instance(const Scenario& scenario,
                                 const BenchConfig& config,
                                 const ProblemInstance& generated) {
  switch (config.fit_loss) {
    case FitLoss::Auto:
      return generated;
    case FitLoss::Squared:
      if (scenario.model == Model::Logistic) {
        throw Error(ErrorCode::InvalidArgument,
                    "squared fit loss is not available for logistic data");
      }
      return generated.with_loss(Loss::squared());
    case FitLoss::Huber: {
      if (scenario.model == Model::Logistic) {
        throw Error(ErrorCode::InvalidArgument,
                    "huber fit loss is not available for logistic data");
      }
      const double alpha = config.huber_alpha.value_or(
          scenario.huber_alpha.value_or(base_rate(scenario.n, scenario.d)));
      return generated.with_loss(Loss::huber(alpha));
    }
  }
  return generated;
}

// Shared state of one replicate: the Lasso fit is computed once and reused
// by the REFIT and ALASSO rows.
struct LassoFit {
  double lambda = 0.0;
  Coefficients beta;
  double seconds = 0.0;
};

}  // namespace

std::vector<ReplicateRow> run_replicate(const Scenario& scenario,
                                        const BenchConfig& config,
                                        int replicate) {
  const GeneratedData data =
      generate(scenario, static_cast<std::uint64_t>(replicate));
  const ProblemInstance instance =
      fitting_instance(scenario, config, data.instance);
  const std::vector<double> grid =
      config.c_grid.empty() ? default_c_grid() : config.c_grid;
  // CV folds get their own stream, independent of the data draw.
  const std::uint64_t cv_seed = replicate_seed(
      scenario.base_seed ^ 0xA5A5A5A5A5A5A5A5ULL,
      static_cast<std::uint64_t>(replicate));

  // The Lasso comparator stands for the exact l1 minimizer, not an early
  // stopped contraction stage.
  SolverConfig lasso_solver = config.solver;
  lasso_solver.eps_c = std::min(
      kLassoComparatorTolerance,
      config.solver.resolved_eps_t(instance.n(), instance.d()));
  lasso_solver.eps_t = lasso_solver.eps_c;

  std::optional<LassoFit> lasso;
  auto ensure_lasso = [&]() -> const LassoFit& {
    if (!lasso) {
      const auto start = Clock::now();
      const PenaltySpec spec = PenaltySpec::make(PenaltyFamily::Lasso, 1.0);
      const CvResult cv = cross_validate_lambda(instance, spec, config.folds,
                                                grid, cv_seed, lasso_solver);
      SolverConfig cfg = lasso_solver;
      cfg.lambda = cv.lambda;
      lasso = LassoFit{cv.lambda, solve_tac(instance, spec, cfg).final,
                       seconds_since(start)};
    }
    return *lasso;
  };

  auto tac = [&](PenaltyFamily family, double a, ReplicateRow& row) {
    const PenaltySpec spec = PenaltySpec::make(family, 1.0, a);
    const CvResult cv = cross_validate_lambda(instance, spec, config.folds,
                                              grid, cv_seed, config.solver);
    SolverConfig cfg = config.solver;
    cfg.lambda = cv.lambda;
    row.lambda = cv.lambda;
    return solve_tac(instance, spec, cfg).final;
  };

  std::vector<ReplicateRow> rows;
  for (Method method : config.methods) {
    ReplicateRow row;
    row.replicate = replicate;
    row.method = method;
    const auto start = Clock::now();
    double extra_seconds = 0.0;
    try {
      Coefficients estimate;
      switch (method) {
        case Method::IlammScad:
          estimate = tac(PenaltyFamily::Scad, config.scad_a, row);
          break;
        case Method::IlammMcp:
          estimate = tac(PenaltyFamily::Mcp, config.mcp_a, row);
          break;
        case Method::Lasso: {
          const bool cached = lasso.has_value();
          const LassoFit& fit = ensure_lasso();
          if (cached) extra_seconds = fit.seconds;
          row.lambda = fit.lambda;
          estimate = fit.beta;
          break;
        }
        case Method::Refit: {
          const bool cached = lasso.has_value();
          const LassoFit& fit = ensure_lasso();
          if (cached) extra_seconds = fit.seconds;
          row.lambda = fit.lambda;
          estimate = refit_on_support(instance, fit.beta.support());
          break;
        }
        case Method::ALasso: {
          const bool cached = lasso.has_value();
          const LassoFit& fit = ensure_lasso();
          if (cached) extra_seconds = fit.seconds;
          // Sequential tuning: the Lasso lambda stays fixed inside each fold,
          // the reciprocal-weight stage gets its own lambda'.
          SolverConfig lasso_cfg = lasso_solver;
          lasso_cfg.lambda = fit.lambda;
          const PenaltySpec lasso_spec =
              PenaltySpec::make(PenaltyFamily::Lasso, fit.lambda);
          std::map<const ProblemInstance*, Coefficients> fold_lasso;
          const CvResult cv = cross_validate(
              instance, config.folds, grid, cv_seed,
              [&](const ProblemInstance& train, double lambda) {
                auto it = fold_lasso.find(&train);
                if (it == fold_lasso.end()) {
                  it = fold_lasso
                           .emplace(&train,
                                    solve_tac(train, lasso_spec, lasso_cfg).final)
                           .first;
                }
                return adaptive_lasso_stage(train, it->second, lambda,
                                            config.solver);
              });
          row.lambda = cv.lambda;
          estimate =
              adaptive_lasso_stage(instance, fit.beta, cv.lambda, config.solver);
          break;
        }
        case Method::Oracle:
          estimate = oracle_estimator(instance, data.support);
          break;
      }
      row.metrics = metrics(denormalize(instance, estimate), data.truth);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    row.seconds = seconds_since(start) + extra_seconds;
    rows.push_back(std::move(row));
  }
  return rows;
}

BenchSummary run_benchmark(const Scenario& scenario, const BenchConfig& config) {
  scenario.validate();
  if (config.methods.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no methods requested");
  }
  config.solver.validate(scenario.n, scenario.d);

  const int reps = scenario.replicates;
  std::vector<std::vector<ReplicateRow>> per_rep(static_cast<std::size_t>(reps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < reps; r = next++) {
      per_rep[static_cast<std::size_t>(r)] = run_replicate(scenario, config, r);
    }
  };
  const int threads = std::clamp(config.threads, 1, reps);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  BenchSummary summary;
  for (auto& rows : per_rep) {
    for (auto& row : rows) summary.replicates.push_back(std::move(row));
  }
  for (Method method : config.methods) {
    SummaryRow s;
    s.method = method;
    std::vector<double> mse, tp, fp, secs;
    for (const auto& row : summary.replicates) {
      if (row.method != method) continue;
      if (!row.ok) {
        ++s.failures;
        continue;
      }
      mse.push_back(row.metrics.mse);
      tp.push_back(row.metrics.tp);
      fp.push_back(row.metrics.fp);
      secs.push_back(row.seconds);
    }
    s.completed = static_cast<int>(mse.size());
    s.median_mse = median(mse);
    s.median_tp = median(tp);
    s.median_fp = median(fp);
    s.median_seconds = median(secs);
    summary.rows.push_back(s);
  }
  return summary;
}

}  // namespace ilamm::sim
