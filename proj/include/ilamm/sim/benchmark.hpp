#pragma once

#include "ilamm/core.hpp"
#include "ilamm/sim/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ilamm::sim {

struct Metrics {
  double mse = 0.0;  // ||estimate - truth||_2^2
  int tp = 0;
  int fp = 0;
};

Metrics metrics(const Coefficients& estimate, const Coefficients& truth);

enum class Method { IlammScad, IlammMcp, Lasso, Refit, ALasso, Oracle };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

/// Loss used for fitting, independent of how the data were generated.
enum class FitLoss { Auto, Squared, Huber };

/// Optimality tolerance for the LASSO, REFIT and ALASSO first-step fits.
inline constexpr double kLassoComparatorTolerance = 1e-4;

struct BenchConfig {
  std::vector<Method> methods;
  /// Solver knobs; lambda is overwritten by cross-validation.
  SolverConfig solver;
  int folds = 3;
  std::vector<double> c_grid;  // empty means default_c_grid()
  double scad_a = 3.7;
  double mcp_a = 3.0;
  FitLoss fit_loss = FitLoss::Auto;
  /// Cutoff for FitLoss::Huber on non-Huber scenarios; unset means
  /// base_rate(n, d).
  std::optional<double> huber_alpha;
  int threads = 1;
};

struct ReplicateRow {
  int replicate = 0;
  Method method = Method::Oracle;
  double lambda = 0.0;  // 0 when the method has no tuning parameter
  Metrics metrics;
  double seconds = 0.0;
  bool ok = true;
  std::string error;
};

struct SummaryRow {
  Method method = Method::Oracle;
  double median_mse = 0.0;
  double median_tp = 0.0;
  double median_fp = 0.0;
  double median_seconds = 0.0;
  int completed = 0;
  int failures = 0;
};

struct BenchSummary {
  std::vector<SummaryRow> rows;
  std::vector<ReplicateRow> replicates;

  const SummaryRow& row(Method method) const;
};

/// Generates every replicate, cross-validates lambda once per tuned method
/// on the contraction stage, fits, and aggregates medians. Replicates run on
/// `config.threads` workers; results do not depend on the thread count.
/// Failed fits are counted per method and left out of the medians.
BenchSummary run_benchmark(const Scenario& scenario, const BenchConfig& config);

/// Results for one replicate, in the order of config.methods.
std::vector<ReplicateRow> run_replicate(const Scenario& scenario,
                                        const BenchConfig& config,
                                        int replicate);

double median(std::vector<double> values);

}  // namespace ilamm::sim
