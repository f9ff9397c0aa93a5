#pragma once

#include "ilamm/core.hpp"
#include "ilamm/sim/benchmark.hpp"
#include "ilamm/sim/scenario.hpp"
#include "ilamm/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ilamm::io {

/// %.17g, round-trip exact for doubles.
std::string format_number(double value);

/// n rows of comma-separated reals. Blank lines are skipped; every row must
/// have the same width.
Matrix read_matrix_csv(const std::filesystem::path& path);
/// One real per line.
Vector read_vector_csv(const std::filesystem::path& path);

struct CvSettings {
  int folds = 3;
  std::vector<double> c_grid;
};

/// Parsed solve/trace configuration file.
struct RunConfig {
  LossKind loss = LossKind::Squared;
  std::optional<double> huber_alpha;  // unset: base_rate(n, d)
  PenaltyFamily family = PenaltyFamily::Scad;
  std::optional<double> a;
  std::optional<double> lambda;
  std::optional<CvSettings> cv;
  SolverConfig solver;
  std::uint64_t seed = 0;

  Loss resolve_loss(Index n, Index d) const;
};

/// Keys: loss, penalty {family, a}, lambda | cv {folds, c_grid}, phi0,
/// gamma_u, eps_c, eps_t, t_max, k_max, seed. `loss` is "squared",
/// "logistic", "huber", or {"kind": "huber", "alpha": x}. Unknown keys are
/// rejected with ErrorCode::Parse.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

struct BenchFile {
  sim::Scenario scenario;
  sim::BenchConfig config;
};

/// Keys: model, n, d, beta_star (prefix, zero padded), design {kind, rho},
/// sigma, replicates, base_seed, methods, folds, c_grid, scad_a, mcp_a,
/// fit_loss, huber_alpha, phi0, gamma_u, eps_c, eps_t, t_max, k_max.
BenchFile parse_bench_file(const std::string& json_text);
BenchFile load_bench_file(const std::filesystem::path& path);

void write_coefficients(const std::filesystem::path& path,
                        const Coefficients& beta);

struct RunMetadata {
  bool converged = true;
  double lambda = 0.0;
  std::string message;
};

void write_metadata(const std::filesystem::path& path,
                    const SolveResult& result, const RunMetadata& meta);

void write_summary(const std::filesystem::path& path,
                   const sim::BenchSummary& summary);
void write_replicates(const std::filesystem::path& path,
                      const sim::BenchSummary& summary);
void write_trace(const std::filesystem::path& path,
                 const std::vector<TraceRow>& rows);

}  // namespace ilamm::io
