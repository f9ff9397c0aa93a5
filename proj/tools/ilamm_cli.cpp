// Command-line front end over the C API.
//
//   ilamm solve --config run.json --x X.csv --y y.csv --out DIR
//   ilamm trace --config run.json --x X.csv --y y.csv --out DIR
//   ilamm bench --config scenario.json --out DIR [--threads N] [--seed U64]

#include "ilamm/ilamm.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kNotConverged = 3 };

int exit_code_for(ilamm_status status) {
  switch (status) {
    case ILAMM_OK: return kOk;
    case ILAMM_ERR_NOT_CONVERGED: return kNotConverged;
    case ILAMM_ERR_PARSE:
    case ILAMM_ERR_SHAPE:
    case ILAMM_ERR_INVALID_ARGUMENT:
    case ILAMM_ERR_IO:
      return kUsage;
    default:
      return kFailure;
  }
}

int report(ilamm_status status, const std::string& what) {
  std::cerr << "ilamm " << what << ": " << ilamm_last_error() << '\n';
  return exit_code_for(status);
}

struct Options {
  std::string config;
  std::string x_path;
  std::string y_path;
  std::string out_dir = ".";
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

int resolve_threads(const Options& opt) {
  if (opt.threads) return *opt.threads;
  if (const char* env = std::getenv("ILAMM_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed ILAMM_THREADS='" << env << "'\n";
    }
  }
  return 1;
}

bool prepare_out(const Options& opt) {
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory '" << opt.out_dir
              << "': " << ec.message() << '\n';
    return false;
  }
  return true;
}

// Shared body of `solve` and `trace`.
int run_single(const Options& opt, bool with_trace) {
  const char* what = with_trace ? "trace" : "solve";
  if (opt.x_path.empty() || opt.y_path.empty()) {
    std::cerr << "ilamm " << what << ": --x and --y are required\n";
    return kUsage;
  }
  if (!prepare_out(opt)) return kUsage;

  ilamm_config* cfg = nullptr;
  if (ilamm_status s = ilamm_config_load(opt.config.c_str(), &cfg); s != ILAMM_OK) {
    return report(s, what);
  }
  if (opt.seed) ilamm_config_set_seed(cfg, *opt.seed);

  ilamm_problem* problem = nullptr;
  if (ilamm_status s = ilamm_problem_load_csv(opt.x_path.c_str(),
                                              opt.y_path.c_str(), cfg, &problem);
      s != ILAMM_OK) {
    ilamm_config_free(cfg);
    return report(s, what);
  }

  ilamm_result* result = nullptr;
  const fs::path out(opt.out_dir);
  const ilamm_status status =
      with_trace
          ? ilamm_trace(problem, cfg, (out / "trace.csv").string().c_str(), &result)
          : ilamm_solve(problem, cfg, &result);
  int code = exit_code_for(status);
  if (status != ILAMM_OK) report(status, what);
  if (result) {
    // Written for non-converged runs too, flagged in the metadata.
    ilamm_status ws = ilamm_result_write_coefficients(
        result, (out / "coefficients.csv").string().c_str());
    if (ws == ILAMM_OK) {
      ws = ilamm_result_write_metadata(result,
                                       (out / "metadata.json").string().c_str());
    }
    if (ws != ILAMM_OK && code == kOk) code = report(ws, what);
    if (code == kOk) {
      std::cout << "stages " << ilamm_result_stages_run(result)
                << ", LAMM iterations " << ilamm_result_total_iterations(result)
                << ", lambda " << ilamm_result_lambda(result) << '\n';
    }
  }
  ilamm_result_free(result);
  ilamm_problem_free(problem);
  ilamm_config_free(cfg);
  return code;
}

int run_bench(const Options& opt) {
  if (!prepare_out(opt)) return kUsage;
  ilamm_bench* bench = nullptr;
  if (ilamm_status s = ilamm_bench_load(opt.config.c_str(), &bench); s != ILAMM_OK) {
    return report(s, "bench");
  }
  ilamm_bench_set_threads(bench, resolve_threads(opt));
  if (opt.seed) ilamm_bench_set_seed(bench, *opt.seed);

  int code = kOk;
  const fs::path out(opt.out_dir);
  if (ilamm_status s = ilamm_bench_run(bench); s != ILAMM_OK) {
    code = report(s, "bench");
  } else if (ilamm_status w = ilamm_bench_write_summary(
                 bench, (out / "summary.csv").string().c_str());
             w != ILAMM_OK) {
    code = report(w, "bench");
  } else if (ilamm_status r = ilamm_bench_write_replicates(
                 bench, (out / "replicates.csv").string().c_str());
             r != ILAMM_OK) {
    code = report(r, "bench");
  } else {
    for (size_t i = 0; i < ilamm_bench_row_count(bench); ++i) {
      const char* method = nullptr;
      double mse = 0, tp = 0, fp = 0;
      int failures = 0;
      ilamm_bench_row(bench, i, &method, &mse, &tp, &fp, &failures);
      std::cout << method << ": median MSE " << mse << ", TP " << tp << ", FP "
                << fp << ", failures " << failures << '\n';
    }
  }
  ilamm_bench_free(bench);
  return code;
}

void add_common(CLI::App* cmd, Options& opt, bool data) {
  cmd->add_option("--config", opt.config, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  if (data) {
    cmd->add_option("--x", opt.x_path, "design matrix CSV (n rows x d columns)");
    cmd->add_option("--y", opt.y_path, "response CSV (one value per line)");
  }
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--threads", opt.threads,
                  "worker threads (default: ILAMM_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "override the seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage folded-concave penalized M-estimation (I-LAMM)"};
  app.require_subcommand(1);
  Options opt;
  auto* solve = app.add_subcommand("solve", "fit one dataset");
  auto* trace = app.add_subcommand("trace", "fit and export the convergence trace");
  auto* bench = app.add_subcommand("bench", "run a simulation scenario");
  add_common(solve, opt, true);
  add_common(trace, opt, true);
  add_common(bench, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  if (solve->parsed()) return run_single(opt, false);
  if (trace->parsed()) return run_single(opt, true);
  return run_bench(opt);
}
