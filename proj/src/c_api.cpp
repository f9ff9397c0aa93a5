#include "ilamm/ilamm.h"

#include "ilamm/io.hpp"
#include "ilamm/sim/estimators.hpp"
#include "ilamm/solver.hpp"
#include "ilamm/trace.hpp"

#include <cstring>
#include <string>

struct ilamm_config {
  ilamm::io::RunConfig run;
};

struct ilamm_problem {
  ilamm::ProblemInstance instance;
};

struct ilamm_result {
  ilamm::SolveResult solve;
  double lambda = 0.0;
  std::string message;
};

struct ilamm_bench {
  ilamm::io::BenchFile file;
  std::optional<ilamm::sim::BenchSummary> summary;
  std::vector<std::string> method_names;
};

namespace {

thread_local std::string g_last_error;

ilamm_status to_status(ilamm::ErrorCode code) {
  using ilamm::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return ILAMM_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return ILAMM_ERR_SHAPE;
    case ErrorCode::NotConverged: return ILAMM_ERR_NOT_CONVERGED;
    case ErrorCode::Numerical: return ILAMM_ERR_NUMERICAL;
    case ErrorCode::Io: return ILAMM_ERR_IO;
    case ErrorCode::Parse: return ILAMM_ERR_PARSE;
  }
  return ILAMM_ERR_INTERNAL;
}

ilamm_status fail(ilamm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ilamm_status guarded(F&& body) {
  try {
    return body();
  } catch (const ilamm::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ILAMM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ILAMM_ERR_INTERNAL, e.what());
  }
}

ilamm_status null_argument(const char* name) {
  return fail(ILAMM_ERR_INVALID_ARGUMENT,
              std::string("null argument '") + name + "'");
}

ilamm::LossKind loss_kind(ilamm_loss loss) {
  switch (loss) {
    case ILAMM_LOSS_SQUARED: return ilamm::LossKind::Squared;
    case ILAMM_LOSS_LOGISTIC: return ilamm::LossKind::Logistic;
    case ILAMM_LOSS_HUBER: return ilamm::LossKind::Huber;
  }
  throw ilamm::Error(ilamm::ErrorCode::InvalidArgument, "unknown loss");
}

ilamm::PenaltyFamily penalty_family(ilamm_penalty p) {
  switch (p) {
    case ILAMM_PENALTY_LASSO: return ilamm::PenaltyFamily::Lasso;
    case ILAMM_PENALTY_SCAD: return ilamm::PenaltyFamily::Scad;
    case ILAMM_PENALTY_MCP: return ilamm::PenaltyFamily::Mcp;
    case ILAMM_PENALTY_CAPPED_L1: return ilamm::PenaltyFamily::CappedL1;
  }
  throw ilamm::Error(ilamm::ErrorCode::InvalidArgument, "unknown penalty");
}

// Resolves lambda (directly or by cross-validation) into a solver config.
ilamm::SolverConfig resolve_solver(const ilamm::ProblemInstance& inst,
                                   const ilamm::io::RunConfig& run,
                                   const ilamm::PenaltySpec& spec) {
  ilamm::SolverConfig cfg = run.solver;
  if (run.lambda) {
    cfg.lambda = *run.lambda;
  } else {
    const auto grid =
        run.cv->c_grid.empty() ? ilamm::sim::default_c_grid() : run.cv->c_grid;
    cfg.lambda = ilamm::sim::cross_validate_lambda(inst, spec, run.cv->folds,
                                                   grid, run.seed, cfg)
                     .lambda;
  }
  return cfg;
}

ilamm::PenaltySpec penalty_of(const ilamm::io::RunConfig& run) {
  return ilamm::PenaltySpec::make(run.family, 1.0, run.a);
}

}  // namespace

extern "C" {

const char* ilamm_version(void) { return "1.0.0"; }

const char* ilamm_last_error(void) { return g_last_error.c_str(); }

ilamm_status ilamm_config_create(ilamm_loss loss, ilamm_penalty family,
                                 double a, double lambda, ilamm_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    auto cfg = std::make_unique<ilamm_config>();
    cfg->run.loss = loss_kind(loss);
    cfg->run.family = penalty_family(family);
    if (a > 0.0) cfg->run.a = a;
    cfg->run.lambda = lambda;
    ilamm::PenaltySpec::make(cfg->run.family, lambda, cfg->run.a);
    *out = cfg.release();
    return ILAMM_OK;
  });
}

ilamm_status ilamm_config_parse(const char* json_text, ilamm_config** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto cfg = std::make_unique<ilamm_config>();
    cfg->run = ilamm::io::parse_run_config(json_text);
    *out = cfg.release();
    return ILAMM_OK;
  });
}

ilamm_status ilamm_config_load(const char* path, ilamm_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto cfg = std::make_unique<ilamm_config>();
    cfg->run = ilamm::io::load_run_config(path);
    *out = cfg.release();
    return ILAMM_OK;
  });
}

ilamm_status ilamm_config_set_tolerances(ilamm_config* cfg, double eps_c,
                                         double eps_t) {
  if (!cfg) return null_argument("cfg");
  if (!(eps_c > 0.0) || !(eps_t > 0.0) || eps_t > eps_c) {
    return fail(ILAMM_ERR_INVALID_ARGUMENT,
                "tolerances need 0 < eps_t <= eps_c");
  }
  cfg->run.solver.eps_c = eps_c;
  cfg->run.solver.eps_t = eps_t;
  return ILAMM_OK;
}

ilamm_status ilamm_config_set_seed(ilamm_config* cfg, uint64_t seed) {
  if (!cfg) return null_argument("cfg");
  cfg->run.seed = seed;
  return ILAMM_OK;
}

void ilamm_config_free(ilamm_config* cfg) { delete cfg; }

ilamm_status ilamm_problem_create(size_t n, size_t d, const double* x_row_major,
                                  const double* y, ilamm_loss loss,
                                  double huber_alpha, ilamm_problem** out) {
  if (!x_row_major) return null_argument("x_row_major");
  if (!y) return null_argument("y");
  if (!out) return null_argument("out");
  return guarded([&] {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>;
    const auto rows = static_cast<ilamm::Index>(n);
    const auto cols = static_cast<ilamm::Index>(d);
    ilamm::Matrix x = Eigen::Map<const RowMajor>(x_row_major, rows, cols);
    ilamm::Vector yv = Eigen::Map<const ilamm::Vector>(y, rows);
    ilamm::Loss l{loss_kind(loss), 0.0};
    if (l.kind == ilamm::LossKind::Huber) {
      l = ilamm::Loss::huber(huber_alpha > 0.0 ? huber_alpha
                                               : ilamm::base_rate(rows, cols));
    }
    *out = new ilamm_problem{ilamm::ProblemInstance(std::move(x), std::move(yv), l)};
    return ILAMM_OK;
  });
}

ilamm_status ilamm_problem_load_csv(const char* x_path, const char* y_path,
                                    const ilamm_config* cfg,
                                    ilamm_problem** out) {
  if (!x_path) return null_argument("x_path");
  if (!y_path) return null_argument("y_path");
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guarded([&] {
    ilamm::Matrix x = ilamm::io::read_matrix_csv(x_path);
    ilamm::Vector y = ilamm::io::read_vector_csv(y_path);
    if (y.size() != x.rows()) {
      throw ilamm::Error(ilamm::ErrorCode::DimensionMismatch,
                         "y has " + std::to_string(y.size()) +
                             " values but X has " + std::to_string(x.rows()) +
                             " rows");
    }
    const ilamm::Loss loss = cfg->run.resolve_loss(x.rows(), x.cols());
    *out = new ilamm_problem{ilamm::ProblemInstance(std::move(x), std::move(y), loss)};
    return ILAMM_OK;
  });
}

size_t ilamm_problem_n(const ilamm_problem* p) {
  return p ? static_cast<size_t>(p->instance.n()) : 0;
}

size_t ilamm_problem_d(const ilamm_problem* p) {
  return p ? static_cast<size_t>(p->instance.d()) : 0;
}

void ilamm_problem_free(ilamm_problem* p) { delete p; }

ilamm_status ilamm_solve(const ilamm_problem* p, const ilamm_config* cfg,
                         ilamm_result** out) {
  if (!p) return null_argument("problem");
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const ilamm::PenaltySpec spec = penalty_of(cfg->run);
    const ilamm::SolverConfig solver = resolve_solver(p->instance, cfg->run, spec);
    auto result = std::make_unique<ilamm_result>();
    result->lambda = solver.lambda;
    try {
      result->solve = ilamm::solve_tac(p->instance, spec, solver);
    } catch (const ilamm::NotConverged& e) {
      if (e.partial()) result->solve = *e.partial();
      result->message = e.what();
      *out = result.release();
      return fail(ILAMM_ERR_NOT_CONVERGED, e.what());
    }
    *out = result.release();
    return ILAMM_OK;
  });
}

ilamm_status ilamm_trace(const ilamm_problem* p, const ilamm_config* cfg,
                         const char* trace_path, ilamm_result** out) {
  if (!p) return null_argument("problem");
  if (!cfg) return null_argument("cfg");
  if (!trace_path) return null_argument("trace_path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const ilamm::PenaltySpec spec = penalty_of(cfg->run);
    const ilamm::SolverConfig solver = resolve_solver(p->instance, cfg->run, spec);
    auto result = std::make_unique<ilamm_result>();
    result->lambda = solver.lambda;
    try {
      ilamm::TraceReport report = ilamm::trace_solve(p->instance, spec, solver);
      ilamm::io::write_trace(trace_path, report.rows);
      result->solve = std::move(report.result);
    } catch (const ilamm::NotConverged& e) {
      if (e.partial()) result->solve = *e.partial();
      result->message = e.what();
      *out = result.release();
      return fail(ILAMM_ERR_NOT_CONVERGED, e.what());
    }
    *out = result.release();
    return ILAMM_OK;
  });
}

size_t ilamm_result_dim(const ilamm_result* r) {
  return r ? static_cast<size_t>(r->solve.final.size()) : 0;
}

int ilamm_result_converged(const ilamm_result* r) {
  return r && r->solve.converged ? 1 : 0;
}

int ilamm_result_stages_run(const ilamm_result* r) {
  return r ? r->solve.stages_run : 0;
}

int ilamm_result_total_iterations(const ilamm_result* r) {
  return r ? r->solve.total_lamm_iterations : 0;
}

double ilamm_result_lambda(const ilamm_result* r) { return r ? r->lambda : 0.0; }

ilamm_status ilamm_result_coefficients(const ilamm_result* r, double* out,
                                       size_t len) {
  if (!r) return null_argument("result");
  if (!out) return null_argument("out");
  const auto& v = r->solve.final.values();
  if (len != static_cast<size_t>(v.size())) {
    return fail(ILAMM_ERR_SHAPE, "buffer length " + std::to_string(len) +
                                     " does not match dimension " +
                                     std::to_string(v.size()));
  }
  std::memcpy(out, v.data(), len * sizeof(double));
  return ILAMM_OK;
}

ilamm_status ilamm_result_write_coefficients(const ilamm_result* r,
                                             const char* path) {
  if (!r) return null_argument("result");
  if (!path) return null_argument("path");
  return guarded([&] {
    ilamm::io::write_coefficients(path, r->solve.final);
    return ILAMM_OK;
  });
}

ilamm_status ilamm_result_write_metadata(const ilamm_result* r,
                                         const char* path) {
  if (!r) return null_argument("result");
  if (!path) return null_argument("path");
  return guarded([&] {
    ilamm::io::write_metadata(path, r->solve,
                              {r->solve.converged, r->lambda, r->message});
    return ILAMM_OK;
  });
}

void ilamm_result_free(ilamm_result* r) { delete r; }

ilamm_status ilamm_bench_load(const char* scenario_path, ilamm_bench** out) {
  if (!scenario_path) return null_argument("scenario_path");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new ilamm_bench{ilamm::io::load_bench_file(scenario_path), {}, {}};
    return ILAMM_OK;
  });
}

ilamm_status ilamm_bench_parse(const char* scenario_json, ilamm_bench** out) {
  if (!scenario_json) return null_argument("scenario_json");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new ilamm_bench{ilamm::io::parse_bench_file(scenario_json), {}, {}};
    return ILAMM_OK;
  });
}

ilamm_status ilamm_bench_set_threads(ilamm_bench* b, int threads) {
  if (!b) return null_argument("bench");
  if (threads < 1) return fail(ILAMM_ERR_INVALID_ARGUMENT, "threads must be >= 1");
  b->file.config.threads = threads;
  return ILAMM_OK;
}

ilamm_status ilamm_bench_set_seed(ilamm_bench* b, uint64_t seed) {
  if (!b) return null_argument("bench");
  b->file.scenario.base_seed = seed;
  return ILAMM_OK;
}

ilamm_status ilamm_bench_run(ilamm_bench* b) {
  if (!b) return null_argument("bench");
  return guarded([&] {
    b->summary = ilamm::sim::run_benchmark(b->file.scenario, b->file.config);
    b->method_names.clear();
    for (const auto& row : b->summary->rows) {
      b->method_names.push_back(ilamm::sim::to_string(row.method));
    }
    return ILAMM_OK;
  });
}

size_t ilamm_bench_row_count(const ilamm_bench* b) {
  return b && b->summary ? b->summary->rows.size() : 0;
}

ilamm_status ilamm_bench_row(const ilamm_bench* b, size_t i, const char** method,
                             double* median_mse, double* median_tp,
                             double* median_fp, int* failures) {
  if (!b) return null_argument("bench");
  if (!b->summary) return fail(ILAMM_ERR_INVALID_ARGUMENT, "benchmark not run");
  if (i >= b->summary->rows.size()) {
    return fail(ILAMM_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const auto& row = b->summary->rows[i];
  if (method) *method = b->method_names[i].c_str();
  if (median_mse) *median_mse = row.median_mse;
  if (median_tp) *median_tp = row.median_tp;
  if (median_fp) *median_fp = row.median_fp;
  if (failures) *failures = row.failures;
  return ILAMM_OK;
}

ilamm_status ilamm_bench_write_summary(const ilamm_bench* b, const char* path) {
  if (!b) return null_argument("bench");
  if (!path) return null_argument("path");
  if (!b->summary) return fail(ILAMM_ERR_INVALID_ARGUMENT, "benchmark not run");
  return guarded([&] {
    ilamm::io::write_summary(path, *b->summary);
    return ILAMM_OK;
  });
}

ilamm_status ilamm_bench_write_replicates(const ilamm_bench* b,
                                          const char* path) {
  if (!b) return null_argument("bench");
  if (!path) return null_argument("path");
  if (!b->summary) return fail(ILAMM_ERR_INVALID_ARGUMENT, "benchmark not run");
  return guarded([&] {
    ilamm::io::write_replicates(path, *b->summary);
    return ILAMM_OK;
  });
}

void ilamm_bench_free(ilamm_bench* b) { delete b; }

}  // extern "C"
