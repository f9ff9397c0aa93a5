#include "ilamm/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ilamm::io {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& where) {
  const std::string t = trim(field);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, where + ": cannot parse '" + t + "'");
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' || c == '\r' ? ' ' : c;
  }
  return out + "\"";
}

// Rejects keys outside `allowed`.
void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::Parse, where + " must be a JSON object");
  }
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::Parse,
                  "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_as(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse,
                std::string("bad value for '") + key + "': " + e.what());
  }
}

void read_solver_keys(const json& j, SolverConfig& s) {
  if (j.contains("phi0")) s.phi0 = get_as<double>(j, "phi0");
  if (j.contains("gamma_u")) s.gamma_u = get_as<double>(j, "gamma_u");
  if (j.contains("eps_c")) s.eps_c = get_as<double>(j, "eps_c");
  if (j.contains("eps_t")) s.eps_t = get_as<double>(j, "eps_t");
  if (j.contains("t_max")) s.t_max = get_as<int>(j, "t_max");
  if (j.contains("k_max")) s.k_max = get_as<int>(j, "k_max");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) {
      row.push_back(parse_double(
          field, path.string() + " line " + std::to_string(lineno)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::Parse,
                  path.string() + " line " + std::to_string(lineno) + " has " +
                      std::to_string(row.size()) + " columns, expected " +
                      std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::Parse, path.string() + " contains no data");
  }
  Matrix x(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return x;
}

Vector read_vector_csv(const std::filesystem::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) {
    throw Error(ErrorCode::Parse,
                path.string() + " must hold one value per line");
  }
  return m.col(0);
}

Loss RunConfig::resolve_loss(Index n, Index d) const {
  switch (loss) {
    case LossKind::Squared: return Loss::squared();
    case LossKind::Logistic: return Loss::logistic();
    case LossKind::Huber: return Loss::huber(huber_alpha.value_or(base_rate(n, d)));
  }
  return Loss::squared();
}

RunConfig parse_run_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  check_keys(j,
             {"loss", "penalty", "lambda", "cv", "phi0", "gamma_u", "eps_c",
              "eps_t", "t_max", "k_max", "seed"},
             "config");
  RunConfig cfg;
  if (j.contains("loss")) {
    const json& l = j.at("loss");
    std::string kind;
    if (l.is_string()) {
      kind = l.get<std::string>();
    } else {
      check_keys(l, {"kind", "alpha"}, "loss");
      kind = get_as<std::string>(l, "kind");
      if (l.contains("alpha")) cfg.huber_alpha = get_as<double>(l, "alpha");
    }
    if (kind == "squared") {
      cfg.loss = LossKind::Squared;
    } else if (kind == "logistic") {
      cfg.loss = LossKind::Logistic;
    } else if (kind == "huber") {
      cfg.loss = LossKind::Huber;
    } else {
      throw Error(ErrorCode::Parse, "unknown loss '" + kind + "'");
    }
    if (cfg.huber_alpha && cfg.loss != LossKind::Huber) {
      throw Error(ErrorCode::Parse, "alpha is only valid for the huber loss");
    }
  }
  if (j.contains("penalty")) {
    const json& p = j.at("penalty");
    check_keys(p, {"family", "a"}, "penalty");
    cfg.family = penalty_family_from_string(get_as<std::string>(p, "family"));
    if (p.contains("a")) cfg.a = get_as<double>(p, "a");
    if (!is_tightening_family(cfg.family)) {
      throw Error(ErrorCode::Parse,
                  "penalty family must be lasso, scad, mcp or capped_l1");
    }
  }
  if (j.contains("lambda") == j.contains("cv")) {
    throw Error(ErrorCode::Parse, "config needs exactly one of 'lambda' or 'cv'");
  }
  if (j.contains("lambda")) {
    cfg.lambda = get_as<double>(j, "lambda");
    if (!(*cfg.lambda > 0.0)) {
      throw Error(ErrorCode::Parse, "lambda must be positive");
    }
  } else {
    const json& c = j.at("cv");
    check_keys(c, {"folds", "c_grid"}, "cv");
    CvSettings cv;
    if (c.contains("folds")) cv.folds = get_as<int>(c, "folds");
    if (c.contains("c_grid")) cv.c_grid = get_as<std::vector<double>>(c, "c_grid");
    cfg.cv = cv;
  }
  read_solver_keys(j, cfg.solver);
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path));
}

BenchFile parse_bench_file(const std::string& json_text) {
  const json j = parse_json(json_text);
  check_keys(j,
             {"model", "n", "d", "beta_star", "design", "sigma", "replicates",
              "base_seed", "methods", "folds", "c_grid", "scad_a", "mcp_a",
              "fit_loss", "huber_alpha", "phi0", "gamma_u", "eps_c", "eps_t",
              "t_max", "k_max"},
             "scenario");
  BenchFile out;
  sim::Scenario& sc = out.scenario;
  sim::BenchConfig& bc = out.config;
  if (j.contains("model")) {
    sc.model = sim::model_from_string(get_as<std::string>(j, "model"));
  }
  if (j.contains("n")) sc.n = get_as<Index>(j, "n");
  if (j.contains("d")) sc.d = get_as<Index>(j, "d");
  if (sc.d < 1 || sc.n < 2) {
    throw Error(ErrorCode::Parse, "scenario needs n >= 2 and d >= 1");
  }
  sc.beta_star = sim::default_beta_star(sc.d);
  if (j.contains("beta_star")) {
    const auto prefix = get_as<std::vector<double>>(j, "beta_star");
    if (static_cast<Index>(prefix.size()) > sc.d) {
      throw Error(ErrorCode::Parse, "beta_star is longer than d");
    }
    sc.beta_star.setZero();
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      sc.beta_star[static_cast<Index>(k)] = prefix[k];
    }
  }
  if (j.contains("design")) {
    const json& dj = j.at("design");
    check_keys(dj, {"kind", "rho"}, "design");
    const auto kind = get_as<std::string>(dj, "kind");
    const double rho = dj.contains("rho") ? get_as<double>(dj, "rho") : 0.0;
    if (kind == "independent") {
      sc.design = sim::Design::independent();
    } else if (kind == "constant") {
      sc.design = sim::Design::constant(rho);
    } else if (kind == "ar1") {
      sc.design = sim::Design::ar1(rho);
    } else {
      throw Error(ErrorCode::Parse, "unknown design '" + kind + "'");
    }
  }
  if (j.contains("sigma")) sc.sigma = get_as<double>(j, "sigma");
  if (j.contains("replicates")) sc.replicates = get_as<int>(j, "replicates");
  if (j.contains("base_seed")) {
    sc.base_seed = get_as<std::uint64_t>(j, "base_seed");
  }
  if (j.contains("huber_alpha")) {
    sc.huber_alpha = get_as<double>(j, "huber_alpha");
    bc.huber_alpha = sc.huber_alpha;
  }
  if (!j.contains("methods")) {
    throw Error(ErrorCode::Parse, "scenario needs a 'methods' list");
  }
  for (const auto& name : get_as<std::vector<std::string>>(j, "methods")) {
    bc.methods.push_back(sim::method_from_string(name));
  }
  if (j.contains("folds")) bc.folds = get_as<int>(j, "folds");
  if (j.contains("c_grid")) bc.c_grid = get_as<std::vector<double>>(j, "c_grid");
  if (j.contains("scad_a")) bc.scad_a = get_as<double>(j, "scad_a");
  if (j.contains("mcp_a")) bc.mcp_a = get_as<double>(j, "mcp_a");
  if (j.contains("fit_loss")) {
    const auto f = get_as<std::string>(j, "fit_loss");
    if (f == "auto") {
      bc.fit_loss = sim::FitLoss::Auto;
    } else if (f == "squared") {
      bc.fit_loss = sim::FitLoss::Squared;
    } else if (f == "huber") {
      bc.fit_loss = sim::FitLoss::Huber;
    } else {
      throw Error(ErrorCode::Parse, "unknown fit_loss '" + f + "'");
    }
  }
  read_solver_keys(j, bc.solver);
  try {
    sc.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return out;
}

BenchFile load_bench_file(const std::filesystem::path& path) {
  return parse_bench_file(read_file(path));
}

void write_coefficients(const std::filesystem::path& path,
                        const Coefficients& beta) {
  auto out = open_out(path);
  out << "index,value\n";
  for (Index j = 0; j < beta.size(); ++j) {
    out << j << ',' << format_number(beta[j]) << '\n';
  }
}

void write_metadata(const std::filesystem::path& path,
                    const SolveResult& result, const RunMetadata& meta) {
  json j;
  j["converged"] = meta.converged;
  j["lambda"] = meta.lambda;
  j["stages_run"] = result.stages_run;
  j["total_lamm_iterations"] = result.total_lamm_iterations;
  j["final_omega_per_stage"] = result.stage_omegas;
  j["tolerance_per_stage"] = result.stage_tolerances;
  j["support_size"] = result.final.support().size();
  if (!meta.message.empty()) j["message"] = meta.message;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_summary(const std::filesystem::path& path,
                   const sim::BenchSummary& summary) {
  auto out = open_out(path);
  out << "method,median_mse,median_tp,median_fp,median_time_s,failures\n";
  for (const auto& r : summary.rows) {
    out << to_string(r.method) << ',' << format_number(r.median_mse) << ','
        << format_number(r.median_tp) << ',' << format_number(r.median_fp)
        << ',' << format_number(r.median_seconds) << ',' << r.failures << '\n';
  }
}

void write_replicates(const std::filesystem::path& path,
                      const sim::BenchSummary& summary) {
  auto out = open_out(path);
  out << "replicate,method,lambda,mse,tp,fp,time_s,status,error\n";
  for (const auto& r : summary.replicates) {
    out << r.replicate << ',' << to_string(r.method) << ','
        << format_number(r.lambda) << ',' << format_number(r.metrics.mse)
        << ',' << r.metrics.tp << ',' << r.metrics.fp << ','
        << format_number(r.seconds) << ',' << (r.ok ? "ok" : "failed") << ','
        << csv_quote(r.error) << '\n';
  }
}

void write_trace(const std::filesystem::path& path,
                 const std::vector<TraceRow>& rows) {
  auto out = open_out(path);
  out << "stage,k,phi,F,omega,dist_to_stage_opt,log10_dist\n";
  for (const auto& r : rows) {
    out << r.stage << ',' << r.k << ',' << format_number(r.phi) << ','
        << format_number(r.objective) << ',' << format_number(r.omega) << ','
        << format_number(r.dist_to_stage_opt) << ','
        << format_number(r.log10_dist) << '\n';
  }
}

}  // namespace ilamm::io
