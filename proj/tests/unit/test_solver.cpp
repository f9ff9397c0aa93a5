#include <doctest.h>

#include "helpers.hpp"
#include "ilamm/solver.hpp"

#include <cmath>

using namespace ilamm;

namespace {

constexpr int kXiGrid = 100001;  // step 2e-5 on [-1, 1]

// min over a xi grid of |g + w xi|, or the forced sign on the support.
double brute_omega(const Vector& g, const Vector& beta, const WeightVector& w) {
  double worst = 0.0;
  for (Index j = 0; j < g.size(); ++j) {
    double r;
    if (is_frozen(w[j])) {
      r = 0.0;
    } else if (beta[j] != 0.0) {
      r = std::abs(g[j] + w[j] * (beta[j] > 0 ? 1.0 : -1.0));
    } else {
      r = std::abs(g[j] - w[j]);
      for (int i = 0; i < kXiGrid; ++i) {
        const double xi = -1.0 + 2.0 * i / (kXiGrid - 1);
        r = std::min(r, std::abs(g[j] + w[j] * xi));
      }
    }
    worst = std::max(worst, r);
  }
  return worst;
}

double golden_min(auto&& f, double lo, double hi, double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - inv_phi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + inv_phi * (b - a), fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

SolverConfig tac_config(double lambda, double eps_c, double eps_t) {
  SolverConfig c;
  c.lambda = lambda;
  c.eps_c = eps_c;
  c.eps_t = eps_t;
  return c;
}

// Sparse truth plus noise, normalized; the usual strong-signal setup in miniature.
ProblemInstance sparse_instance(std::mt19937_64& rng, Index n, Index d, LossKind kind) {
  Matrix x = testutil::gaussian_matrix(rng, n, d);
  Vector beta = Vector::Zero(d);
  beta[0] = 3.0;
  beta[1] = -2.0;
  beta[2] = 1.5;
  Vector eta = x * beta;
  Vector y(n);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u;
  for (Index i = 0; i < n; ++i) {
    if (kind == LossKind::Logistic) {
      y[i] = u(rng) < 1.0 / (1.0 + std::exp(-eta[i])) ? 1.0 : -1.0;
    } else {
      y[i] = eta[i] + z(rng);
    }
  }
  Loss loss = kind == LossKind::Squared    ? Loss::squared()
              : kind == LossKind::Logistic ? Loss::logistic()
                                           : Loss::huber(0.5);
  return normalize_columns(ProblemInstance(x, y, loss));
}

}  // namespace

TEST_CASE("suboptimality example against brute force") {
  Vector g(2), b(2);
  g << 0.3, -0.9;
  b << 0.0, 1.0;
  const WeightVector w = Vector::Constant(2, 0.5);
  const double omega = suboptimality(g, Coefficients(b), w);
  CHECK(omega == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(std::abs(omega - brute_omega(g, b, w)) <= 1e-8);
  CHECK(suboptimality(g, Coefficients(b), Vector::Zero(2)) == doctest::Approx(0.9));
}

TEST_CASE("suboptimality on random inputs against brute force") {
  std::mt19937_64 rng(51);
  std::bernoulli_distribution zero(0.5), freeze(0.15);
  for (int rep = 0; rep < 40; ++rep) {
    const Index d = 5;
    Vector g = testutil::gaussian_vector(rng, d);
    Vector b = testutil::gaussian_vector(rng, d);
    WeightVector w = testutil::gaussian_vector(rng, d).cwiseAbs();
    for (Index j = 0; j < d; ++j) {
      if (zero(rng)) b[j] = 0.0;
      if (b[j] == 0.0 && freeze(rng)) w[j] = kFrozen;
      // put -g/w on the xi grid so the brute force is exact
      if (b[j] == 0.0 && !is_frozen(w[j]) && std::abs(g[j]) < w[j]) {
        const double xi = -1.0 + 2.0 * std::round((1.0 - g[j] / w[j]) / 2.0 * (kXiGrid - 1)) /
                                     (kXiGrid - 1);
        g[j] = -w[j] * xi;
      }
    }
    CHECK(std::abs(suboptimality(g, Coefficients(b), w) - brute_omega(g, b, w)) <= 1e-8);
  }
}

TEST_CASE("subproblem stopping rule") {
  Vector y(2);
  y << 3.0, 0.2;
  ProblemInstance inst(Matrix::Identity(2, 2), y, Loss::squared());
  const WeightVector w = Vector::Constant(2, 0.5);
  SolverConfig cfg;

  SUBCASE("orthogonal design closed form") {
    auto r = solve_subproblem(inst, w, Coefficients::zeros(2), 1e-8, PhiState{}, cfg);
    CHECK(std::abs(r.beta[0] - 2.0) <= 1e-6);
    CHECK(r.beta[1] == 0.0);
    CHECK(r.omega <= 1e-8);
    CHECK(r.iterations == static_cast<int>(r.trace.records.size()));
    CHECK(r.iterations <= cfg.k_max);
  }
  SUBCASE("epsilon optimal start returns immediately") {
    Vector opt(2);
    opt << 2.0, 0.0;
    auto r = solve_subproblem(inst, w, Coefficients(opt), 1e-8, PhiState{0.3}, cfg);
    CHECK(r.iterations == 0);
    CHECK(r.beta.values() == opt);
    CHECK(r.phi.phi == 0.3);
  }
  SUBCASE("k_max exceeded") {
    cfg.k_max = 2;
    try {
      solve_subproblem(inst, w, Coefficients::zeros(2), 1e-300, PhiState{}, cfg);
      FAIL("expected NotConverged");
    } catch (const NotConverged& e) {
      CHECK(e.code() == ErrorCode::NotConverged);
      CHECK(e.best().size() == 2);
      CHECK(e.best_omega() > 0.0);
    }
  }
  CHECK_THROWS_AS(solve_subproblem(inst, w, Coefficients::zeros(2), 0.0, PhiState{}, cfg), Error);
}

TEST_CASE("one free coordinate matches golden section") {
  std::mt19937_64 rng(53);
  for (auto kind : {LossKind::Squared, LossKind::Logistic, LossKind::Huber}) {
    auto inst = testutil::random_instance(rng, 12, 4, kind);
    WeightVector w = Vector::Constant(4, kFrozen);
    w[2] = 0.0;
    auto r = solve_subproblem(inst, w, Coefficients::zeros(4), 1e-11, PhiState{}, SolverConfig{});
    auto f = [&](double t) {
      Vector b = Vector::Zero(4);
      b[2] = t;
      return loss_value(inst, Coefficients(b));
    };
    const double want = golden_min(f, -30.0, 30.0);
    CHECK(std::abs(r.beta[2] - want) <= 1e-6);
    CHECK(r.beta[0] == 0.0);
    CHECK(r.beta[1] == 0.0);
    CHECK(r.beta[3] == 0.0);
  }
}

TEST_CASE("lasso runs one stage") {
  std::mt19937_64 rng(55);
  auto inst = sparse_instance(rng, 40, 30, LossKind::Squared);
  const double lam = 2.0 * base_rate(40, 30);
  auto res = solve_tac(inst, PenaltySpec::make(PenaltyFamily::Lasso, lam),
                       tac_config(lam, 1e-3, 1e-4));
  CHECK(res.stages_run == 1);
  CHECK(res.per_stage_estimates.size() == 1);
  CHECK(res.final.values() == res.per_stage_estimates[0].values());
  CHECK(res.converged);
}

TEST_CASE("solve_tac invariants across losses and penalties") {
  std::mt19937_64 rng(57);
  for (auto kind : {LossKind::Squared, LossKind::Logistic, LossKind::Huber}) {
    for (auto family : {PenaltyFamily::Scad, PenaltyFamily::Mcp, PenaltyFamily::CappedL1}) {
      auto inst = sparse_instance(rng, 60, 25, kind);
      const double lam = 1.5 * base_rate(60, 25);
      const auto spec = PenaltySpec::make(family, lam);
      const SolverConfig cfg = tac_config(lam, 0.05, 1e-5);
      const auto res = solve_tac(inst, spec, cfg);

      REQUIRE(res.stages_run >= 1);
      CHECK(res.per_stage_estimates.size() == static_cast<std::size_t>(res.stages_run));
      CHECK(res.traces.size() == static_cast<std::size_t>(res.stages_run));
      CHECK(res.final.values() == res.per_stage_estimates.back().values());
      CHECK(res.stages_run <= cfg.t_max);

      int total = 0;
      for (int l = 0; l < res.stages_run; ++l) {
        // certificate recomputed from scratch
        const double omega = suboptimality(inst, res.per_stage_estimates[l], res.stage_weights[l]);
        CHECK(omega <= res.stage_tolerances[l]);
        CHECK(res.stage_tolerances[l] == (l == 0 ? 0.05 : 1e-5));
        if (l == 0) CHECK(res.stage_weights[0] == Vector::Constant(25, lam));
        if (l > 0) {
          CHECK(res.stage_weights[l] ==
                adaptive_weights(spec, res.per_stage_estimates[l - 1]));
          for (Index j = 0; j < 25; ++j) {
            if (std::abs(res.per_stage_estimates[l - 1][j]) >= spec.a * lam)
              CHECK(res.stage_weights[l][j] == 0.0);
          }
        }
        const auto& recs = res.traces[l].records;
        total += static_cast<int>(recs.size());
        for (std::size_t k = 1; k < recs.size(); ++k) {
          CHECK(recs[k].objective <= recs[k - 1].objective + 1e-12);
        }
      }
      CHECK(total == res.total_lamm_iterations);
      if (res.stages_run < cfg.t_max) {
        CHECK(adaptive_weights(spec, res.final) == res.stage_weights.back());
      }

      // warm start from the last stage is a no-op
      const auto again = solve_subproblem(inst, res.stage_weights.back(), res.final,
                                          res.stage_tolerances.back(),
                                          PhiState{res.final_phi}, cfg);
      CHECK(again.iterations == 0);
      CHECK(again.beta.values() == res.final.values());

      // bit-identical on a rerun
      const auto twin = solve_tac(inst, spec, cfg);
      CHECK(twin.final.values() == res.final.values());
      CHECK(twin.total_lamm_iterations == res.total_lamm_iterations);
    }
  }
}

TEST_CASE("tightening improves on the contraction stage for strong signals") {
  std::mt19937_64 rng(59);
  int better = 0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    auto inst = sparse_instance(rng, 100, 40, LossKind::Squared);
    const double lam = 1.5 * base_rate(100, 40);
    const auto res = solve_tac(inst, PenaltySpec::make(PenaltyFamily::Scad, lam),
                               tac_config(lam, base_rate(100, 40), 1e-6));
    Vector truth = Vector::Zero(40);
    truth << 3.0, -2.0, 1.5, Vector::Zero(37);
    const Vector scaled = denormalize(inst, res.final).values();
    const Vector first = denormalize(inst, res.per_stage_estimates[0]).values();
    if ((scaled - truth).norm() <= (first - truth).norm()) ++better;
  }
  CHECK(better >= 8);
}

TEST_CASE("non-convergence carries the partial result") {
  std::mt19937_64 rng(61);
  auto inst = sparse_instance(rng, 30, 10, LossKind::Squared);
  SolverConfig cfg = tac_config(0.2, 1e-300, 1e-300);
  cfg.k_max = 3;
  try {
    solve_tac(inst, PenaltySpec::make(PenaltyFamily::Scad, 0.2), cfg);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    REQUIRE(e.partial().has_value());
    CHECK_FALSE(e.partial()->converged);
    CHECK(e.partial()->final.size() == 10);
  }
}

TEST_CASE("initial beta and observer") {
  std::mt19937_64 rng(63);
  auto inst = sparse_instance(rng, 50, 12, LossKind::Squared);
  SolverConfig cfg = tac_config(0.3, 0.05, 1e-4);
  int calls = 0;
  const auto res = solve_tac(inst, PenaltySpec::make(PenaltyFamily::Scad, 0.3), cfg,
                             [&](int, int, const Coefficients&) { ++calls; });
  CHECK(calls == res.total_lamm_iterations);

  cfg.initial_beta = res.per_stage_estimates[0].values();
  const auto warm = solve_tac(inst, PenaltySpec::make(PenaltyFamily::Scad, 0.3), cfg);
  CHECK(warm.traces[0].records.empty());

  cfg.initial_beta = Vector::Zero(5);
  CHECK_THROWS_AS(solve_tac(inst, PenaltySpec::make(PenaltyFamily::Scad, 0.3), cfg), Error);
}
