#include <doctest.h>

#include "helpers.hpp"
#include "ilamm/lamm.hpp"

#include <cmath>

using namespace ilamm;

namespace {

// Isotropic majorizer at `old`, without the constant L(old).
double majorized(const Iterate& old, const Vector& b, const WeightVector& w, double phi) {
  const Vector step = b - old.beta.values();
  double pen = 0.0;
  for (Index j = 0; j < b.size(); ++j)
    if (b[j] != 0.0) pen += w[j] * std::abs(b[j]);
  return old.gradient.dot(step) + 0.5 * phi * step.squaredNorm() + pen;
}

// One coordinate of the majorizer: g t + phi/2 t^2 + w |b0 + t|, in terms of b = b0 + t.
double coord_q(double b, double b0, double g, double w, double phi) {
  const double t = b - b0;
  return g * t + 0.5 * phi * t * t + w * std::abs(b);
}

// Grid argmin over [lo, hi] in two passes: step 1e-4, then 1e-8 around the best.
double grid_argmin(double b0, double g, double w, double phi, double lo, double hi) {
  double best = lo, best_q = coord_q(lo, b0, g, w, phi);
  for (long i = 0; lo + i * 1e-4 <= hi; ++i) {
    const double b = lo + i * 1e-4;
    const double q = coord_q(b, b0, g, w, phi);
    if (q < best_q) best_q = q, best = b;
  }
  const double centre = best;
  for (long i = -10000; i <= 10000; ++i) {
    const double b = centre + i * 1e-8;
    const double q = coord_q(b, b0, g, w, phi);
    if (q < best_q) best_q = q, best = b;
  }
  return best;
}

ProblemInstance scaled_instance(std::mt19937_64& rng, Index n, Index d, double top) {
  Matrix x = testutil::gaussian_matrix(rng, n, d);
  const double eig = testutil::power_iteration(x.transpose() * x / double(n));
  x *= std::sqrt(top / eig);
  return {x, testutil::gaussian_vector(rng, n, 2.0), Loss::squared()};
}

SolverConfig config_with(double phi0, double gamma_u = 2.0) {
  SolverConfig c;
  c.phi0 = phi0;
  c.gamma_u = gamma_u;
  return c;
}

}  // namespace

TEST_CASE("soft threshold examples") {
  Vector x(1), t(1);
  x << 3.0;
  t << 1.0;
  CHECK(soft_threshold(x, t)[0] == 2.0);
  x << -0.5;
  CHECK(soft_threshold(x, t)[0] == 0.0);

  std::mt19937_64 rng(1);
  Vector r = testutil::gaussian_vector(rng, 7);
  CHECK(soft_threshold(r, Vector::Zero(7)) == r);

  Vector a(3), b(3), want(3);
  a << 2.0, -3.0, 0.1;
  b << kFrozen, 1.0, 1.0;
  want << 0.0, -2.0, 0.0;
  CHECK(soft_threshold(a, b) == want);
  CHECK_THROWS_AS(soft_threshold(a, Vector::Zero(2)), Error);
}

TEST_CASE("objective examples") {
  Vector y(2);
  y << 1.0, 2.0;
  ProblemInstance inst(Matrix::Identity(2, 2), y, Loss::squared());
  const WeightVector w = Vector::Constant(2, 0.1);
  CHECK(objective(inst, Coefficients::zeros(2), w) == doctest::Approx(1.25));
  CHECK(objective(inst, Coefficients(y), w) == doctest::Approx(0.3).epsilon(1e-14));

  std::mt19937_64 rng(3);
  for (auto kind : {LossKind::Squared, LossKind::Logistic, LossKind::Huber}) {
    auto r = testutil::random_instance(rng, 7, 4, kind);
    Vector b = testutil::gaussian_vector(rng, 4);
    Vector wv = testutil::gaussian_vector(rng, 4).cwiseAbs();
    const double expect = evaluate_loss(r, Coefficients(b)).value + wv.dot(b.cwiseAbs());
    CHECK(objective(r, Coefficients(b), wv) == doctest::Approx(expect).epsilon(1e-14));
  }

  WeightVector frozen(2);
  frozen << kFrozen, 0.1;
  Vector b(2);
  b << 0.0, 1.0;
  CHECK(objective(inst, Coefficients(b), frozen) ==
        doctest::Approx(0.5 + 0.1).epsilon(1e-14));
  b << 1.0, 1.0;
  CHECK_THROWS_AS(objective(inst, Coefficients(b), frozen), Error);
}

TEST_CASE("prox step matches the grid oracle") {
  SUBCASE("one dimensional example") {
    Matrix x(1, 1);
    x << 1.0;
    Vector y(1);
    y << 2.0;
    ProblemInstance inst(x, y, Loss::squared());
    const WeightVector w = Vector::Constant(1, 0.5);
    const Coefficients got = prox_step(inst, Coefficients::zeros(1), w, 1.0);
    CHECK(got[0] == doctest::Approx(1.5).epsilon(1e-15));
    const Iterate old = make_iterate(inst, Coefficients::zeros(1));
    CHECK(old.gradient[0] == doctest::Approx(-2.0));
    CHECK(std::abs(grid_argmin(0.0, -2.0, 0.5, 1.0, -4.0, 4.0) - got[0]) <= 1e-6);
  }
  SUBCASE("random coordinates") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int rep = 0; rep < 6; ++rep) {
      auto inst = testutil::random_instance(rng, 6, 3, LossKind::Squared);
      const Vector b0 = testutil::gaussian_vector(rng, 3, 0.5);
      const WeightVector w = testutil::gaussian_vector(rng, 3, 0.5).cwiseAbs();
      const double phi = u(rng);
      const Iterate old = make_iterate(inst, Coefficients(b0));
      const Coefficients got = prox_step(old, w, phi);
      for (Index j = 0; j < 3; ++j) {
        const double lo = got[j] - 2.0, hi = got[j] + 2.0;
        const double g = grid_argmin(b0[j], old.gradient[j], w[j], phi, lo, hi);
        CHECK(std::abs(g - got[j]) <= 1e-6);
      }
    }
  }
  SUBCASE("no shrinkage is a gradient step") {
    std::mt19937_64 rng(6);
    auto inst = testutil::random_instance(rng, 5, 3, LossKind::Logistic);
    const Iterate old = make_iterate(inst, Coefficients(testutil::gaussian_vector(rng, 3)));
    const Coefficients got = prox_step(old, Vector::Zero(3), 1.0);
    CHECK((got.values() - (old.beta.values() - old.gradient)).norm() <= 1e-15);
  }
  SUBCASE("frozen coordinates stay zero") {
    std::mt19937_64 rng(8);
    auto inst = testutil::random_instance(rng, 5, 3, LossKind::Squared);
    WeightVector w = Vector::Zero(3);
    w[1] = kFrozen;
    CHECK(prox_step(inst, Coefficients::zeros(3), w, 0.01)[1] == 0.0);
  }
  CHECK_THROWS_AS(prox_step(ProblemInstance(Matrix::Identity(2, 2), Vector::Ones(2),
                                            Loss::squared()),
                            Coefficients::zeros(2), Vector::Zero(2), 0.0),
                  Error);
}

TEST_CASE("prox step beats every perturbation") {
  std::mt19937_64 rng(9);
  for (auto kind : {LossKind::Squared, LossKind::Logistic, LossKind::Huber}) {
    for (int rep = 0; rep < 30; ++rep) {
      auto inst = testutil::random_instance(rng, 8, 4, kind);
      const Iterate old = make_iterate(inst, Coefficients(testutil::gaussian_vector(rng, 4)));
      const WeightVector w = testutil::gaussian_vector(rng, 4, 0.3).cwiseAbs();
      const double phi = 1.5;
      const Vector p = prox_step(old, w, phi).values();
      const double q = majorized(old, p, w, phi);
      for (Index j = 0; j < 4; ++j) {
        for (double eps : {-1e-3, 1e-3}) {
          Vector moved = p;
          moved[j] += eps;
          CHECK(majorized(old, moved, w, phi) >= q - 1e-15);
        }
      }
    }
  }
}

TEST_CASE("majorization check") {
  std::mt19937_64 rng(12);
  SUBCASE("same point holds with zero gap") {
    for (auto kind : {LossKind::Squared, LossKind::Logistic, LossKind::Huber}) {
      auto inst = testutil::random_instance(rng, 6, 3, kind);
      Coefficients b(testutil::gaussian_vector(rng, 3));
      auto m = majorization_holds(inst, b, b, Vector::Constant(3, 0.1), 1.0);
      CHECK(m.holds);
      CHECK(m.gap == 0.0);
    }
  }
  SUBCASE("top eigenvalue majorizes globally") {
    for (int rep = 0; rep < 20; ++rep) {
      auto inst = testutil::random_instance(rng, 9, 4, LossKind::Squared);
      const double top = testutil::power_iteration(inst.x().transpose() * inst.x() / 9.0);
      const Coefficients old(testutil::gaussian_vector(rng, 4));
      for (int k = 0; k < 10; ++k) {
        const Coefficients fresh(testutil::gaussian_vector(rng, 4, 3.0));
        auto m = majorization_holds(inst, fresh, old, Vector::Constant(4, 0.2),
                                    top * (1 + 1e-9));
        CHECK(m.holds);
        CHECK(m.gap >= -1e-12);
      }
    }
  }
  SUBCASE("gap equals psi minus F") {
    for (auto kind : {LossKind::Squared, LossKind::Logistic, LossKind::Huber}) {
      auto inst = testutil::random_instance(rng, 6, 3, kind);
      const Coefficients old(testutil::gaussian_vector(rng, 3));
      const Coefficients fresh(testutil::gaussian_vector(rng, 3));
      const WeightVector w = Vector::Constant(3, 0.3);
      const double phi = 0.7;
      const LossEval e = evaluate_loss(inst, old);
      const Vector step = fresh.values() - old.values();
      const double psi = e.value + e.gradient.dot(step) + 0.5 * phi * step.squaredNorm() +
                         w.dot(fresh.values().cwiseAbs());
      const double f = objective(inst, fresh, w);
      const auto m = majorization_holds(inst, fresh, old, w, phi);
      CHECK(m.gap == doctest::Approx(psi - f).epsilon(1e-10));
      CHECK(m.holds == (psi - f >= 0.0));
    }
  }
  SUBCASE("too small phi fails somewhere") {
    int failures = 0;
    for (int rep = 0; rep < 20; ++rep) {
      Vector y = testutil::gaussian_vector(rng, 3, 3.0);
      ProblemInstance inst(Matrix::Identity(3, 3), y, Loss::squared());
      const WeightVector w = Vector::Constant(3, 0.05);
      const Coefficients old = Coefficients::zeros(3);
      const double phi = 0.01;  // top eigenvalue is 1/3
      const Coefficients fresh = prox_step(inst, old, w, phi);
      if (!majorization_holds(inst, fresh, old, w, phi).holds) ++failures;
    }
    CHECK(failures > 0);
  }
}

TEST_CASE("lamm_iterate") {
  std::mt19937_64 rng(14);
  SUBCASE("no inflation above the top eigenvalue") {
    for (int rep = 0; rep < 10; ++rep) {
      auto inst = testutil::random_instance(rng, 10, 4, LossKind::Squared);
      const double top = testutil::power_iteration(inst.x().transpose() * inst.x() / 10.0);
      const SolverConfig cfg = config_with(1e-6);
      // incoming phi is divided by gamma_u first
      const auto step = lamm_iterate(inst, Vector::Constant(4, 0.1), Coefficients::zeros(4),
                                     PhiState{2.0 * top * (1 + 1e-9)}, cfg);
      CHECK(step.inflations == 0);
    }
  }
  SUBCASE("inflation from phi0 stops below gamma_u times the curvature") {
    for (int rep = 0; rep < 10; ++rep) {
      auto inst = scaled_instance(rng, 12, 3, 0.5);
      const auto step = lamm_iterate(inst, Vector::Constant(3, 0.05), Coefficients::zeros(3),
                                     PhiState{1e-6}, config_with(1e-6));
      CHECK(step.inflations > 0);
      CHECK(step.phi.phi <= 2.0 * 0.5 * (1 + 1e-9));
    }
  }
  SUBCASE("stationary point is a fixed point") {
    Vector y(2);
    y << 3.0, 0.2;
    ProblemInstance inst(Matrix::Identity(2, 2), y, Loss::squared());
    Vector opt(2);
    opt << 2.0, 0.0;
    const WeightVector w = Vector::Constant(2, 0.5);
    const auto step = lamm_iterate(inst, w, Coefficients(opt), PhiState{1.0}, config_with(1e-6));
    CHECK((step.next.beta.values() - opt).norm() <= 1e-14);
    CHECK(objective(inst, step.next.beta, w) ==
          doctest::Approx(objective(inst, Coefficients(opt), w)).epsilon(1e-15));
  }
  SUBCASE("phi bookkeeping") {
    for (int rep = 0; rep < 20; ++rep) {
      auto inst = testutil::random_instance(rng, 8, 3, LossKind::Logistic);
      const SolverConfig cfg = config_with(1e-3, 3.0);
      const double incoming = std::pow(10.0, -4.0 + rep * 0.3);
      const auto step = lamm_iterate(inst, Vector::Constant(3, 0.05),
                                     Coefficients(testutil::gaussian_vector(rng, 3)),
                                     PhiState{incoming}, cfg);
      const double start = std::max(cfg.phi0, incoming / cfg.gamma_u);
      CHECK(step.phi.phi >= start);
      CHECK(step.phi.phi ==
            doctest::Approx(start * std::pow(cfg.gamma_u, step.inflations)).epsilon(1e-14));
      CHECK(step.next.loss == doctest::Approx(loss_value(inst, step.next.beta)).epsilon(1e-14));
    }
  }
  SUBCASE("inflation cap throws") {
    auto inst = scaled_instance(rng, 10, 3, 50.0);
    SolverConfig cfg = config_with(1e-9);
    cfg.max_inflations = 3;
    try {
      lamm_iterate(inst, Vector::Zero(3), Coefficients::zeros(3), PhiState{1e-9}, cfg);
      FAIL("expected a numerical error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Numerical);
    }
  }
  SUBCASE("bad configuration") {
    auto inst = testutil::random_instance(rng, 4, 2, LossKind::Squared);
    CHECK_THROWS_AS(lamm_iterate(inst, Vector::Zero(2), Coefficients::zeros(2), PhiState{1.0},
                                 config_with(1e-6, 1.0)),
                    Error);
    CHECK_THROWS_AS(lamm_iterate(inst, Vector::Zero(3), Coefficients::zeros(2), PhiState{1.0},
                                 config_with(1e-6)),
                    Error);
  }
}

TEST_CASE("monotone descent on random instances") {
  std::mt19937_64 rng(2024);
  const LossKind losses[] = {LossKind::Squared, LossKind::Logistic, LossKind::Huber};
  const PenaltyFamily families[] = {PenaltyFamily::Lasso, PenaltyFamily::Scad,
                                    PenaltyFamily::Mcp, PenaltyFamily::CappedL1,
                                    PenaltyFamily::AdaptiveRecip};
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> lam(0.01, 0.5);
  std::bernoulli_distribution sparse(0.3);
  int violations = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const LossKind kind = losses[rep % 3];
    const PenaltyFamily family = families[(rep / 3) % 5];
    const Index d = dim(rng);
    auto inst = testutil::random_instance(rng, dim(rng) + 3, d, kind);
    Vector ref = testutil::gaussian_vector(rng, d);
    for (Index j = 0; j < d; ++j)
      if (sparse(rng)) ref[j] = 0.0;
    const auto spec = PenaltySpec::make(family, lam(rng));
    const WeightVector w = adaptive_weights(spec, Coefficients(ref));
    Vector start = testutil::gaussian_vector(rng, d);
    for (Index j = 0; j < d; ++j)
      if (is_frozen(w[j])) start[j] = 0.0;
    Iterate it = make_iterate(inst, Coefficients(start));
    PhiState phi{1e-6};
    const SolverConfig cfg = config_with(1e-6);
    double f = objective(inst, it.beta, w);
    for (int k = 0; k < 15; ++k) {
      auto step = lamm_iterate(inst, w, it, phi, cfg);
      const double next = objective(inst, step.next.beta, w);
      if (next > f + 1e-10) ++violations;
      for (Index j = 0; j < d; ++j)
        if (is_frozen(w[j]) && step.next.beta[j] != 0.0) ++violations;
      f = next;
      phi = step.phi;
      it = std::move(step.next);
    }
  }
  CHECK(violations == 0);
}
