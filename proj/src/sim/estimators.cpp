#include "ilamm/sim/estimators.hpp"

#include "ilamm/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ilamm::sim {

namespace {

constexpr double kNewtonGradTol = 1e-10;
constexpr int kNewtonMaxIter = 200;

// Per-sample second derivative of the loss in the linear predictor.
Vector curvature_weights(const ProblemInstance& instance, const Vector& eta) {
  const Vector& y = instance.y();
  Vector h(eta.size());
  switch (instance.loss().kind) {
    case LossKind::Squared:
      h.setOnes();
      break;
    case LossKind::Logistic:
      for (Index i = 0; i < eta.size(); ++i) {
        const double s = logistic_sample_weight(y[i] * eta[i]);
        h[i] = s * (1.0 - s);
      }
      break;
    case LossKind::Huber: {
      const double knot = 1.0 / instance.loss().huber_alpha;
      for (Index i = 0; i < eta.size(); ++i) {
        h[i] = std::abs(y[i] - eta[i]) <= knot ? 2.0 : 0.0;
      }
      break;
    }
  }
  return h;
}

Matrix weighted_gram(const Matrix& x, const Vector& h) {
  const double n = static_cast<double>(x.rows());
  return (x.transpose() * h.asDiagonal() * x) / n;
}

ProblemInstance restrict_columns(const ProblemInstance& instance,
                                 const std::vector<Index>& support) {
  Matrix xs(instance.n(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Index j = support[k];
    if (j < 0 || j >= instance.d()) {
      throw Error(ErrorCode::InvalidArgument, "support index out of range");
    }
    xs.col(static_cast<Index>(k)) = instance.x().col(j);
  }
  return ProblemInstance(std::move(xs), instance.y(), instance.loss());
}

Coefficients scatter(const Vector& coef, const std::vector<Index>& support,
                     Index d) {
  Vector full = Vector::Zero(d);
  for (std::size_t k = 0; k < support.size(); ++k) {
    full[support[k]] = coef[static_cast<Index>(k)];
  }
  return Coefficients(std::move(full));
}

Vector least_squares(const ProblemInstance& sub, bool allow_deficient) {
  const Matrix& x = sub.x();
  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  if (qr.rank() < x.cols()) {
    if (!allow_deficient) {
      throw Error(ErrorCode::Numerical,
                  "restricted design is rank deficient (rank " +
                      std::to_string(qr.rank()) + " < " +
                      std::to_string(x.cols()) + ")");
    }
    return Eigen::CompleteOrthogonalDecomposition<Matrix>(x).solve(sub.y());
  }
  return qr.solve(sub.y());
}

// Damped Newton with Armijo backtracking on the restricted problem. The
// Hessian gets a growing diagonal shift until it yields a descent direction.
Vector restricted_newton(const ProblemInstance& sub, Vector b, bool strict) {
  const Index s = sub.d();
  Vector eta = sub.x() * b;
  double value = loss_value_at(sub, eta);
  Vector grad = loss_gradient_at(sub, eta);
  for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
    if (grad.norm() <= kNewtonGradTol) return b;
    Matrix hess = weighted_gram(sub.x(), curvature_weights(sub, eta));
    double mu = 0.0;
    Vector dir;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Matrix damped = hess;
      damped.diagonal().array() += mu;
      Eigen::LDLT<Matrix> ldlt(damped);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        dir = -ldlt.solve(grad);
        if (dir.allFinite() && dir.dot(grad) < 0.0) break;
      }
      mu = mu == 0.0 ? 1e-10 * (1.0 + hess.diagonal().maxCoeff()) : mu * 10.0;
      dir.resize(0);
    }
    if (dir.size() != s) dir = -grad;

    // Armijo backtracking.
    double t = 1.0;
    const double slope = grad.dot(dir);
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vector cand = b + t * dir;
      const Vector cand_eta = sub.x() * cand;
      const double cand_value = loss_value_at(sub, cand_eta);
      if (cand_value <= value + 1e-4 * t * slope) {
        b = cand;
        eta = cand_eta;
        value = cand_value;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    grad = loss_gradient_at(sub, eta);
    if (!moved) break;
  }
  if (grad.norm() > kNewtonGradTol && strict) {
    throw Error(ErrorCode::Numerical,
                "restricted Newton stalled at gradient norm " +
                    std::to_string(grad.norm()));
  }
  return b;
}

Coefficients fit_on_support(const ProblemInstance& instance,
                            const std::vector<Index>& support, bool strict) {
  const Index d = instance.d();
  if (support.empty()) return Coefficients::zeros(d);
  if (strict && static_cast<Index>(support.size()) >= instance.n()) {
    throw Error(ErrorCode::InvalidArgument,
                "oracle support must be smaller than n");
  }
  const ProblemInstance sub = restrict_columns(instance, support);
  if (instance.loss().kind == LossKind::Squared) {
    return scatter(least_squares(sub, !strict), support, d);
  }
  if (strict) {
    Eigen::ColPivHouseholderQR<Matrix> qr(sub.x());
    if (qr.rank() < sub.d()) {
      throw Error(ErrorCode::Numerical, "restricted design is rank deficient");
    }
  }
  Vector start = Vector::Zero(sub.d());
  if (instance.loss().kind == LossKind::Huber) {
    start = least_squares(sub.with_loss(Loss::squared()), true);
  }
  return scatter(restricted_newton(sub, std::move(start), strict), support, d);
}

}  // namespace

Matrix loss_hessian(const ProblemInstance& instance, const Coefficients& beta) {
  if (beta.size() != instance.d()) {
    throw Error(ErrorCode::DimensionMismatch,
                "coefficient length does not match dimension");
  }
  const Vector eta = linear_predictor(instance, beta.values());
  return weighted_gram(instance.x(), curvature_weights(instance, eta));
}

Coefficients oracle_estimator(const ProblemInstance& instance,
                              const std::vector<Index>& support) {
  return fit_on_support(instance, support, true);
}

Coefficients refit_on_support(const ProblemInstance& instance,
                              const std::vector<Index>& support) {
  return fit_on_support(instance, support, false);
}

Coefficients adaptive_lasso_stage(const ProblemInstance& instance,
                                  const Coefficients& lasso, double lambda,
                                  const SolverConfig& config) {
  const PenaltySpec spec =
      PenaltySpec::make(PenaltyFamily::AdaptiveRecip, lambda);
  const WeightVector weights = adaptive_weights(spec, lasso);
  const double tol = config.resolved_eps_t(instance.n(), instance.d());
  return solve_subproblem(instance, weights, lasso, tol, PhiState{config.phi0},
                          config, 2)
      .beta;
}

double validation_error(const ProblemInstance& instance,
                        const Coefficients& beta) {
  const Vector eta = linear_predictor(instance, beta.values());
  const Vector& y = instance.y();
  double total = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    switch (instance.loss().kind) {
      case LossKind::Squared:
        total += (y[i] - eta[i]) * (y[i] - eta[i]);
        break;
      case LossKind::Logistic:
        total += 2.0 * logistic_sample_loss(y[i] * eta[i]);
        break;
      case LossKind::Huber:
        total += huber_sample_loss(y[i] - eta[i], instance.loss().huber_alpha);
        break;
    }
  }
  return total / static_cast<double>(eta.size());
}

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.5 * k);
  return grid;
}

CvResult cross_validate(const ProblemInstance& instance, int folds,
                        const std::vector<double>& c_grid, std::uint64_t seed,
                        const FoldFit& fit) {
  if (folds < 2) {
    throw Error(ErrorCode::InvalidArgument, "cross-validation needs >= 2 folds");
  }
  if (c_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cross-validation grid is empty");
  }
  const Index n = instance.n();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<ProblemInstance> train;
  std::vector<ProblemInstance> held_out;
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> in;
    std::vector<Index> out;
    for (Index i = 0; i < n; ++i) {
      (i % folds == f ? out : in).push_back(perm[static_cast<std::size_t>(i)]);
    }
    if (out.size() < 2 || in.size() < 2) {
      throw Error(ErrorCode::InvalidArgument,
                  "fold " + std::to_string(f) + " has fewer than 2 samples");
    }
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    train.push_back(instance.rows(in));
    held_out.push_back(instance.rows(out));
  }

  const double rate = base_rate(n, instance.d());
  CvResult result;
  for (double c : c_grid) {
    if (!(c > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "grid constants must be positive");
    }
    CvPoint point{c, c * rate, 0.0};
    for (int f = 0; f < folds; ++f) {
      const Coefficients beta = fit(train[f], point.lambda);
      point.mean_error += validation_error(held_out[f], beta);
    }
    point.mean_error /= folds;
    result.curve.push_back(point);
  }
  const CvPoint* best = &result.curve.front();
  for (const auto& p : result.curve) {
    if (p.mean_error < best->mean_error ||
        (p.mean_error == best->mean_error && p.lambda > best->lambda)) {
      best = &p;
    }
  }
  result.lambda = best->lambda;
  result.c = best->c;
  return result;
}

CvResult cross_validate_lambda(const ProblemInstance& instance,
                               const PenaltySpec& penalty, int folds,
                               const std::vector<double>& c_grid,
                               std::uint64_t seed, const SolverConfig& config) {
  return cross_validate(
      instance, folds, c_grid, seed,
      [&](const ProblemInstance& train, double lambda) {
        SolverConfig cfg = config;
        cfg.lambda = lambda;
        return solve_tac(train, penalty, cfg).final;
      });
}

}  // namespace ilamm::sim
