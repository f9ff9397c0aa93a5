#include "ilamm/sim/scenario.hpp"

#include <cmath>
#include <random>

namespace ilamm::sim {

std::string to_string(Model model) {
  switch (model) {
    case Model::Linear: return "linear";
    case Model::Logistic: return "logistic";
    case Model::HuberT3: return "huber_t3";
  }
  return "unknown";
}

Model model_from_string(const std::string& name) {
  if (name == "linear") return Model::Linear;
  if (name == "logistic") return Model::Logistic;
  if (name == "huber_t3") return Model::HuberT3;
  throw Error(ErrorCode::Parse, "unknown model '" + name + "'");
}

void Scenario::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::InvalidArgument, msg);
  };
  if (n < 2) fail("scenario needs n >= 2");
  if (d < 1) fail("scenario needs d >= 1");
  if (beta_star.size() != d) fail("beta_star length must equal d");
  if (!(sigma >= 0.0)) fail("sigma must be non-negative");
  if (replicates < 1) fail("replicates must be positive");
  if (design.kind == DesignKind::Ar1 && !(std::abs(design.rho) < 1.0)) {
    fail("AR(1) design needs rho in (-1, 1)");
  }
  if (design.kind == DesignKind::Constant &&
      !(design.rho >= 0.0 && design.rho < 1.0)) {
    fail("constant-correlation design needs rho in [0, 1)");
  }
  if (huber_alpha && !(*huber_alpha > 0.0)) fail("huber_alpha must be positive");
}

Vector default_beta_star(Index d) {
  Vector b = Vector::Zero(d);
  const double head[] = {5.0, 3.0, 0.0, 0.0, -2.0};
  for (Index j = 0; j < std::min<Index>(d, 5); ++j) b[j] = head[j];
  return b;
}

Matrix covariance_factor(const Design& design, Index d) {
  switch (design.kind) {
    case DesignKind::Independent:
      return Matrix::Identity(d, d);
    case DesignKind::Ar1: {
      const double rho = design.rho;
      if (!(std::abs(rho) < 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "AR(1) design needs |rho| < 1");
      }
      // Row i of the AR(1) Cholesky factor: rho^(i-j) for j < i, the first
      // column carrying rho^i and the rest scaled by sqrt(1 - rho^2).
      Matrix a = Matrix::Zero(d, d);
      const double s = std::sqrt(1.0 - rho * rho);
      for (Index i = 0; i < d; ++i) {
        a(i, 0) = std::pow(rho, static_cast<double>(i));
        for (Index j = 1; j <= i; ++j) {
          a(i, j) = s * std::pow(rho, static_cast<double>(i - j));
        }
      }
      return a;
    }
    case DesignKind::Constant: {
      const double rho = design.rho;
      if (!(rho >= 0.0 && rho < 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "constant-correlation design needs rho in [0, 1)");
      }
      Matrix sigma = Matrix::Constant(d, d, rho);
      sigma.diagonal().setOnes();
      Eigen::LLT<Matrix> llt(sigma);
      if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::Numerical,
                    "correlation matrix is not positive definite");
      }
      return llt.matrixL();
    }
  }
  return Matrix::Identity(d, d);
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t z = base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Colors rows of Z by the factor. Constant correlation has a cheaper
// one-factor representation, x = sqrt(rho) u 1 + sqrt(1 - rho) z, which gives
// the same distribution without forming a d x d factor.
Matrix draw_design(const Design& design, Index n, Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) z(i, j) = normal(rng);
  }
  switch (design.kind) {
    case DesignKind::Independent:
      return z;
    case DesignKind::Ar1: {
      const double rho = design.rho;
      const double s = std::sqrt(1.0 - rho * rho);
      Matrix x(n, d);
      x.col(0) = z.col(0);
      for (Index j = 1; j < d; ++j) x.col(j) = rho * x.col(j - 1) + s * z.col(j);
      return x;
    }
    case DesignKind::Constant: {
      const double rho = design.rho;
      Vector common(n);
      for (Index i = 0; i < n; ++i) common[i] = normal(rng);
      Matrix x = std::sqrt(1.0 - rho) * z;
      x.colwise() += std::sqrt(rho) * common;
      return x;
    }
  }
  return z;
}

}  // namespace

GeneratedData generate(const Scenario& scenario,
                       std::uint64_t replicate_index) {
  scenario.validate();
  std::mt19937_64 rng(replicate_seed(scenario.base_seed, replicate_index));
  const Index n = scenario.n;
  const Index d = scenario.d;
  const Matrix x = draw_design(scenario.design, n, d, rng);
  const Vector eta = x * scenario.beta_star;

  Vector y(n);
  Loss loss = Loss::squared();
  switch (scenario.model) {
    case Model::Linear: {
      std::normal_distribution<double> noise(0.0, 1.0);
      for (Index i = 0; i < n; ++i) y[i] = eta[i] + scenario.sigma * noise(rng);
      break;
    }
    case Model::HuberT3: {
      std::student_t_distribution<double> noise(3.0);
      for (Index i = 0; i < n; ++i) y[i] = eta[i] + scenario.sigma * noise(rng);
      loss = Loss::huber(scenario.huber_alpha.value_or(base_rate(n, d)));
      break;
    }
    case Model::Logistic: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (Index i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-eta[i]));
        y[i] = unif(rng) < p ? 1.0 : -1.0;
      }
      loss = Loss::logistic();
      break;
    }
  }
  GeneratedData out{normalize_columns(ProblemInstance(x, y, loss)),
                    Coefficients(scenario.beta_star), {}};
  out.support = out.truth.support();
  return out;
}

}  // namespace ilamm::sim
