#include "ilamm/core.hpp"

#include <algorithm>
#include <cmath>

namespace ilamm {

Loss Loss::huber(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument,
                "huber alpha must be positive and finite");
  }
  return {LossKind::Huber, alpha};
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Squared: return "squared";
    case LossKind::Logistic: return "logistic";
    case LossKind::Huber: return "huber";
  }
  return "unknown";
}

ProblemInstance::ProblemInstance(Matrix x, Vector y, Loss loss)
    : x_(std::move(x)), y_(std::move(y)), loss_(loss) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "design matrix must have at least one row and one column");
  }
  if (y_.size() != x_.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "response length " + std::to_string(y_.size()) +
                    " does not match design rows " +
                    std::to_string(x_.rows()));
  }
  if (!x_.allFinite() || !y_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "non-finite entry in X or y");
  }
  if (loss_.kind == LossKind::Huber && !(loss_.huber_alpha > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "huber alpha must be positive");
  }
  if (loss_.kind == LossKind::Logistic) {
    for (Index i = 0; i < y_.size(); ++i) {
      if (y_[i] != 1.0 && y_[i] != -1.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "logistic label at row " + std::to_string(i) +
                        " is not in {-1, +1}");
      }
    }
  }
  column_scales_ = Vector::Ones(x_.cols());
}

ProblemInstance ProblemInstance::with_loss(Loss loss) const {
  ProblemInstance out(x_, y_, loss);
  out.column_scales_ = column_scales_;
  out.normalized_ = normalized_;
  return out;
}

ProblemInstance ProblemInstance::rows(std::span<const Index> idx) const {
  Matrix xs(static_cast<Index>(idx.size()), d());
  Vector ys(static_cast<Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Index i = idx[r];
    if (i < 0 || i >= n()) {
      throw Error(ErrorCode::InvalidArgument, "row index out of range");
    }
    xs.row(static_cast<Index>(r)) = x_.row(i);
    ys[static_cast<Index>(r)] = y_[i];
  }
  ProblemInstance out(std::move(xs), std::move(ys), loss_);
  out.column_scales_ = column_scales_;
  out.normalized_ = normalized_;
  return out;
}

ProblemInstance normalize_columns(const ProblemInstance& instance) {
  ProblemInstance out = instance;
  const double target = std::sqrt(static_cast<double>(instance.n()));
  for (Index j = 0; j < out.d(); ++j) {
    const double norm = out.x_.col(j).norm();
    if (norm == 0.0) continue;
    const double scale = target / norm;
    out.x_.col(j) *= scale;
    out.column_scales_[j] *= scale;
  }
  out.normalized_ = true;
  return out;
}

Coefficients::Coefficients(Vector values)
    : values_(std::move(values)), support_(support_of(values_)) {}

std::vector<Index> support_of(const Vector& v) {
  std::vector<Index> s;
  for (Index j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) s.push_back(j);
  }
  return s;
}

Coefficients denormalize(const ProblemInstance& instance,
                         const Coefficients& beta) {
  if (beta.size() != instance.d()) {
    throw Error(ErrorCode::DimensionMismatch,
                "coefficient length does not match instance dimension");
  }
  return Coefficients(
      beta.values().cwiseProduct(instance.column_scales()).eval());
}

std::string to_string(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::Lasso: return "lasso";
    case PenaltyFamily::Scad: return "scad";
    case PenaltyFamily::Mcp: return "mcp";
    case PenaltyFamily::CappedL1: return "capped_l1";
    case PenaltyFamily::AdaptiveRecip: return "adaptive_recip";
  }
  return "unknown";
}

PenaltyFamily penalty_family_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "lasso") return PenaltyFamily::Lasso;
  if (s == "scad") return PenaltyFamily::Scad;
  if (s == "mcp") return PenaltyFamily::Mcp;
  if (s == "capped_l1" || s == "cappedl1") return PenaltyFamily::CappedL1;
  if (s == "adaptive_recip" || s == "alasso") {
    return PenaltyFamily::AdaptiveRecip;
  }
  throw Error(ErrorCode::Parse, "unknown penalty family '" + name + "'");
}

double default_concavity(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::Scad: return 3.7;
    case PenaltyFamily::Mcp: return 3.0;
    case PenaltyFamily::CappedL1: return 3.0;
    default: return 0.0;
  }
}

PenaltySpec PenaltySpec::make(PenaltyFamily family, double lambda,
                              std::optional<double> a) {
  PenaltySpec spec{family, lambda, a.value_or(default_concavity(family))};
  spec.validate();
  return spec;
}

void PenaltySpec::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  }
  switch (family) {
    case PenaltyFamily::Scad:
      if (!(a > 2.0)) {
        throw Error(ErrorCode::InvalidArgument, "SCAD requires a > 2");
      }
      break;
    case PenaltyFamily::Mcp:
    case PenaltyFamily::CappedL1:
      if (!(a > 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    to_string(family) + " requires a > 1");
      }
      break;
    default:
      break;
  }
}

double base_rate(Index n, Index d) {
  const double logd = std::max(std::log(static_cast<double>(d)), 1.0);
  return std::sqrt(logd / static_cast<double>(n));
}

double SolverConfig::resolved_eps_c(Index n, Index d) const {
  return eps_c.value_or(base_rate(n, d));
}

double SolverConfig::resolved_eps_t(Index n, Index d) const {
  if (eps_t) return *eps_t;
  return std::min(std::sqrt(1.0 / static_cast<double>(n)),
                  resolved_eps_c(n, d));
}

void SolverConfig::validate(Index n, Index d) const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::InvalidArgument, msg);
  };
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be positive");
  if (!(phi0 > 0.0)) fail("phi0 must be positive");
  if (!(gamma_u > 1.0)) fail("gamma_u must exceed 1");
  const double ec = resolved_eps_c(n, d);
  const double et = resolved_eps_t(n, d);
  if (!(ec > 0.0)) fail("eps_c must be positive");
  if (!(et > 0.0)) fail("eps_t must be positive");
  if (et > ec) fail("eps_t must not exceed eps_c");
  if (t_max < 1) fail("t_max must be at least 1");
  if (k_max < 1) fail("k_max must be at least 1");
  if (max_inflations < 1) fail("max_inflations must be at least 1");
  if (initial_beta && initial_beta->size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial beta length does not match dimension");
  }
}

}  // namespace ilamm
