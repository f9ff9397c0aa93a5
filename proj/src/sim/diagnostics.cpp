#include "ilamm/sim/diagnostics.hpp"

#include "ilamm/sim/estimators.hpp"

#include <bit>
#include <cstdint>
#include <limits>

namespace ilamm::sim {

namespace {
constexpr Index kMaxDimension = 20;
}

SparseEigenBounds sparse_eig_bounds(const Matrix& hessian, int m) {
  const Index d = hessian.rows();
  if (hessian.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch, "Hessian must be square");
  }
  if (d > kMaxDimension) {
    throw Error(ErrorCode::InvalidArgument,
                "exhaustive sparse eigenvalues need d <= 20 (got " +
                    std::to_string(d) + ")");
  }
  if (m < 1 || m > d) {
    throw Error(ErrorCode::InvalidArgument, "support size m must lie in [1, d]");
  }
  SparseEigenBounds out{std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity()};
  const std::uint32_t limit = std::uint32_t{1} << d;
  std::vector<Index> cols;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    if (std::popcount(mask) > m) continue;
    cols.clear();
    for (Index j = 0; j < d; ++j) {
      if (mask & (std::uint32_t{1} << j)) cols.push_back(j);
    }
    const Index k = static_cast<Index>(cols.size());
    Matrix sub(k, k);
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) sub(a, b) = hessian(cols[a], cols[b]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sub, Eigen::EigenvaluesOnly);
    out.lower = std::min(out.lower, eig.eigenvalues().minCoeff());
    out.upper = std::max(out.upper, eig.eigenvalues().maxCoeff());
  }
  return out;
}

SparseEigenBounds sparse_eig_bounds(const ProblemInstance& instance,
                                    const Coefficients& beta, int m) {
  if (instance.d() > kMaxDimension) {
    throw Error(ErrorCode::InvalidArgument,
                "exhaustive sparse eigenvalues need d <= 20 (got " +
                    std::to_string(instance.d()) + ")");
  }
  return sparse_eig_bounds(loss_hessian(instance, beta), m);
}

}  // namespace ilamm::sim
