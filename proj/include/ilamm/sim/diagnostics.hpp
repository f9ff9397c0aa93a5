#pragma once

#include "ilamm/core.hpp"

namespace ilamm::sim {

struct SparseEigenBounds {
  double lower = 0.0;  // min over |J| <= m of lambda_min(H_JJ)
  double upper = 0.0;  // max over |J| <= m of lambda_max(H_JJ)
};

/// Brute-force localized sparse eigenvalues at beta: enumerates every
/// nonempty support J with |J| <= m and takes the extreme eigenvalues of the
/// principal submatrix of the loss Hessian. Limited to d <= 20.
SparseEigenBounds sparse_eig_bounds(const ProblemInstance& instance,
                                    const Coefficients& beta, int m);

/// Same enumeration on an explicit symmetric matrix.
SparseEigenBounds sparse_eig_bounds(const Matrix& hessian, int m);

}  // namespace ilamm::sim
