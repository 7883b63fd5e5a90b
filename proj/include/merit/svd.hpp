#pragma once

#include <cstdint>
#include <vector>

#include "merit/linalg.hpp"

namespace merit {

/// Rank-k factors: columns of u and v orthonormal, s non-increasing.
struct SvdFactors {
  Matrix u;               // n x k
  std::vector<double> s;  // k
  Matrix v;               // m x k
};

/// Randomized truncated SVD: Gaussian range finder plus subspace (power)
/// iterations, small-side factorization by one-sided Jacobi. Deterministic
/// for a fixed (matrix, k, seed, oversample, power_iters).
SvdFactors truncated_svd(const SparseMatrix& m, std::size_t k, std::uint64_t seed,
                         std::size_t oversample = 10, std::size_t power_iters = 2);

/// Thin QR orthonormal factor (Householder); a must have rows >= cols.
Matrix qr_q(const Matrix& a);

}  // namespace merit
