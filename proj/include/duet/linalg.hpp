#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "duet/dense_matrix.hpp"

namespace duet {

// kLeft gives MᵀM (cols x cols), kRight gives MMᵀ (rows x rows).
enum class GramSide { kLeft, kRight };

// Symmetric Gram product. Sparse inputs (binary interaction matrices, thin
// association matrices) take a row-outer-product path that skips zeros;
// dense inputs go through a blocked rank update. The upper triangle is
// mirrored from the lower, so the result is exactly symmetric.
DenseMatrix gram(const DenseMatrix& m, GramSide side);

// acc += weight * MᵀM. acc must be cols x cols.
void add_weighted_gram(DenseMatrix& acc, const DenseMatrix& m, double weight);

// Cholesky factor A = L Lᵀ of a symmetric positive-definite matrix.
class SpdFactorization {
 public:
  std::size_t dimension() const noexcept { return factor_.rows(); }

  // Lower-triangular, row-major; entries above the diagonal are zero.
  const DenseMatrix& factor() const noexcept { return factor_; }

  std::vector<double> solve(std::span<const double> rhs) const;

  // A⁻¹ = L⁻ᵀ L⁻¹, exactly symmetric.
  DenseMatrix inverse() const;

 private:
  friend SpdFactorization spd_factorize(const DenseMatrix& a);
  explicit SpdFactorization(DenseMatrix factor) : factor_(std::move(factor)) {}

  DenseMatrix factor_;
};

// Throws InvalidInput for empty, non-square or non-symmetric input and
// NotPositiveDefinite when a pivot is not strictly positive.
SpdFactorization spd_factorize(const DenseMatrix& a);

// Inverse of an SPD matrix via its Cholesky factor. Diagonal of the result
// is checked to be strictly positive.
DenseMatrix spd_inverse(const DenseMatrix& a);

}  // namespace duet
