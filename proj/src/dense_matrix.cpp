#include "duet/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "duet/error.hpp"

namespace duet {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidInput,
                "matrix payload has " + std::to_string(values_.size()) +
                    " values, expected " + std::to_string(rows_) + "x" +
                    std::to_string(cols_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kInvalidInput,
                  "non-finite matrix entry at (" + std::to_string(i / cols_) +
                      ", " + std::to_string(i % cols_) + ")");
    }
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(n_rows * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) {
      throw Error(ErrorCode::kInvalidInput, "ragged row list");
    }
    values.insert(values.end(), r.begin(), r.end());
  }
  return DenseMatrix(n_rows, n_cols, std::move(values));
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  // Blocked to keep both sides cache-friendly on large Gram inputs.
  constexpr std::size_t kBlock = 32;
  for (std::size_t r0 = 0; r0 < rows_; r0 += kBlock) {
    const std::size_t r1 = std::min(rows_, r0 + kBlock);
    for (std::size_t c0 = 0; c0 < cols_; c0 += kBlock) {
      const std::size_t c1 = std::min(cols_, c0 + kBlock);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) t(c, r) = (*this)(r, c);
      }
    }
  }
  return t;
}

double max_abs(const DenseMatrix& m) {
  double best = 0.0;
  for (double v : m.values()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot compare " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " with " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  double best = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    best = std::max(best, std::abs(av[i] - bv[i]));
  }
  return best;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot multiply " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " by " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  DenseMatrix out(a.rows(), b.cols());
  if (out.empty() || a.cols() == 0) return out;
  Eigen::Map<const RowMatrix> lhs(a.values().data(), a.rows(), a.cols());
  Eigen::Map<const RowMatrix> rhs(b.values().data(), b.rows(), b.cols());
  Eigen::Map<RowMatrix> res(out.values().data(), out.rows(), out.cols());
  res.noalias() = lhs * rhs;
  return out;
}

DenseMatrix scaled(const DenseMatrix& m, double factor) {
  DenseMatrix out = m;
  for (double& v : out.values()) v *= factor;
  return out;
}

}  // namespace duet
