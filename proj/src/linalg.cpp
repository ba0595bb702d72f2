#include "duet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "duet/error.hpp"

namespace duet {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Inputs with at most this fraction of nonzeros use the sparse Gram path.
constexpr double kSparseGramDensity = 0.125;

void mirror_lower(DenseMatrix& g) {
  const std::size_t n = g.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i);
  }
}

// Lower triangle of acc += weight * MᵀM, skipping zero entries of M.
void accumulate_sparse_lower(DenseMatrix& acc, const DenseMatrix& m,
                             double weight) {
  std::vector<std::size_t> idx;
  std::vector<double> val;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    idx.clear();
    val.clear();
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0.0) {
        idx.push_back(c);
        val.push_back(row[c]);
      }
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double wa = weight * val[a];
      auto acc_row = acc.row(idx[a]);
      for (std::size_t b = 0; b <= a; ++b) acc_row[idx[b]] += wa * val[b];
    }
  }
}

void accumulate_dense_lower(DenseMatrix& acc, const DenseMatrix& m,
                            double weight) {
  Eigen::Map<const RowMatrix> mm(m.values().data(), m.rows(), m.cols());
  Eigen::Map<RowMatrix> g(acc.values().data(), acc.rows(), acc.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(mm.transpose(), weight);
}

bool is_sparse(const DenseMatrix& m) {
  const auto v = m.values();
  const auto nnz = static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
  return static_cast<double>(nnz) <=
         kSparseGramDensity * static_cast<double>(v.size());
}

void accumulate_lower(DenseMatrix& acc, const DenseMatrix& m, double weight) {
  if (is_sparse(m)) {
    accumulate_sparse_lower(acc, m, weight);
  } else {
    accumulate_dense_lower(acc, m, weight);
  }
}

void require_symmetric(const DenseMatrix& a) {
  if (a.empty()) {
    throw Error(ErrorCode::kInvalidInput, "cannot factorize an empty matrix");
  }
  if (!a.is_square()) {
    throw Error(ErrorCode::kInvalidInput,
                "cannot factorize a non-square " + std::to_string(a.rows()) +
                    "x" + std::to_string(a.cols()) + " matrix");
  }
  const double tol = 1e-12 * std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) {
        throw Error(ErrorCode::kInvalidInput,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

DenseMatrix gram(const DenseMatrix& m, GramSide side) {
  if (m.empty()) {
    throw Error(ErrorCode::kInvalidInput, "gram of an empty matrix");
  }
  if (side == GramSide::kRight) return gram(m.transposed(), GramSide::kLeft);
  DenseMatrix g(m.cols(), m.cols());
  accumulate_lower(g, m, 1.0);
  mirror_lower(g);
  return g;
}

void add_weighted_gram(DenseMatrix& acc, const DenseMatrix& m, double weight) {
  if (acc.rows() != m.cols() || acc.cols() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Gram accumulator is " + std::to_string(acc.rows()) + "x" +
                    std::to_string(acc.cols()) + " but input has " +
                    std::to_string(m.cols()) + " columns");
  }
  if (weight == 0.0 || m.empty()) return;
  // Accumulate into a scratch lower triangle so the existing contents of acc
  // need not be symmetric-aware.
  DenseMatrix g(m.cols(), m.cols());
  accumulate_lower(g, m, weight);
  mirror_lower(g);
  auto dst = acc.values();
  const auto src = g.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

std::vector<double> SpdFactorization::solve(std::span<const double> rhs) const {
  const std::size_t n = dimension();
  if (rhs.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "right-hand side has " + std::to_string(rhs.size()) +
                    " entries, expected " + std::to_string(n));
  }
  std::vector<double> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    const auto li = factor_.row(i);
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
    y[i] = s / li[i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= factor_(k, ii) * y[k];
    y[ii] = s / factor_(ii, ii);
  }
  return y;
}

DenseMatrix SpdFactorization::inverse() const {
  const std::size_t n = dimension();
  Eigen::Map<const RowMatrix> l(factor_.values().data(), n, n);
  RowMatrix l_inv = RowMatrix::Identity(n, n);
  l.triangularView<Eigen::Lower>().solveInPlace(l_inv);
  DenseMatrix p(n, n);
  Eigen::Map<RowMatrix> pm(p.values().data(), n, n);
  pm.selfadjointView<Eigen::Lower>().rankUpdate(l_inv.transpose());
  mirror_lower(p);
  return p;
}

SpdFactorization spd_factorize(const DenseMatrix& a) {
  require_symmetric(a);
  const std::size_t n = a.rows();
  Eigen::Map<const RowMatrix> am(a.values().data(), n, n);
  Eigen::LLT<RowMatrix, Eigen::Lower> llt(am);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "non-positive pivot in Cholesky factorization of a " +
                    std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  DenseMatrix factor(n, n);
  Eigen::Map<RowMatrix> fm(factor.values().data(), n, n);
  fm = llt.matrixL();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(factor(i, i) > 0.0) || !std::isfinite(factor(i, i))) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "degenerate pivot at index " + std::to_string(i));
    }
  }
  return SpdFactorization(std::move(factor));
}

DenseMatrix spd_inverse(const DenseMatrix& a) {
  DenseMatrix p = spd_factorize(a).inverse();
  for (std::size_t i = 0; i < p.rows(); ++i) {
    if (!(p(i, i) > 0.0) || !std::isfinite(p(i, i))) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "inverse has non-positive diagonal at index " +
                      std::to_string(i));
    }
  }
  return p;
}

}  // namespace duet
