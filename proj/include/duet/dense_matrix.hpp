#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace duet {

// Row-major matrix of doubles. Entries are finite on construction; code that
// writes through the mutable accessors is responsible for keeping them so.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  DenseMatrix transposed() const;

  // Bitwise-value equality (0.0 == -0.0 as usual for doubles).
  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

double max_abs(const DenseMatrix& m);

// Max-norm of a - b. Shapes must agree.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix scaled(const DenseMatrix& m, double factor);

}  // namespace duet
