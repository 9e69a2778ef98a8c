#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace airnet {

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> multiply(std::span<const double> x) const;
  /// Max absolute row sum.
  double norm_inf() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SolveReport {
  std::optional<std::vector<double>> solution;
  bool singular = false;
  /// Smallest |pivot| over largest initial |entry|; 0 for a zero matrix.
  double pivot_ratio = 0.0;
};

inline constexpr double kSingularPivotRatio = 1e-12;

/// LU with partial pivoting. A pivot below kSingularPivotRatio times the
/// largest initial entry marks the system singular. Throws
/// std::invalid_argument on dimension mismatch.
SolveReport lu_solve(Matrix a, std::span<const double> b);

}  // namespace airnet
