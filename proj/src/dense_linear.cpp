#include "airnet/dense_linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace airnet {

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double v : row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

SolveReport lu_solve(Matrix a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("lu_solve: matrix is not square");
  if (b.size() != n) throw std::invalid_argument("lu_solve: rhs length does not match matrix");

  SolveReport report;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (double v : a.row(i)) scale = std::max(scale, std::abs(v));
  if (n == 0) {
    report.solution = std::vector<double>{};
    report.pivot_ratio = 1.0;
    return report;
  }
  if (scale == 0.0) {
    report.singular = true;
    return report;
  }

  std::vector<double> x(b.begin(), b.end());
  double min_pivot = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    const double pivot = std::abs(a(p, k));
    min_pivot = std::min(min_pivot, pivot);
    if (pivot < kSingularPivotRatio * scale) {
      report.singular = true;
      report.pivot_ratio = pivot / scale;
      return report;
    }
    if (p != k) {
      std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(p).begin());
      std::swap(x[k], x[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      x[i] -= f * x[k];
    }
  }

  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  report.pivot_ratio = min_pivot / scale;
  report.solution = std::move(x);
  return report;
}

}  // namespace airnet
