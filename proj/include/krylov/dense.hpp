#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace krylov {

using DenseVector = std::vector<double>;

inline double dot(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const DenseVector& v) { return std::sqrt(dot(v, v)); }

// y += alpha * x
inline void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, DenseVector& v) {
  for (double& e : v) e *= alpha;
}

// Row-major dense matrix. Holds Hessenberg companions, oracle workspaces
// and test mirrors; not meant for large systems.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t n_rows, std::size_t n_cols, double fill = 0.0)
      : n_rows_(n_rows), n_cols_(n_cols), data_(n_rows * n_cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> data_;
};

inline DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
  DenseVector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace krylov
