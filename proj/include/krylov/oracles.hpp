#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "krylov/dense.hpp"

namespace krylov {

// Small dense ground-truth routines. They back the test suite and the
// CLI `compare` error report, and deliberately reject n > 512.
inline constexpr std::size_t kOracleSizeLimit = 512;

// Gaussian elimination with partial pivoting.
inline DenseVector dense_solve_oracle(DenseMatrix a, DenseVector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("dense_solve_oracle: matrix not square");
  if (b.size() != n) throw std::invalid_argument("dense_solve_oracle: rhs length mismatch");
  if (n > kOracleSizeLimit)
    throw std::invalid_argument("dense_solve_oracle: n > " + std::to_string(kOracleSizeLimit));

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot_row, k))) pivot_row = i;
    if (std::abs(a(pivot_row, k)) <= 1e-14 * std::max(scale, 1e-300))
      throw std::domain_error("dense_solve_oracle: singular to working precision at column " +
                              std::to_string(k));
    if (pivot_row != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(pivot_row, j));
      std::swap(b[k], b[pivot_row]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  DenseVector x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

// lambda_max / lambda_min of a symmetric positive definite matrix,
// computed by cyclic Jacobi rotations. Sweeps run until the off-diagonal
// Frobenius norm drops below 1e-10 (relative to the matrix scale).
inline double condition_number_spd_oracle(DenseMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("condition_number_spd_oracle: not square");
  if (n == 0) throw std::invalid_argument("condition_number_spd_oracle: empty matrix");
  if (n > kOracleSizeLimit)
    throw std::invalid_argument("condition_number_spd_oracle: n > " +
                                std::to_string(kOracleSizeLimit));

  double fro = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) fro += a(i, j) * a(i, j);
  fro = std::sqrt(fro);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * std::max(1.0, fro))
        throw std::invalid_argument("condition_number_spd_oracle: matrix not symmetric at (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");

  const double off_tol = 1e-10 * std::max(1.0, fro);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > off_tol; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  if (off_norm() > off_tol)
    throw std::domain_error("condition_number_spd_oracle: Jacobi sweeps did not converge");

  double lo = a(0, 0), hi = a(0, 0);
  for (std::size_t i = 1; i < n; ++i) {
    lo = std::min(lo, a(i, i));
    hi = std::max(hi, a(i, i));
  }
  if (lo <= 0.0)
    throw std::domain_error("condition_number_spd_oracle: non-positive eigenvalue " +
                            std::to_string(lo));
  return hi / lo;
}

}  // namespace krylov
