#pragma once

// Shared builders for the test suites. Everything is seeded through
// krylov::SeededRng so expected values stay frozen across runs.

#include <cmath>
#include <cstdint>
#include <vector>

#include "krylov/csr.hpp"
#include "krylov/dense.hpp"
#include "krylov/generators.hpp"

namespace testsupport {

using krylov::CsrMatrix;
using krylov::DenseMatrix;
using krylov::DenseVector;
using krylov::SeededRng;
using krylov::Triplet;

inline DenseVector random_vector(std::size_t n, SeededRng& rng, double lo = -1.0,
                                 double hi = 1.0) {
  DenseVector v(n);
  for (double& e : v) e = rng.uniform(lo, hi);
  return v;
}

inline DenseVector random_unit_vector(std::size_t n, SeededRng& rng) {
  DenseVector v = random_vector(n, rng);
  krylov::scale(1.0 / krylov::norm2(v), v);
  return v;
}

// Dense random entries in [-1, 1] with the diagonal shifted by `shift`
// (diagonal dominance keeps the system nonsingular and well scaled).
inline DenseMatrix random_dense(std::size_t n, SeededRng& rng, double shift) {
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += shift;
  return a;
}

inline CsrMatrix csr_from_dense(const DenseMatrix& d, double drop_below = 0.0) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (std::abs(d(i, j)) > drop_below) t.push_back({i, j, d(i, j)});
  return CsrMatrix::from_triplets(d.rows(), d.cols(), std::move(t));
}

inline CsrMatrix random_dense_as_csr(std::size_t n, SeededRng& rng, double shift) {
  return csr_from_dense(random_dense(n, rng, shift));
}

// Sparse general matrix with a guaranteed diagonal; ~extra entries per
// row drawn at random.
inline CsrMatrix random_sparse(std::size_t n, std::size_t extra_per_row, SeededRng& rng,
                               double diag_shift) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, rng.uniform(-1.0, 1.0) + diag_shift});
    for (std::size_t k = 0; k < extra_per_row; ++k)
      t.push_back({i, rng.index(n), rng.uniform(-1.0, 1.0)});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

// Dense SPD matrix M^T M + c I.
inline DenseMatrix random_spd_dense(std::size_t n, SeededRng& rng, double ridge = 1.0) {
  DenseMatrix m = random_dense(n, rng, 0.0);
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
      a(i, j) = s;
    }
  for (std::size_t i = 0; i < n; ++i) a(i, i) += ridge;
  return a;
}

inline double max_abs_diff(const DenseVector& a, const DenseVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double a_norm_error(const DenseMatrix& a, const DenseVector& x,
                           const DenseVector& x_star) {
  DenseVector e(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) e[i] = x[i] - x_star[i];
  return std::sqrt(krylov::dot(e, krylov::matvec(a, e)));
}

// The 3x3 system worked through step by step in the write-up examples.
inline CsrMatrix example1_matrix() {
  return csr_from_dense([] {
    DenseMatrix a(3, 3);
    a(0, 0) = 1; a(0, 1) = 4; a(0, 2) = 7;
    a(1, 0) = 2; a(1, 1) = 9; a(1, 2) = 7;
    a(2, 0) = 5; a(2, 1) = 8; a(2, 2) = 3;
    return a;
  }());
}

inline DenseVector example1_rhs() { return {1.0, 8.0, 2.0}; }

}  // namespace testsupport
