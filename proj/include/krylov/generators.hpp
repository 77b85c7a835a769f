#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "krylov/csr.hpp"

namespace krylov {

// Deterministic generator: raw mt19937_64 draws scaled by hand, so the
// same seed produces the same stream on every standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) {
    return std::min<std::size_t>(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 eng_;
};

// 1-D Laplacian stencil [-1, 2, -1]; symmetric positive definite.
inline CsrMatrix laplacian_1d(std::size_t n) {
  if (n < 2) throw std::invalid_argument("laplacian_1d: n must be >= 2");
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) t.push_back({i, i - 1, -1.0});
    t.push_back({i, i, 2.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

// 5-point stencil on a g x g grid with n = g*g; n must be a perfect
// square. Symmetric positive definite.
inline CsrMatrix laplacian_2d(std::size_t n) {
  const auto g = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n < 4 || g * g != n)
    throw std::invalid_argument("laplacian_2d: n must be a perfect square >= 4");
  std::vector<Triplet> t;
  t.reserve(5 * n);
  for (std::size_t row = 0; row < g; ++row) {
    for (std::size_t col = 0; col < g; ++col) {
      const std::size_t i = row * g + col;
      t.push_back({i, i, 4.0});
      if (row > 0) t.push_back({i, i - g, -1.0});
      if (row + 1 < g) t.push_back({i, i + g, -1.0});
      if (col > 0) t.push_back({i, i - 1, -1.0});
      if (col + 1 < g) t.push_back({i, i + 1, -1.0});
    }
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

// Sparse diagonally dominant matrix with a symmetric off-diagonal
// pattern (each drawn entry is mirrored) and row diagonal set to
// 1 + sum of the row's off-diagonal magnitudes. Symmetric dominance
// makes the result positive definite, so one matrix serves GMRES and CG
// side by side; identical seed, identical matrix.
inline CsrMatrix diag_dominant(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("diag_dominant: n must be >= 2");
  SeededRng rng(seed);
  std::vector<Triplet> off;
  off.reserve(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int draw = 0; draw < 2; ++draw) {
      const std::size_t j = rng.index(n);
      const double v = rng.uniform(-1.0, 1.0);
      if (j == i) continue;
      off.push_back({i, j, v});
      off.push_back({j, i, v});
    }
  }
  // Mirror-summed duplicates stay symmetric; accumulate row magnitudes
  // from the assembled off-diagonal part.
  CsrMatrix off_m = CsrMatrix::from_triplets(n, n, off);
  std::vector<Triplet> t;
  t.reserve(off_m.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t p = off_m.row_ptr()[i]; p < off_m.row_ptr()[i + 1]; ++p) {
      t.push_back({i, off_m.col_idx()[p], off_m.values()[p]});
      row_sum += std::abs(off_m.values()[p]);
    }
    t.push_back({i, i, 1.0 + row_sum});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

// M^T M + I from a seeded sparse M; positive definite by construction.
inline CsrMatrix spd_random(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("spd_random: n must be >= 2");
  SeededRng rng(seed);
  // Rows of M as (column, value) pairs, ~3 entries each.
  std::vector<std::vector<std::pair<std::size_t, double>>> m_rows(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int draw = 0; draw < 3; ++draw) {
      m_rows[k].emplace_back(rng.index(n), rng.uniform(-1.0, 1.0));
    }
  }
  std::vector<Triplet> t;
  t.reserve(9 * n + n);
  // A = sum_k (row k)^T (row k) + I
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& [ci, vi] : m_rows[k])
      for (const auto& [cj, vj] : m_rows[k]) t.push_back({ci, cj, vi * vj});
  }
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace krylov
