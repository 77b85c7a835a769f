#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "krylov/csr.hpp"
#include "krylov/dense.hpp"

namespace krylov {

// Factorization failure with the 0-based row where it was detected.
class PrecondError : public std::runtime_error {
 public:
  PrecondError(std::size_t row, const std::string& what)
      : std::runtime_error("preconditioner: row " + std::to_string(row) + ": " + what),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

enum class FactorKind { identity, ilu0, ic0 };

// Zero-fill triangular factors of a preconditioner M. For ilu0 the lower
// factor carries an explicit unit diagonal and `upper` holds U; for ic0
// only `lower` is stored (M = L L^T). The combined nonzero pattern never
// exceeds A's.
struct TriangularFactors {
  FactorKind kind = FactorKind::identity;
  CsrMatrix lower;
  std::optional<CsrMatrix> upper;
  std::uint64_t construction_ops = 0;  // elimination work counter

  static TriangularFactors identity_for(std::size_t n) {
    TriangularFactors f;
    f.kind = FactorKind::identity;
    f.lower = CsrMatrix::identity(n);
    return f;
  }
};

namespace detail {

// Positions of the diagonal in each CSR row; throws when one is missing.
inline std::vector<std::size_t> diagonal_positions(const CsrMatrix& a) {
  std::vector<std::size_t> diag(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t p = a.find(i, i);
    if (p == CsrMatrix::npos) throw PrecondError(i, "structurally missing diagonal");
    diag[i] = p;
  }
  return diag;
}

}  // namespace detail

// ILU(0): row-wise IKJ elimination restricted to A's sparsity pattern.
// L has an implicit unit diagonal (stored explicitly as 1), U keeps the
// pivots; (LU)[i,j] = A[i,j] at every stored position of A.
inline TriangularFactors ilu0(const CsrMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("ilu0: matrix not square");
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  std::vector<double> w = a.values();
  std::vector<std::size_t> diag = detail::diagonal_positions(a);
  std::vector<double> row_scale(n, 0.0);
  std::uint64_t ops = 0;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = rp[i]; p < diag[i]; ++p) {
      const std::size_t k = ci[p];
      const double pivot = w[diag[k]];
      if (std::abs(pivot) <= 1e-14 * row_scale[k])
        throw PrecondError(k, "vanishing pivot |u_kk| = " + std::to_string(std::abs(pivot)));
      const double factor = w[p] / pivot;
      w[p] = factor;
      ++ops;
      // Subtract factor * (row k of U) from row i, only where row i has
      // a stored entry: two-pointer walk over the sorted column lists.
      std::size_t q = diag[k] + 1;
      std::size_t t = p + 1;
      while (q < rp[k + 1] && t < rp[i + 1]) {
        if (ci[q] == ci[t]) {
          w[t] -= factor * w[q];
          ++ops;
          ++q;
          ++t;
        } else if (ci[q] < ci[t]) {
          ++q;
        } else {
          ++t;
        }
      }
    }
    double scale_i = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) scale_i = std::max(scale_i, std::abs(w[p]));
    row_scale[i] = scale_i;
    if (std::abs(w[diag[i]]) <= 1e-14 * scale_i)
      throw PrecondError(i, "vanishing pivot |u_ii| = " + std::to_string(std::abs(w[diag[i]])));
  }

  // Split the factored values into L (strict lower + unit diagonal) and
  // U (diagonal + strict upper), both with patterns contained in A's.
  std::vector<Triplet> lo, up;
  lo.reserve(a.nnz() / 2 + n);
  up.reserve(a.nnz() / 2 + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
      if (ci[p] < i)
        lo.push_back({i, ci[p], w[p]});
      else
        up.push_back({i, ci[p], w[p]});
    }
    lo.push_back({i, i, 1.0});
  }
  TriangularFactors f;
  f.kind = FactorKind::ilu0;
  f.lower = CsrMatrix::from_triplets(n, n, std::move(lo));
  f.upper = CsrMatrix::from_triplets(n, n, std::move(up));
  f.construction_ops = ops;
  return f;
}

// IC(0): incomplete Cholesky restricted to A's lower-triangle pattern,
// (L L^T)[i,j] = A[i,j] at stored lower-pattern positions.
inline TriangularFactors ic0(const CsrMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("ic0: matrix not square");
  std::size_t bi = 0, bj = 0;
  if (!is_symmetric(a, 1e-10, &bi, &bj))
    throw std::invalid_argument("ic0: matrix not symmetric at entry (" + std::to_string(bi) +
                                ", " + std::to_string(bj) + ")");

  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  std::vector<std::size_t> diag = detail::diagonal_positions(a);
  for (std::size_t i = 0; i < n; ++i)
    if (a.values()[diag[i]] <= 0.0) throw PrecondError(i, "non-positive diagonal");

  // Lower-triangle pattern of A, factored in place row by row.
  std::vector<std::size_t> lrp(n + 1, 0), lci;
  std::vector<double> lw;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = rp[i]; p <= diag[i]; ++p) {
      lci.push_back(ci[p]);
      lw.push_back(a.values()[p]);
    }
    lrp[i + 1] = lci.size();
  }
  std::uint64_t ops = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t i_diag = lrp[i + 1] - 1;
    for (std::size_t p = lrp[i]; p < i_diag; ++p) {
      const std::size_t k = lci[p];
      // dot of rows i and k over their shared columns < k
      double s = 0.0;
      std::size_t u = lrp[i];
      std::size_t v = lrp[k];
      const std::size_t k_diag = lrp[k + 1] - 1;
      while (u < p && v < k_diag) {
        if (lci[u] == lci[v]) {
          s += lw[u] * lw[v];
          ++ops;
          ++u;
          ++v;
        } else if (lci[u] < lci[v]) {
          ++u;
        } else {
          ++v;
        }
      }
      lw[p] = (lw[p] - s) / lw[k_diag];
      ++ops;
    }
    double s = 0.0;
    for (std::size_t p = lrp[i]; p < i_diag; ++p) {
      s += lw[p] * lw[p];
      ++ops;
    }
    const double under_root = lw[i_diag] - s;
    if (under_root <= 0.0)
      throw PrecondError(i, "non-positive pivot under the square root (" +
                                std::to_string(under_root) + ")");
    lw[i_diag] = std::sqrt(under_root);
  }

  TriangularFactors f;
  f.kind = FactorKind::ic0;
  f.lower = CsrMatrix(n, n, std::move(lrp), std::move(lci), std::move(lw));
  f.construction_ops = ops;
  return f;
}

namespace detail {

inline DenseVector forward_solve(const CsrMatrix& l, const DenseVector& r) {
  const std::size_t n = l.rows();
  DenseVector z(n, 0.0);
  const auto& rp = l.row_ptr();
  const auto& ci = l.col_idx();
  const auto& v = l.values();
  for (std::size_t i = 0; i < n; ++i) {
    double s = r[i];
    const std::size_t d = rp[i + 1] - 1;  // diagonal is the last entry of the row
    for (std::size_t p = rp[i]; p < d; ++p) s -= v[p] * z[ci[p]];
    if (v[d] == 0.0) throw std::domain_error("triangular solve: zero diagonal");
    z[i] = s / v[d];
  }
  return z;
}

inline DenseVector backward_solve(const CsrMatrix& u, const DenseVector& r) {
  const std::size_t n = u.rows();
  DenseVector z(n, 0.0);
  const auto& rp = u.row_ptr();
  const auto& ci = u.col_idx();
  const auto& v = u.values();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = r[ii];
    const std::size_t d = rp[ii];  // diagonal is the first entry of the row
    for (std::size_t p = d + 1; p < rp[ii + 1]; ++p) s -= v[p] * z[ci[p]];
    if (v[d] == 0.0) throw std::domain_error("triangular solve: zero diagonal");
    z[ii] = s / v[d];
  }
  return z;
}

// Solves L^T z = r using the rows of L as the columns of L^T.
inline DenseVector transpose_backward_solve(const CsrMatrix& l, DenseVector r) {
  const std::size_t n = l.rows();
  DenseVector z(n, 0.0);
  const auto& rp = l.row_ptr();
  const auto& ci = l.col_idx();
  const auto& v = l.values();
  for (std::size_t ii = n; ii-- > 0;) {
    const std::size_t d = rp[ii + 1] - 1;
    if (v[d] == 0.0) throw std::domain_error("triangular solve: zero diagonal");
    z[ii] = r[ii] / v[d];
    for (std::size_t p = rp[ii]; p < d; ++p) r[ci[p]] -= v[p] * z[ii];
  }
  return z;
}

}  // namespace detail

// Applies M^{-1}: solves M z = r with the stored factors.
inline DenseVector precond_apply(const TriangularFactors& f, const DenseVector& r) {
  switch (f.kind) {
    case FactorKind::identity:
      return r;
    case FactorKind::ilu0: {
      if (r.size() != f.lower.rows())
        throw std::invalid_argument("precond_apply: dimension mismatch");
      if (!f.upper) throw std::invalid_argument("precond_apply: ilu0 factors missing U");
      DenseVector y = detail::forward_solve(f.lower, r);
      return detail::backward_solve(*f.upper, y);
    }
    case FactorKind::ic0: {
      if (r.size() != f.lower.rows())
        throw std::invalid_argument("precond_apply: dimension mismatch");
      DenseVector y = detail::forward_solve(f.lower, r);
      return detail::transpose_backward_solve(f.lower, std::move(y));
    }
  }
  throw std::logic_error("precond_apply: unknown factor kind");
}

}  // namespace krylov
