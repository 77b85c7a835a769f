#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "krylov/csr.hpp"
#include "krylov/dense.hpp"

namespace krylov {

// Orthonormal Krylov basis V = (v_1 .. v_{m+1}) together with its
// (m+1) x m upper Hessenberg companion. When the expansion broke down at
// step j the basis holds only v_1 .. v_j and h has j columns.
struct KrylovBasis {
  std::vector<DenseVector> v_columns;
  DenseMatrix h;
  std::size_t m = 0;
  std::optional<std::size_t> breakdown_step;  // 1-based step where h_{j+1,j} vanished
};

struct ArnoldiStep {
  std::vector<double> h_column;  // h_{1,j} .. h_{j+1,j}
  bool breakdown = false;
};

// Incremental Arnoldi expansion with modified Gram-Schmidt: each
// projection is subtracted from the work vector immediately. A step
// whose subdiagonal entry falls below 1e-14 * ||op(v_j)|| is flagged as
// breakdown and produces no new basis vector (the subspace is invariant).
class ArnoldiProcess {
 public:
  static constexpr double kBreakdownTol = 1e-14;

  explicit ArnoldiProcess(DenseVector v1) {
    if (v1.empty()) throw std::invalid_argument("arnoldi: empty start vector");
    if (std::abs(norm2(v1) - 1.0) > 1e-12)
      throw std::invalid_argument("arnoldi: start vector must have unit 2-norm");
    basis_.push_back(std::move(v1));
  }

  template <typename Operator>
  ArnoldiStep advance(Operator&& op) {
    if (broken_down_) throw std::logic_error("arnoldi: advance after breakdown");
    const std::size_t j = steps_;
    DenseVector w = op(basis_[j]);
    if (w.size() != basis_[0].size())
      throw std::invalid_argument("arnoldi: operator output length mismatch");
    const double w_scale = norm2(w);
    std::vector<double> column(j + 2, 0.0);
    for (std::size_t i = 0; i <= j; ++i) {
      column[i] = dot(w, basis_[i]);
      axpy(-column[i], basis_[i], w);
    }
    const double h_sub = norm2(w);
    column[j + 1] = h_sub;
    ++steps_;
    if (h_sub <= kBreakdownTol * w_scale) {
      broken_down_ = true;
      return {std::move(column), true};
    }
    scale(1.0 / h_sub, w);
    basis_.push_back(std::move(w));
    return {std::move(column), false};
  }

  const std::vector<DenseVector>& basis() const { return basis_; }
  std::size_t steps() const { return steps_; }
  bool broke_down() const { return broken_down_; }

 private:
  std::vector<DenseVector> basis_;
  std::size_t steps_ = 0;
  bool broken_down_ = false;
};

// Runs up to m expansion steps of the operator starting from the unit
// vector v1 and assembles the basis with its Hessenberg companion.
template <typename Operator>
KrylovBasis arnoldi_expand(Operator&& op, DenseVector v1, std::size_t m) {
  if (m == 0) throw std::invalid_argument("arnoldi_expand: m must be >= 1");
  ArnoldiProcess process(std::move(v1));
  std::vector<std::vector<double>> columns;
  columns.reserve(m);
  KrylovBasis out;
  for (std::size_t j = 0; j < m; ++j) {
    ArnoldiStep step = process.advance(op);
    columns.push_back(std::move(step.h_column));
    if (step.breakdown) {
      out.breakdown_step = j + 1;
      break;
    }
  }
  out.m = columns.size();
  out.v_columns = process.basis();
  out.h = DenseMatrix(out.m + 1, out.m);
  for (std::size_t j = 0; j < out.m; ++j)
    for (std::size_t i = 0; i < columns[j].size(); ++i) out.h(i, j) = columns[j][i];
  return out;
}

// Max-norm of A V_m - V_{m+1} Hbar_m. After a breakdown the square
// relation A V_m = V_m H_m is checked instead (it holds exactly there).
inline double arnoldi_relation_residual(const CsrMatrix& a, const KrylovBasis& basis) {
  if (basis.m == 0) throw std::invalid_argument("arnoldi_relation_residual: empty basis");
  const std::size_t n = basis.v_columns.front().size();
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("arnoldi_relation_residual: dimension mismatch");
  const std::size_t v_count = basis.v_columns.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < basis.m; ++j) {
    DenseVector lhs = spmv(a, basis.v_columns[j]);
    const std::size_t terms = std::min(j + 2, v_count);
    for (std::size_t i = 0; i < terms; ++i) axpy(-basis.h(i, j), basis.v_columns[i], lhs);
    for (double e : lhs) worst = std::max(worst, std::abs(e));
  }
  return worst;
}

}  // namespace krylov
