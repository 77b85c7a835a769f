#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "krylov/dense.hpp"

namespace krylov {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix. Within each row the column indices are
// strictly increasing; construction validates the structure and rejects
// NaN values. Instances are immutable once built.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  CsrMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> values)
      : n_rows_(n_rows),
        n_cols_(n_cols),
        row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)),
        values_(std::move(values)) {
    validate();
  }

  static CsrMatrix identity(std::size_t n) {
    std::vector<std::size_t> rp(n + 1), ci(n);
    std::vector<double> v(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      rp[i + 1] = i + 1;
      ci[i] = i;
    }
    return CsrMatrix(n, n, std::move(rp), std::move(ci), std::move(v));
  }

  // Builds a CSR matrix from coordinate entries; duplicate (row, col)
  // entries are summed in input order.
  static CsrMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                 std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
      if (t.row >= n_rows || t.col >= n_cols)
        throw std::invalid_argument("from_triplets: index out of range");
      if (std::isnan(t.value)) throw std::invalid_argument("from_triplets: NaN value");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> rp(n_rows + 1, 0), ci;
    std::vector<double> vals;
    ci.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k > 0 && entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col) {
        vals.back() += entries[k].value;
      } else {
        ci.push_back(entries[k].col);
        vals.push_back(entries[k].value);
        ++rp[entries[k].row + 1];
      }
    }
    for (std::size_t i = 0; i < n_rows; ++i) rp[i + 1] += rp[i];
    return CsrMatrix(n_rows, n_cols, std::move(rp), std::move(ci), std::move(vals));
  }

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  // Value at (i, j); 0 when the position is not stored.
  double at(std::size_t i, std::size_t j) const {
    std::size_t p = find(i, j);
    return p == npos ? 0.0 : values_[p];
  }

  // Position of entry (i, j) in the value array, or npos.
  std::size_t find(std::size_t i, std::size_t j) const {
    if (i >= n_rows_ || j >= n_cols_) return npos;
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return npos;
    return static_cast<std::size_t>(it - col_idx_.begin());
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void validate() const {
    if (row_ptr_.size() != n_rows_ + 1) throw std::invalid_argument("csr: row_ptr length");
    if (row_ptr_.front() != 0 || row_ptr_.back() != values_.size())
      throw std::invalid_argument("csr: row_ptr endpoints");
    if (col_idx_.size() != values_.size()) throw std::invalid_argument("csr: col_idx length");
    for (std::size_t i = 0; i < n_rows_; ++i) {
      if (row_ptr_[i] > row_ptr_[i + 1]) throw std::invalid_argument("csr: row_ptr decreasing");
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        if (col_idx_[p] >= n_cols_) throw std::invalid_argument("csr: column index out of range");
        if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1])
          throw std::invalid_argument("csr: columns not strictly increasing in row " +
                                      std::to_string(i));
      }
    }
    for (double v : values_)
      if (std::isnan(v)) throw std::invalid_argument("csr: NaN value");
  }

  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

inline DenseVector spmv(const CsrMatrix& a, const DenseVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("spmv: dimension mismatch");
  DenseVector y(a.rows(), 0.0);
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += v[p] * x[ci[p]];
    y[i] = s;
  }
  return y;
}

inline DenseMatrix to_dense(const CsrMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  const auto& rp = a.row_ptr();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) d(i, a.col_idx()[p]) = a.values()[p];
  return d;
}

// Symmetry test with a scale-aware tolerance. Full pass over stored
// entries for n <= 1000, evenly spaced sample above that. On failure the
// offending index pair is reported through the optional out-parameters.
inline bool is_symmetric(const CsrMatrix& a, double tol, std::size_t* bad_row = nullptr,
                         std::size_t* bad_col = nullptr) {
  if (a.rows() != a.cols()) {
    if (bad_row) *bad_row = 0;
    if (bad_col) *bad_col = 0;
    return false;
  }
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  const std::size_t stride = a.rows() <= 1000 ? 1 : std::max<std::size_t>(1, a.nnz() / 4096);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; p += stride) {
      const std::size_t j = ci[p];
      const double mirror = a.at(j, i);
      const double s = std::max({1.0, std::abs(v[p]), std::abs(mirror)});
      if (std::abs(v[p] - mirror) > tol * s) {
        if (bad_row) *bad_row = i;
        if (bad_col) *bad_col = j;
        return false;
      }
    }
  }
  return true;
}

}  // namespace krylov
