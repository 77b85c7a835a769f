#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "krylov/arnoldi.hpp"
#include "krylov/csr.hpp"
#include "krylov/dense.hpp"
#include "krylov/precond.hpp"
#include "krylov/solve_types.hpp"

namespace krylov {

// Progressive least-squares reduction of an upper Hessenberg system
// ||beta e_1 - Hbar y|| by Givens rotations. Columns are pushed as the
// Arnoldi expansion produces them; the residual norm of the growing
// problem is available after every push without re-solving.
class HessenbergLsq {
 public:
  explicit HessenbergLsq(double beta) {
    if (beta < 0.0) throw std::invalid_argument("hessenberg lsq: beta must be >= 0");
    g_.push_back(beta);
  }

  // col = [h_{1,j} .. h_{j+1,j}]; returns the updated residual norm.
  double push_column(std::vector<double> col) {
    const std::size_t j = r_.size();
    if (col.size() != j + 2)
      throw std::invalid_argument("hessenberg lsq: column has wrong length");
    for (std::size_t i = 0; i < j; ++i) {
      const double t1 = col[i], t2 = col[i + 1];
      col[i] = cos_[i] * t1 + sin_[i] * t2;
      col[i + 1] = -sin_[i] * t1 + cos_[i] * t2;
    }
    const double a = col[j], b = col[j + 1];
    const double r = std::hypot(a, b);
    if (r == 0.0)
      throw std::domain_error("hessenberg lsq: zero column (rank-deficient Hessenberg)");
    cos_.push_back(a / r);
    sin_.push_back(b / r);
    col[j] = r;
    col.pop_back();
    r_.push_back(std::move(col));
    const double g_j = g_[j];
    g_[j] = cos_[j] * g_j;
    g_.push_back(-sin_[j] * g_j);
    return std::abs(g_[j + 1]);
  }

  double residual_norm() const { return std::abs(g_.back()); }
  std::size_t size() const { return r_.size(); }

  DenseVector solve() const {
    const std::size_t m = r_.size();
    DenseVector y(m, 0.0);
    for (std::size_t jj = m; jj-- > 0;) {
      double s = g_[jj];
      for (std::size_t k = jj + 1; k < m; ++k) s -= r_[k][jj] * y[k];
      y[jj] = s / r_[jj][jj];
    }
    return y;
  }

 private:
  std::vector<std::vector<double>> r_;  // column jj holds entries 0..jj of R
  std::vector<double> cos_, sin_, g_;
};

// Minimizer of ||beta e_1 - h y|| for an (m+1) x m upper Hessenberg h,
// together with the attained residual norm.
inline std::pair<DenseVector, double> hessenberg_lsq(const DenseMatrix& h, double beta) {
  if (h.cols() == 0 || h.rows() != h.cols() + 1)
    throw std::invalid_argument("hessenberg_lsq: expected an (m+1) x m matrix");
  for (std::size_t j = 0; j < h.cols(); ++j)
    for (std::size_t i = j + 2; i < h.rows(); ++i)
      if (h(i, j) != 0.0) throw std::invalid_argument("hessenberg_lsq: not upper Hessenberg");
  HessenbergLsq lsq(beta);
  double res = beta;
  for (std::size_t j = 0; j < h.cols(); ++j) {
    std::vector<double> col(j + 2);
    for (std::size_t i = 0; i < j + 2; ++i) col[i] = h(i, j);
    res = lsq.push_column(std::move(col));
  }
  return {lsq.solve(), res};
}

namespace detail {

// Shared GMRES driver. `factors` selects left preconditioning (null for
// the plain operator); `restart` bounds the inner cycle length. The
// monitored residual is the preconditioned one when factors are active;
// the true residual is recomputed once at exit.
inline SolveReport run_gmres(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                             const SolverConfig& config, const TriangularFactors* factors,
                             std::optional<std::size_t> restart) {
  config.validate();
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("gmres: matrix not square");
  if (b.size() != n || x0.size() != n) throw std::invalid_argument("gmres: dimension mismatch");
  if (restart && *restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");

  SolveReport report;
  const double b_norm_true = norm2(b);
  if (b_norm_true == 0.0) {
    report.solution.assign(n, 0.0);
    report.residual_history.push_back({0, 0, 0.0, 0.0});
    report.status = SolveStatus::converged;
    report.true_relative_residual = 0.0;
    return report;
  }

  auto op = [&](const DenseVector& v) {
    DenseVector t = spmv(a, v);
    return factors ? precond_apply(*factors, t) : t;
  };
  const DenseVector b_eff = factors ? precond_apply(*factors, b) : b;
  const double b_eff_norm = norm2(b_eff);

  DenseVector x = x0;
  std::size_t total_iters = 0;
  std::size_t cycle = 0;

  for (;;) {
    DenseVector r = op(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b_eff[i] - r[i];
    const double beta = norm2(r);
    report.cycle_initial_residuals.push_back(beta);
    if (cycle == 0)
      report.residual_history.push_back({0, 0, beta, beta / b_eff_norm});
    if (beta / b_eff_norm <= config.tol) {
      report.status = SolveStatus::converged;
      break;
    }

    const std::size_t remaining = config.max_iterations - total_iters;
    const std::size_t budget = restart ? std::min(*restart, remaining) : remaining;

    scale(1.0 / beta, r);
    ArnoldiProcess arnoldi(std::move(r));
    HessenbergLsq lsq(beta);
    bool broke = false;
    bool hit_tol = false;
    for (std::size_t j = 0; j < budget; ++j) {
      ArnoldiStep step = arnoldi.advance(op);
      const double res = lsq.push_column(std::move(step.h_column));
      ++total_iters;
      report.residual_history.push_back({total_iters, cycle, res, res / b_eff_norm});
      if (step.breakdown) {
        broke = true;
        break;
      }
      if (res / b_eff_norm <= config.tol) {
        hit_tol = true;
        break;
      }
    }

    const DenseVector y = lsq.solve();
    const auto& basis = arnoldi.basis();
    for (std::size_t k = 0; k < y.size(); ++k) axpy(y[k], basis[k], x);
    report.peak_basis_columns = std::max(report.peak_basis_columns, basis.size());

    if (broke) {
      report.status = SolveStatus::breakdown_converged;
      break;
    }
    if (hit_tol) {
      report.status = SolveStatus::converged;
      break;
    }
    if (total_iters >= config.max_iterations) {
      report.status = SolveStatus::budget_exhausted;
      break;
    }
    ++cycle;
  }

  report.solution = std::move(x);
  report.iterations = total_iters;
  DenseVector r_true = spmv(a, report.solution);
  for (std::size_t i = 0; i < n; ++i) r_true[i] = b[i] - r_true[i];
  report.true_relative_residual = norm2(r_true) / b_norm_true;
  return report;
}

inline SolveReport precond_failure_report(const DenseVector& x0, const std::string& what) {
  SolveReport report;
  report.solution = x0;
  report.status = SolveStatus::preconditioner_failure;
  report.detail = what;
  return report;
}

}  // namespace detail

// Full GMRES with the preconditioner selected by the config (factored
// here, once). A factorization or triangular-solve failure yields
// status preconditioner_failure rather than an exception.
inline SolveReport gmres_solve(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                               const SolverConfig& config) {
  if (config.preconditioner == PrecondKind::none)
    return detail::run_gmres(a, b, x0, config, nullptr, std::nullopt);
  try {
    const TriangularFactors factors = make_factors(config.preconditioner, a);
    return detail::run_gmres(a, b, x0, config, &factors, std::nullopt);
  } catch (const PrecondError& e) {
    return detail::precond_failure_report(x0, e.what());
  }
}

// Full GMRES reusing caller-owned factors.
inline SolveReport gmres_solve(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                               const SolverConfig& config, const TriangularFactors& factors) {
  try {
    return detail::run_gmres(a, b, x0, config, &factors, std::nullopt);
  } catch (const PrecondError& e) {
    return detail::precond_failure_report(x0, e.what());
  }
}

// Solves A x_i = b_i for every column of B independently; failures carry
// the offending column index.
inline DenseMatrix gmres_solve_multi(const CsrMatrix& a, const DenseMatrix& b,
                                     const SolverConfig& config) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw std::invalid_argument("gmres_solve_multi: dimension mismatch");
  std::optional<TriangularFactors> factors;
  if (config.preconditioner != PrecondKind::none)
    factors = make_factors(config.preconditioner, a);

  DenseMatrix x(n, b.cols());
  const DenseVector x0(n, 0.0);
  for (std::size_t col = 0; col < b.cols(); ++col) {
    DenseVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = b(i, col);
    SolveReport report;
    try {
      report = detail::run_gmres(a, rhs, x0, config, factors ? &*factors : nullptr, std::nullopt);
    } catch (const std::exception& e) {
      throw std::runtime_error("gmres_solve_multi: column " + std::to_string(col) + ": " +
                               e.what());
    }
    if (report.status == SolveStatus::preconditioner_failure)
      throw std::runtime_error("gmres_solve_multi: column " + std::to_string(col) + ": " +
                               report.detail);
    for (std::size_t i = 0; i < n; ++i) x(i, col) = report.solution[i];
  }
  return x;
}

// GMRES(m1): cycles of at most config.restart inner steps, each cycle
// restarting from the previous solution. Basis storage stays at m1 + 1
// columns regardless of the total iteration count.
inline SolveReport gmres_restarted(const CsrMatrix& a, const DenseVector& b,
                                   const DenseVector& x0, const SolverConfig& config) {
  if (!config.restart) throw std::invalid_argument("gmres_restarted: config.restart is required");
  if (config.preconditioner == PrecondKind::none)
    return detail::run_gmres(a, b, x0, config, nullptr, config.restart);
  try {
    const TriangularFactors factors = make_factors(config.preconditioner, a);
    return detail::run_gmres(a, b, x0, config, &factors, config.restart);
  } catch (const PrecondError& e) {
    return detail::precond_failure_report(x0, e.what());
  }
}

inline SolveReport gmres_restarted(const CsrMatrix& a, const DenseVector& b,
                                   const DenseVector& x0, const SolverConfig& config,
                                   const TriangularFactors& factors) {
  if (!config.restart) throw std::invalid_argument("gmres_restarted: config.restart is required");
  try {
    return detail::run_gmres(a, b, x0, config, &factors, config.restart);
  } catch (const PrecondError& e) {
    return detail::precond_failure_report(x0, e.what());
  }
}

}  // namespace krylov
