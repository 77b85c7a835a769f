#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "krylov/csr.hpp"
#include "krylov/dense.hpp"
#include "krylov/precond.hpp"
#include "krylov/solve_types.hpp"

namespace krylov {

// Iteration snapshot recorded after step k completes: x and g are the
// updated iterate and gradient, d/alpha are the direction and step just
// used, beta_cg is the coefficient that formed d (0 at k = 0).
struct CgState {
  DenseVector x;
  DenseVector g;
  DenseVector d;
  double alpha = 0.0;
  double beta_cg = 0.0;
  std::size_t k = 0;
};

using CgTrace = std::vector<CgState>;

namespace detail {

// Conjugate gradients on the gradient g = A x - b, with the search
// directions kept A-conjugate:
//   d_0 = -g_0, alpha_k = -(g_k.d_k)/(d_k.A d_k),
//   g_{k+1} = g_k + alpha_k A d_k,
//   beta_{k+1} = (g_{k+1}.A d_k)/(d_k.A d_k), d_{k+1} = -g_{k+1} + beta d_k.
// With factors active the preconditioned residual z = M^{-1} g replaces
// g in the direction updates (alpha = (g.z)/(d.A d), beta = ratio of
// successive g.z products), which keeps the recurrence symmetric.
inline SolveReport run_cg(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                          const SolverConfig& config, const TriangularFactors* factors,
                          CgTrace* trace) {
  config.validate();
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cg: matrix not square");
  if (b.size() != n || x0.size() != n) throw std::invalid_argument("cg: dimension mismatch");
  std::size_t bi = 0, bj = 0;
  if (!is_symmetric(a, 1e-10, &bi, &bj))
    throw std::invalid_argument("cg: matrix not symmetric at entry (" + std::to_string(bi) +
                                ", " + std::to_string(bj) + ")");

  SolveReport report;
  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    report.solution.assign(n, 0.0);
    report.residual_history.push_back({0, 0, 0.0, 0.0});
    report.status = SolveStatus::converged;
    report.true_relative_residual = 0.0;
    return report;
  }

  DenseVector x = x0;
  DenseVector g = spmv(a, x);
  for (std::size_t i = 0; i < n; ++i) g[i] -= b[i];
  double g_norm = norm2(g);
  report.residual_history.push_back({0, 0, g_norm, g_norm / b_norm});

  report.status = SolveStatus::budget_exhausted;
  if (g_norm / b_norm <= config.tol) {
    report.status = SolveStatus::converged;
  } else {
    DenseVector z = factors ? precond_apply(*factors, g) : g;
    DenseVector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = -z[i];
    double gz = dot(g, z);
    double beta_used = 0.0;

    for (std::size_t k = 0; k < config.max_iterations; ++k) {
      const DenseVector ad = spmv(a, d);
      const double dad = dot(d, ad);
      if (dad <= 0.0)
        throw std::domain_error("cg: matrix not positive definite (d.A d = " +
                                std::to_string(dad) + " at iteration " + std::to_string(k) + ")");
      const double alpha = factors ? gz / dad : -dot(g, d) / dad;
      axpy(alpha, d, x);
      axpy(alpha, ad, g);
      g_norm = norm2(g);
      report.iterations = k + 1;
      report.residual_history.push_back({k + 1, 0, g_norm, g_norm / b_norm});
      if (trace) trace->push_back({x, g, d, alpha, beta_used, k});
      if (g_norm / b_norm <= config.tol) {
        report.status = SolveStatus::converged;
        break;
      }
      if (k + 1 == config.max_iterations) break;

      double beta;
      if (factors) {
        DenseVector z_next = precond_apply(*factors, g);
        const double gz_next = dot(g, z_next);
        beta = gz_next / gz;
        gz = gz_next;
        z = std::move(z_next);
      } else {
        beta = dot(g, ad) / dad;
        z = g;
      }
      beta_used = beta;
      for (std::size_t i = 0; i < n; ++i) d[i] = -z[i] + beta * d[i];
    }
  }

  report.solution = std::move(x);
  DenseVector r_true = spmv(a, report.solution);
  for (std::size_t i = 0; i < n; ++i) r_true[i] = b[i] - r_true[i];
  report.true_relative_residual = norm2(r_true) / b_norm;
  return report;
}

}  // namespace detail

// Conjugate gradients for symmetric positive definite systems. The
// config may select the ic0 preconditioner (factored here, once); a
// factorization failure yields status preconditioner_failure.
inline SolveReport cg_solve(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                            const SolverConfig& config, CgTrace* trace = nullptr) {
  if (config.preconditioner == PrecondKind::none)
    return detail::run_cg(a, b, x0, config, nullptr, trace);
  if (config.preconditioner != PrecondKind::ic0)
    throw std::invalid_argument("cg: preconditioner must be none or ic0");
  try {
    const TriangularFactors factors = ic0(a);
    return detail::run_cg(a, b, x0, config, &factors, trace);
  } catch (const PrecondError& e) {
    SolveReport report;
    report.solution = x0;
    report.status = SolveStatus::preconditioner_failure;
    report.detail = e.what();
    return report;
  }
}

// Preconditioned CG reusing caller-owned factors.
inline SolveReport cg_solve(const CsrMatrix& a, const DenseVector& b, const DenseVector& x0,
                            const SolverConfig& config, const TriangularFactors& factors,
                            CgTrace* trace = nullptr) {
  try {
    return detail::run_cg(a, b, x0, config, &factors, trace);
  } catch (const PrecondError& e) {
    SolveReport report;
    report.solution = x0;
    report.status = SolveStatus::preconditioner_failure;
    report.detail = e.what();
    return report;
  }
}

}  // namespace krylov
