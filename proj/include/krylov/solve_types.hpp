#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krylov/csr.hpp"
#include "krylov/dense.hpp"
#include "krylov/precond.hpp"

namespace krylov {

enum class PrecondKind { none, ilu0, ic0 };

struct SolverConfig {
  double tol = 1e-7;                    // relative residual tolerance
  std::size_t max_iterations = 1;      // total iteration budget
  std::optional<std::size_t> restart;  // inner cycle length m1 for restarted GMRES
  PrecondKind preconditioner = PrecondKind::none;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
    if (restart && *restart < 1) throw std::invalid_argument("config: restart must be >= 1");
  }
};

enum class SolveStatus { converged, budget_exhausted, breakdown_converged, preconditioner_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::budget_exhausted: return "budget_exhausted";
    case SolveStatus::breakdown_converged: return "breakdown_converged";
    case SolveStatus::preconditioner_failure: return "preconditioner_failure";
  }
  return "unknown";
}

struct HistoryEntry {
  std::size_t iteration;
  std::size_t cycle;  // restart cycle index, 0 for non-restarted runs
  double absolute_residual;
  double relative_residual;
};

struct SolveReport {
  DenseVector solution;
  std::vector<HistoryEntry> residual_history;  // entry per iteration plus the initial one
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::budget_exhausted;
  // ||b - A x|| / ||b|| recomputed once at exit; equals the monitored
  // residual for unpreconditioned runs.
  double true_relative_residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t peak_basis_columns = 0;           // instrumentation
  std::vector<double> cycle_initial_residuals;  // instrumentation, restarted runs
  std::string detail;                           // failure description, empty otherwise
};

// Builds the factors a config asks for; the caller owns the error
// handling (solvers map PrecondError to status preconditioner_failure).
inline TriangularFactors make_factors(PrecondKind kind, const CsrMatrix& a) {
  switch (kind) {
    case PrecondKind::none: return TriangularFactors::identity_for(a.rows());
    case PrecondKind::ilu0: return ilu0(a);
    case PrecondKind::ic0: return ic0(a);
  }
  throw std::logic_error("make_factors: unknown preconditioner kind");
}

}  // namespace krylov
