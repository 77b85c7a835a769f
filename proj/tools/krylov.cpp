// Command-line harness: ingest Matrix Market systems, generate test
// matrices, run solver/preconditioner combinations and emit convergence
// histories as CSV.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krylov/krylov.hpp"

namespace fs = std::filesystem;
using namespace krylov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBudget = 2;

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// All file output goes through write-then-rename so partially written
// files are never observed.
void write_text_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string history_csv(const SolveReport& report) {
  std::string out = "iteration,cycle,absolute_residual,relative_residual\n";
  for (const HistoryEntry& e : report.residual_history) {
    out += std::to_string(e.iteration);
    out += ',';
    out += std::to_string(e.cycle);
    out += ',';
    out += format_real(e.absolute_residual);
    out += ',';
    out += format_real(e.relative_residual);
    out += '\n';
  }
  return out;
}

std::string solution_text(const DenseVector& x) {
  std::string out;
  for (double v : x) {
    out += format_real(v);
    out += '\n';
  }
  return out;
}

PrecondKind parse_precond(const std::string& name) {
  if (name == "none") return PrecondKind::none;
  if (name == "ilu0") return PrecondKind::ilu0;
  if (name == "ic0") return PrecondKind::ic0;
  throw std::runtime_error("unknown preconditioner '" + name + "' (none|ilu0|ic0)");
}

struct Variant {
  std::string method;  // gmres | gmres_restarted | cg
  std::string precond;
};

SolveReport run_variant(const CsrMatrix& a, const DenseVector& b, const Variant& variant,
                        std::optional<std::size_t> restart, double tol, std::size_t maxit) {
  SolverConfig config;
  config.tol = tol;
  config.max_iterations = maxit;
  config.preconditioner = parse_precond(variant.precond);
  const DenseVector x0(a.rows(), 0.0);
  if (variant.method == "gmres") return gmres_solve(a, b, x0, config);
  if (variant.method == "gmres_restarted") {
    if (!restart) throw std::runtime_error("--restart is required for method gmres_restarted");
    config.restart = restart;
    return gmres_restarted(a, b, x0, config);
  }
  if (variant.method == "cg") return cg_solve(a, b, x0, config);
  throw std::runtime_error("unknown method '" + variant.method +
                           "' (gmres|gmres_restarted|cg)");
}

int status_to_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
    case SolveStatus::breakdown_converged:
      return kExitOk;
    case SolveStatus::budget_exhausted:
      return kExitBudget;
    case SolveStatus::preconditioner_failure:
      return kExitError;
  }
  return kExitError;
}

DenseVector load_rhs(const std::string& rhs_path, std::size_t n) {
  if (rhs_path.empty()) return DenseVector(n, 1.0);
  DenseVector b = read_rhs_file(rhs_path);
  if (b.size() != n)
    throw std::runtime_error("rhs length " + std::to_string(b.size()) +
                             " does not match matrix dimension " + std::to_string(n));
  return b;
}

int cmd_solve(const std::string& matrix_path, const std::string& rhs_path,
              const std::string& method, const std::string& precond,
              std::optional<std::size_t> restart, double tol, long long maxit_flag,
              const std::string& history_path, const std::string& out_path) {
  CsrMatrix a = read_matrix_market_file(matrix_path);
  if (a.rows() != a.cols()) throw std::runtime_error("matrix must be square");
  DenseVector b = load_rhs(rhs_path, a.rows());
  if (method == "gmres_restarted" && !restart)
    throw std::runtime_error("--restart is required for method gmres_restarted");
  if (method != "gmres_restarted" && restart)
    throw std::runtime_error("--restart is only valid for method gmres_restarted");
  const std::size_t maxit =
      maxit_flag > 0 ? static_cast<std::size_t>(maxit_flag) : 10 * a.rows();

  SolveReport report = run_variant(a, b, {method, precond}, restart, tol, maxit);
  if (report.status == SolveStatus::preconditioner_failure) {
    std::cerr << "error: " << report.detail << "\n";
    return kExitError;
  }

  if (!history_path.empty()) write_text_atomic(history_path, history_csv(report));
  if (!out_path.empty())
    write_text_atomic(out_path, solution_text(report.solution));
  else
    std::cout << solution_text(report.solution);

  std::cout << "method=" << method << " precond=" << precond << " iters=" << report.iterations
            << " relres=" << format_real(report.true_relative_residual)
            << " status=" << to_string(report.status) << "\n";
  return status_to_exit(report.status);
}

int cmd_generate(const std::string& kind, std::size_t n, std::uint64_t seed,
                 const std::string& out_path) {
  CsrMatrix a;
  if (kind == "laplacian1d")
    a = laplacian_1d(n);
  else if (kind == "laplacian2d")
    a = laplacian_2d(n);
  else if (kind == "diag_dominant")
    a = diag_dominant(n, seed);
  else if (kind == "spd_random")
    a = spd_random(n, seed);
  else
    throw std::runtime_error("unknown kind '" + kind +
                             "' (laplacian1d|laplacian2d|diag_dominant|spd_random)");
  std::ostringstream text;
  write_matrix_market(a, text);
  write_text_atomic(out_path, text.str());
  return kExitOk;
}

int cmd_compare(const std::string& matrix_path, const std::string& rhs_path,
                std::vector<std::string> methods, std::vector<std::string> preconds,
                std::optional<std::size_t> restart, double tol, long long maxit_flag,
                const std::string& history_dir) {
  CsrMatrix a = read_matrix_market_file(matrix_path);
  if (a.rows() != a.cols()) throw std::runtime_error("matrix must be square");
  DenseVector b = load_rhs(rhs_path, a.rows());
  const std::size_t maxit =
      maxit_flag > 0 ? static_cast<std::size_t>(maxit_flag) : 10 * a.rows();

  if (methods.empty()) throw std::runtime_error("compare needs at least one --method");
  if (preconds.empty()) preconds.assign(methods.size(), "none");
  if (preconds.size() == 1 && methods.size() > 1) preconds.resize(methods.size(), preconds[0]);
  if (preconds.size() != methods.size())
    throw std::runtime_error("--method and --precond counts do not match");

  if (!history_dir.empty()) fs::create_directories(history_dir);

  bool any_converged = false;
  bool any_budget = false;
  std::cout << "variant,iters,relres,status\n";
  for (std::size_t v = 0; v < methods.size(); ++v) {
    const Variant variant{methods[v], preconds[v]};
    const std::string label = variant.method + "+" + variant.precond;
    try {
      SolveReport report = run_variant(a, b, variant, restart, tol, maxit);
      if (report.status == SolveStatus::preconditioner_failure) {
        std::cerr << "variant " << label << ": " << report.detail << "\n";
        std::cout << label << ",0,nan,error\n";
        continue;
      }
      if (!history_dir.empty())
        write_text_atomic(fs::path(history_dir) / (label + ".csv"), history_csv(report));
      std::cout << label << "," << report.iterations << ","
                << format_real(report.true_relative_residual) << ","
                << to_string(report.status) << "\n";
      if (report.status == SolveStatus::converged ||
          report.status == SolveStatus::breakdown_converged)
        any_converged = true;
      if (report.status == SolveStatus::budget_exhausted) any_budget = true;
    } catch (const std::exception& e) {
      std::cerr << "variant " << label << ": " << e.what() << "\n";
      std::cout << label << ",0,nan,error\n";
    }
  }
  if (any_converged) return kExitOk;
  return any_budget ? kExitBudget : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse iterative solver harness (GMRES, GMRES(m), CG; ILU(0)/IC(0))"};
  app.require_subcommand(1);

  std::string matrix_path, rhs_path, out_path, history_path;
  std::string method = "gmres", precond = "none", kind;
  double tol = 1e-7;
  long long maxit = -1;  // default 10 * n, resolved after the matrix loads
  long long restart_flag = -1;
  std::uint64_t seed = 0;
  std::size_t gen_n = 0;
  std::vector<std::string> methods, preconds;

  CLI::App* solve = app.add_subcommand("solve", "solve a linear system from a .mtx file");
  solve->add_option("--matrix", matrix_path, "Matrix Market file")->required();
  solve->add_option("--rhs", rhs_path, "right-hand side (.mtx n-by-1 or one value per line); all ones when omitted");
  solve->add_option("--method", method, "gmres|gmres_restarted|cg");
  solve->add_option("--restart", restart_flag, "cycle length for gmres_restarted");
  solve->add_option("--precond", precond, "none|ilu0|ic0");
  solve->add_option("--tol", tol, "relative residual tolerance");
  solve->add_option("--maxit", maxit, "iteration budget (default 10n)");
  solve->add_option("--history", history_path, "write convergence history CSV here");
  solve->add_option("--out", out_path, "write the solution here instead of stdout");

  CLI::App* generate = app.add_subcommand("generate", "write a generated test matrix");
  generate->add_option("--kind", kind, "laplacian1d|laplacian2d|diag_dominant|spd_random")
      ->required();
  generate->add_option("--n", gen_n, "matrix dimension")->required();
  generate->add_option("--seed", seed, "generator seed");
  generate->add_option("--out", out_path, "output .mtx path")->required();

  CLI::App* compare = app.add_subcommand("compare", "run several method/precond variants");
  compare->add_option("--matrix", matrix_path, "Matrix Market file")->required();
  compare->add_option("--rhs", rhs_path, "right-hand side; all ones when omitted");
  compare->add_option("--method", methods, "method per variant (repeatable)")->required();
  compare->add_option("--precond", preconds, "preconditioner per variant (repeatable)");
  compare->add_option("--restart", restart_flag, "cycle length for gmres_restarted variants");
  compare->add_option("--tol", tol, "relative residual tolerance");
  compare->add_option("--maxit", maxit, "iteration budget (default 10n)");
  compare->add_option("--history", history_path, "directory for per-variant history CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  std::optional<std::size_t> restart;
  if (restart_flag >= 0) {
    if (restart_flag < 1) {
      std::cerr << "error: --restart must be >= 1\n";
      return kExitError;
    }
    restart = static_cast<std::size_t>(restart_flag);
  }
  if (maxit != -1 && maxit < 1) {
    std::cerr << "error: --maxit must be >= 1\n";
    return kExitError;
  }

  try {
    if (solve->parsed())
      return cmd_solve(matrix_path, rhs_path, method, precond, restart, tol, maxit, history_path,
                       out_path);
    if (generate->parsed()) return cmd_generate(kind, gen_n, seed, out_path);
    if (compare->parsed())
      return cmd_compare(matrix_path, rhs_path, methods, preconds, restart, tol, maxit,
                         history_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
