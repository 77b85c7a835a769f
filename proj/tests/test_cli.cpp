// End-to-end checks of the command-line harness: exit codes, CSV
// schema, determinism. The binary path and the shipped data directory
// come in through compile definitions.

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    work_ = fs::temp_directory_path() / ("krylov_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(work_);
  }
  void TearDown() override { fs::remove_all(work_); }

  RunResult run(const std::string& args) {
    const fs::path out_file = work_ / "stdout.txt";
    const fs::path err_file = work_ / "stderr.txt";
    const std::string cmd = std::string(KRYLOV_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2> " + err_file.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
  }

  fs::path work_;
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_F(CliTest, SolvesTheShippedThreeByThreeSystem) {
  const fs::path sol = work_ / "x.txt";
  RunResult r = run("solve --matrix " KRYLOV_DATA_DIR "/example1.mtx --rhs " KRYLOV_DATA_DIR
                    "/example1_rhs.txt --method gmres --tol 1e-10 --maxit 3 --out " +
                    sol.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("method=gmres"), std::string::npos);
  EXPECT_NE(r.out.find("status="), std::string::npos);

  // relres <= 1e-10 within 3 iterations
  const auto pos = r.out.find("relres=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::strtod(r.out.c_str() + pos + 7, nullptr), 1e-10);

  std::ifstream in(sol);
  double x0, x1, x2;
  in >> x0 >> x1 >> x2;
  EXPECT_NEAR(x0, -2.18, 1e-2);
  EXPECT_NEAR(x1, 1.84, 1e-2);
  EXPECT_NEAR(x2, -0.6, 1e-2);
}

TEST_F(CliTest, MissingRhsFileNamesThePath) {
  RunResult r = run("solve --matrix " KRYLOV_DATA_DIR "/example1.mtx --rhs " +
                    (work_ / "no_such_rhs.txt").string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("no_such_rhs.txt"), std::string::npos);
}

TEST_F(CliTest, CgOnAsymmetricMatrixFails) {
  RunResult r = run("solve --matrix " KRYLOV_DATA_DIR "/example1.mtx --rhs " KRYLOV_DATA_DIR
                    "/example1_rhs.txt --method cg");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("not symmetric"), std::string::npos);
  EXPECT_NE(r.err.find("("), std::string::npos);  // offending index pair
}

TEST_F(CliTest, GenerateIsDeterministic) {
  const fs::path m1 = work_ / "a.mtx", m2 = work_ / "b.mtx";
  EXPECT_EQ(run("generate --kind diag_dominant --n 100 --seed 7 --out " + m1.string()).exit_code,
            0);
  EXPECT_EQ(run("generate --kind diag_dominant --n 100 --seed 7 --out " + m2.string()).exit_code,
            0);
  EXPECT_EQ(slurp(m1), slurp(m2));
}

TEST_F(CliTest, GenerateLaplacianStencil) {
  const fs::path m = work_ / "lap.mtx";
  ASSERT_EQ(run("generate --kind laplacian1d --n 4 --out " + m.string()).exit_code, 0);
  const std::string text = slurp(m);
  EXPECT_NE(text.find("%%MatrixMarket matrix coordinate real general"), std::string::npos);
  EXPECT_NE(text.find("1 1 2\n"), std::string::npos);
  EXPECT_NE(text.find("1 2 -1\n"), std::string::npos);
}

TEST_F(CliTest, HistoryCsvSchemaAndRoundTrip) {
  const fs::path m = work_ / "lap2.mtx";
  const fs::path csv = work_ / "hist.csv";
  ASSERT_EQ(run("generate --kind laplacian2d --n 100 --out " + m.string()).exit_code, 0);
  RunResult r = run("solve --matrix " + m.string() + " --method gmres --tol 1e-8 --out " +
                    (work_ / "x.txt").string() + " --history " + csv.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;

  const auto lines = lines_of(slurp(csv));
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[0], "iteration,cycle,absolute_residual,relative_residual");
  long long prev_iter = -1;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    long long iter, cycle;
    double abs_res, rel_res;
    ASSERT_EQ(std::sscanf(lines[k].c_str(), "%lld,%lld,%lf,%lf", &iter, &cycle, &abs_res,
                          &rel_res),
              4)
        << lines[k];
    EXPECT_GT(iter, prev_iter);  // strictly increasing iterations
    prev_iter = iter;

    // 17 significant digits round-trip exactly
    const auto second_comma = lines[k].find(',', lines[k].find(',') + 1);
    const auto third_comma = lines[k].find(',', second_comma + 1);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", abs_res);
    EXPECT_EQ(lines[k].substr(second_comma + 1, third_comma - second_comma - 1),
              std::string(buf));
  }
}

TEST_F(CliTest, DeterministicSolveOutputs) {
  const fs::path m = work_ / "dd.mtx";
  ASSERT_EQ(run("generate --kind diag_dominant --n 150 --seed 3 --out " + m.string()).exit_code,
            0);
  const fs::path c1 = work_ / "h1.csv", c2 = work_ / "h2.csv";
  RunResult r1 = run("solve --matrix " + m.string() + " --method gmres_restarted --restart 10 " +
                     "--tol 1e-9 --out " + (work_ / "x1.txt").string() + " --history " +
                     c1.string());
  RunResult r2 = run("solve --matrix " + m.string() + " --method gmres_restarted --restart 10 " +
                     "--tol 1e-9 --out " + (work_ / "x2.txt").string() + " --history " +
                     c2.string());
  EXPECT_EQ(r1.exit_code, r2.exit_code);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(slurp(c1), slurp(c2));
  EXPECT_EQ(slurp(work_ / "x1.txt"), slurp(work_ / "x2.txt"));
}

TEST_F(CliTest, BudgetExhaustionExitsTwo) {
  const fs::path m = work_ / "lap2b.mtx";
  ASSERT_EQ(run("generate --kind laplacian2d --n 100 --out " + m.string()).exit_code, 0);
  RunResult r = run("solve --matrix " + m.string() + " --method gmres --tol 1e-12 --maxit 2 " +
                    "--out " + (work_ / "x.txt").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("status=budget_exhausted"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run("solve").exit_code, 1);  // missing --matrix
  EXPECT_EQ(run("solve --matrix " KRYLOV_DATA_DIR "/example1.mtx --method warp").exit_code, 1);
  EXPECT_EQ(run("solve --matrix " KRYLOV_DATA_DIR
                "/example1.mtx --method gmres_restarted")
                .exit_code,
            1);  // restart missing
}

TEST_F(CliTest, CompareWritesSummaryAndPerVariantHistories) {
  const fs::path m = work_ / "lap2c.mtx";
  const fs::path hist_dir = work_ / "hist";
  ASSERT_EQ(run("generate --kind laplacian2d --n 225 --out " + m.string()).exit_code, 0);
  RunResult r = run("compare --matrix " + m.string() +
                    " --method gmres --precond none --method gmres --precond ilu0 " +
                    "--tol 1e-7 --maxit 2000 --history " + hist_dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.err;

  const auto lines = lines_of(r.out);
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[0], "variant,iters,relres,status");
  EXPECT_EQ(lines[1].rfind("gmres+none,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("gmres+ilu0,", 0), 0u);

  long long iters_plain = 0, iters_pc = 0;
  std::sscanf(lines[1].c_str(), "gmres+none,%lld", &iters_plain);
  std::sscanf(lines[2].c_str(), "gmres+ilu0,%lld", &iters_pc);
  EXPECT_LT(iters_pc, iters_plain);  // preconditioning accelerates
  EXPECT_NE(lines[1].find("converged"), std::string::npos);
  EXPECT_NE(lines[2].find("converged"), std::string::npos);

  EXPECT_TRUE(fs::exists(hist_dir / "gmres+none.csv"));
  EXPECT_TRUE(fs::exists(hist_dir / "gmres+ilu0.csv"));
}

TEST_F(CliTest, CompareSingleVariantDegeneratesToSolve) {
  RunResult r = run("compare --matrix " KRYLOV_DATA_DIR "/example1.mtx --rhs " KRYLOV_DATA_DIR
                    "/example1_rhs.txt --method gmres --tol 1e-10");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "variant,iters,relres,status");
  EXPECT_EQ(lines[1].rfind("gmres+none,", 0), 0u);
}

TEST_F(CliTest, CompareRecordsPerVariantFailures) {
  // cg cannot run on the asymmetric matrix; gmres still converges.
  RunResult r = run("compare --matrix " KRYLOV_DATA_DIR "/example1.mtx --rhs " KRYLOV_DATA_DIR
                    "/example1_rhs.txt --method cg --precond none --method gmres --precond none "
                    "--tol 1e-10");
  EXPECT_EQ(r.exit_code, 0) << r.err;  // one variant converged
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_NE(lines[1].find("error"), std::string::npos);
  EXPECT_NE(lines[2].find("converged"), std::string::npos);
}
