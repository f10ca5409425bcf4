#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "support/fixture.hpp"
#include "windadm/common/error.hpp"
#include "windadm/io/cli.hpp"
#include "windadm/io/config.hpp"
#include "windadm/io/reports.hpp"
#include "windadm/scuc/scuc.hpp"

namespace windadm::io {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A six-period copy of the fixture plus a config in a scratch directory.
class Workspace : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           fmt::format("windadm_io_{}", ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    c_ = testing::truncate_horizon(testing::fixture_case(), 6);
    std::ofstream(dir_ / "case.json") << grid::case_to_json(c_).dump(1);
    std::ofstream uc(dir_ / "uc.csv");
    grid::write_uc_csv(uc, scuc::solve_scuc(c_.network).uc);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& extra = {}) {
    const fs::path p = dir_ / "run.toml";
    std::ofstream(p) << "# scratch run\n[paths]\ncase = \"case.json\"\nuc = \"uc.csv\"\n"
                        "output = \"out\"\n[model]\nsigma = 0.10\ngamma_t = 2\ngamma_s = 1\n"
                        "[mc]\nsamples = 20000\nworkers = 2\n[validate]\nsamples = 50\n"
                     << extra;
    return p;
  }

  int run(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
    args.insert(args.begin(), "windadm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
  }

  fs::path dir_;
  grid::Case c_;
};

TEST_F(Workspace, ConfigResolvesPathsAndArrays) {
  const auto cfg = load_run_config(write_config("[pla]\nalphas = [0.01, 0.2]  # two rungs\nz = 3\n"));
  EXPECT_EQ(cfg.case_path, dir_ / "case.json");
  ASSERT_TRUE(cfg.uc_path.has_value());
  EXPECT_EQ(*cfg.uc_path, dir_ / "uc.csv");
  EXPECT_EQ(cfg.pla.alphas, (std::vector<double>{0.01, 0.2}));
  EXPECT_EQ(cfg.pla.z, 3);
  EXPECT_EQ(cfg.budgets.gamma_t, 2);
  EXPECT_EQ(cfg.mc_samples, 20000);
}

TEST_F(Workspace, ConfigRejectsUnknownAndBadValues) {
  EXPECT_THROW(load_run_config(write_config("[model]\nsigmaa = 1\n")), Error);
  EXPECT_THROW(load_run_config(write_config("[pla]\nz = 2.5\n")), Error);
  EXPECT_THROW(load_run_config(write_config("[algorithm]\nmode = \"a9\"\n")), Error);
  try {
    load_run_config(dir_ / "missing.toml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(e.detail().find("missing.toml"), std::string::npos);
  }
}

TEST_F(Workspace, BundledConfigLoads) {
  const auto cfg = load_run_config(fs::path(WINDADM_DATA_DIR) / "fixture.toml");
  EXPECT_TRUE(fs::exists(cfg.case_path));
  ASSERT_TRUE(cfg.uc_path.has_value());
  EXPECT_TRUE(fs::exists(*cfg.uc_path));
  EXPECT_DOUBLE_EQ(cfg.sigma, 0.10);
  EXPECT_EQ(cfg.pla.alphas, (std::vector<double>{0.005, 0.025, 0.495}));
}

TEST_F(Workspace, BoundaryCsvRoundTrips) {
  auto b = uncertainty::Boundary::full_width(c_.network);
  b.upper[0][2] = 161.123456789012345;
  b.lower[0][4] = 3.3;
  std::stringstream ss;
  write_boundary_csv(ss, b, {});
  const auto back = read_boundary_csv(ss, c_.network);
  EXPECT_EQ(back.upper, b.upper);
  EXPECT_EQ(back.lower, b.lower);

  std::stringstream missing("period,farm,w_lower_mw,w_upper_mw\n1,1,0,100\n");
  EXPECT_THROW(read_boundary_csv(missing, c_.network), Error);
}

TEST_F(Workspace, UnknownFlagIsUsageError) {
  std::string err;
  EXPECT_EQ(run({"check", "--config", write_config().string(), "--frobnicate"}, nullptr, &err),
            kExitUsage);
  EXPECT_NE(err.find("frobnicate"), std::string::npos);
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"check", "--config", (dir_ / "none.toml").string()}, nullptr, &err), kExitUsage);
  EXPECT_NE(err.find("none.toml"), std::string::npos);
}

TEST_F(Workspace, CheckFullWidthWithoutBudgetIsAdmissible) {
  std::string out;
  ASSERT_EQ(run({"check", "-c", write_config().string(), "--gamma-t", "0"}, &out), kExitOk);
  const auto j = nlohmann::json::parse(out);
  EXPECT_EQ(j["verdict"], "admissible");
  EXPECT_DOUBLE_EQ(j["F_R"].get<double>(), 0.0);
}

TEST_F(Workspace, AssessEmitsStableReports) {
  const auto cfg = write_config();
  ASSERT_EQ(run({"assess", "-c", cfg.string()}), kExitOk);
  const fs::path out = dir_ / "out";
  for (const char* f : {"boundary.csv", "risk_by_period.csv", "summary.json", "iterations.jsonl"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_TRUE(summary["certified"].get<bool>());

  std::ifstream per(out / "risk_by_period.csv");
  std::string line;
  std::getline(per, line);
  EXPECT_EQ(line, "period,risk_usd");
  double sum = 0.0;
  while (std::getline(per, line)) sum += std::stod(line.substr(line.find(',') + 1));
  EXPECT_NEAR(sum, summary["risk_pla_usd"].get<double>(), 1e-6);

  std::ifstream log(out / "iterations.jsonl");
  int lines = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* k : {"k", "G_k", "F_R_k", "eta", "master_rows", "wall_ms"}) {
      EXPECT_TRUE(j.contains(k)) << k;
    }
    ++lines;
  }
  EXPECT_EQ(lines, summary["iterations"].get<int>());

  const std::string first_boundary = slurp(out / "boundary.csv");
  const std::string first_summary = slurp(out / "summary.json");
  ASSERT_EQ(run({"assess", "-c", cfg.string()}), kExitOk);
  EXPECT_EQ(slurp(out / "boundary.csv"), first_boundary);
  EXPECT_EQ(slurp(out / "summary.json"), first_summary);

  // The emitted boundary feeds straight back into check and validate.
  std::string verdict;
  ASSERT_EQ(run({"check", "-c", cfg.string(), "-b", (out / "boundary.csv").string()}, &verdict),
            kExitOk);
  EXPECT_EQ(nlohmann::json::parse(verdict)["verdict"], "admissible");
  std::string replay;
  ASSERT_EQ(run({"validate", "-c", cfg.string(), "-b", (out / "boundary.csv").string()}, &replay),
            kExitOk);
  const auto rj = nlohmann::json::parse(replay);
  EXPECT_EQ(rj["vertex_failures"], 0);
  EXPECT_EQ(rj["hull_failures"], 0);
}

TEST_F(Workspace, IterationCapExitsWithSolverCode) {
  EXPECT_EQ(run({"assess", "-c", write_config("[algorithm]\nmax_iterations = 1\n").string()}),
            kExitSolver);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "boundary.csv"));
}

TEST_F(Workspace, SweepRowsAreOrdered) {
  ASSERT_EQ(run({"assess", "-c", write_config("[sweep]\ngamma_t = [0, 1]\n").string(), "--sweep"}),
            kExitOk);
  std::ifstream in(dir_ / "out" / "sweep_sigma.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "sigma,risk_usd,risk_exact_usd,iterations,certified");
  std::vector<double> risk;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    std::getline(ss, cell, ',');
    risk.push_back(std::stod(cell));
  }
  ASSERT_EQ(risk.size(), 3u);
  EXPECT_LE(risk[0], risk[1] + 1e-9);
  EXPECT_LE(risk[1], risk[2] + 1e-9);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "sweep_gamma_t.csv"));
}

TEST_F(Workspace, RiskAndScucCommands) {
  const auto cfg = write_config();
  std::string out;
  ASSERT_EQ(run({"risk", "-c", cfg.string(), "--pla-csv", (dir_ / "cuts.csv").string()}, &out),
            kExitOk);
  const auto j = nlohmann::json::parse(out);
  EXPECT_DOUBLE_EQ(j["exact"]["total_usd"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(dir_ / "cuts.csv"));
  ASSERT_EQ(run({"scuc", "-c", cfg.string(), "-r", "0.05"}, &out), kExitOk);
  std::istringstream uc(out);
  EXPECT_NO_THROW(grid::read_uc_csv(uc, c_.network));
  EXPECT_EQ(run({"scuc", "-c", cfg.string(), "-r", "5"}), kExitSolver);
}

}  // namespace
}  // namespace windadm::io
