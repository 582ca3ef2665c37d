#include "cli/app.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/table.hpp"
#include "modred/bounds.hpp"
#include "modred/models.hpp"

namespace modred::cli {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) { return std::string(MODRED_TEST_TMPDIR) + "/" + name; }

double num(const Cell& c) { return std::get<double>(c); }

TEST(LawCommand, HeaderAndRowCount) {
  const auto r = run_cli({"law", "--gamma", "5", "--omega", "2", "--beta", "1", "--x0", "1", "--v0", "0",
                          "--t-start", "0", "--t-end", "2", "--t-count", "3", "--t-spacing", "linear"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), "t,mean_full,var_full,mean_reduced,var_reduced,w2,w2_sq");
  const Table t = read_csv(r.out);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(num(t.rows[0][0]), 0.0);
  EXPECT_EQ(num(t.rows[0][5]), 0.0);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(LawCommand, RowsMatchLibraryBitForBit) {
  const auto r = run_cli({"law", "--gamma", "7", "--omega", "1.5", "--x0", "0.3", "--v0", "-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = read_csv(r.out);
  const OscillatorParams p{7, 1.5, 1, 0.3, -1};
  const auto grid = default_grid(p);
  ASSERT_EQ(t.rows.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ti = grid[i];
    ASSERT_EQ(num(t.rows[i][0]), ti);
    const auto full = oscillator_marginal_law(p, ti);
    const auto red = oscillator_reduced_law(p, ti);
    EXPECT_EQ(num(t.rows[i][1]), full.mean()(0));
    EXPECT_EQ(num(t.rows[i][2]), full.variance());
    EXPECT_EQ(num(t.rows[i][3]), red.mean()(0));
    EXPECT_EQ(num(t.rows[i][4]), red.variance());
    EXPECT_EQ(num(t.rows[i][5]), w2_1d(full, red));
    EXPECT_EQ(num(t.rows[i][6]), osc_w2_exact(p, ti));
  }
}

TEST(LawCommand, CoupledGeneralUsesPropagator) {
  const auto r = run_cli({"law", "--model", "coupled", "--a", "-1", "--d", "-3", "--k", "0.5", "--x1", "1",
                          "--t-count", "5", "--t-end", "4", "--t-spacing", "linear"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = read_csv(r.out);
  ASSERT_EQ(t.rows.size(), 5u);
  RunConfig cfg;
  cfg.model = ModelKind::Coupled;
  cfg.coupled = CoupledParams{-1, -3, 0.5, 1, 1, 1, 0};
  const auto laws = laws_at(cfg, 4.0);
  EXPECT_EQ(num(t.rows[4][1]), laws.full.mean()(0));
  EXPECT_EQ(num(t.rows[4][4]), laws.reduced.variance());
}

TEST(LawCommand, JsonFormat) {
  const auto r = run_cli({"law", "--t-count", "2", "--t-end", "1", "--t-spacing", "linear", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[1]["t"].get<double>(), 1.0);
  EXPECT_TRUE(j[0].contains("w2_sq"));
}

TEST(BoundsCommand, ValidOscillatorExitsZero) {
  const auto r = run_cli({"bounds", "--gamma", "5", "--omega", "2"});
  EXPECT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(first_line(r.out), "bound_name,t,exact_sq,bound,margin,satisfied");
  const Table t = read_csv(r.out);
  EXPECT_EQ(t.rows.size(), 240u);
}

TEST(BoundsCommand, CriticalDampingIsConfigError) {
  const auto r = run_cli({"bounds", "--gamma", "4", "--omega", "2"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("NotOverdamped"), std::string::npos) << r.err;
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
}

TEST(BoundsCommand, CoupledSweepThreeBlocks) {
  const auto r = run_cli({"bounds", "--model", "coupled", "--a", "-1", "--x1", "1", "--sweep", "k=0.1,1,10"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const Table t = read_csv(r.out);
  ASSERT_EQ(t.columns.front(), "sweep_value");
  ASSERT_EQ(t.rows.size(), 3u * 240u);
  for (const auto& row : t.rows) EXPECT_EQ(num(row.back()), 1.0);
  EXPECT_EQ(num(t.rows.front()[0]), 0.1);
  EXPECT_EQ(num(t.rows.back()[0]), 10.0);
}

TEST(BoundsCommand, ViolationExitsOne) {
  const auto r = run_cli({"bounds", "--gamma", "2.776", "--omega", "1.185", "--beta", "3.30", "--x0", "8.80",
                          "--v0", "13.42"});
  EXPECT_EQ(r.code, kBoundViolation);
  EXPECT_NE(r.err.find("violation"), std::string::npos);
}

TEST(ConfigErrors, ExitTwoWithOneLine) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"law", "--model", "pendulum"},
           {"law", "--gamma", "abc"},
           {"law", "--no-such-flag"},
           {"law", "--model", "coupled", "--k", "-1"},
           {"sweep", "--sweep", "gamma"},
           {"law", "--t-spacing", "cubic"},
           {"law", "--config", "/nonexistent/modred.json"},
           {}}) {
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, kConfigError);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << r.err;
  }
}

TEST(SweepCommand, FrictionSweepDecreases) {
  const auto r = run_cli({"sweep", "--omega", "2", "--sweep", "gamma=5,10,20,40"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(first_line(r.out), "value,sup_w2_sq,bound,ratio");
  const Table t = read_csv(r.out);
  ASSERT_EQ(t.rows.size(), 4u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    EXPECT_LT(num(t.rows[i][1]), num(t.rows[i - 1][1]));
  }
  for (const auto& row : t.rows) EXPECT_LE(num(row[1]), num(row[2]));
  EXPECT_DOUBLE_EQ(num(t.rows[0][2]), 32.0 / 9);
}

TEST(SweepCommand, CouplingSweepVanishesAndIsLinearlyBounded) {
  const auto r = run_cli({"sweep", "--model", "coupled", "--a", "-1", "--x1", "1",
                          "--sweep", "k=0.4,0.1,0.01,0.001"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const Table t = read_csv(r.out);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    EXPECT_LT(num(t.rows[i][1]), num(t.rows[i - 1][1]));
  }
  for (const auto& row : t.rows) {
    const double k = num(row[0]);
    EXPECT_LE(num(row[1]), (1.0 / std::exp(1.0) + k / std::exp(2.0)) * k);
  }
  EXPECT_LT(num(t.rows.back()[1]), 1e-5);
}

TEST(SweepCommand, SingleValueMatchesBounds) {
  const auto s = run_cli({"sweep", "--gamma", "8", "--sweep", "gamma=8"});
  const auto b = run_cli({"bounds", "--gamma", "8"});
  ASSERT_EQ(s.code, 0);
  ASSERT_EQ(b.code, 0);
  const Table st = read_csv(s.out);
  const Table bt = read_csv(b.out);
  double sup = 0.0, bound = 0.0;
  for (const auto& row : bt.rows) {
    if (std::get<std::string>(row[0]) != "high_friction") continue;
    sup = std::max(sup, num(row[2]));
    bound = num(row[3]);
  }
  EXPECT_EQ(num(st.rows[0][1]), sup);
  EXPECT_EQ(num(st.rows[0][2]), bound);
}

TEST(Csv, RoundTripsExactly) {
  Table t;
  t.columns = {"name", "x"};
  const std::vector<double> values{0.1, 1.0 / 3, 6.02214076e23, -2.5e-300, 5e-324, 1.7976931348623157e308, 0.0};
  for (double v : values) t.add_row({std::string("v"), v});
  std::ostringstream os;
  write_csv(os, t);
  const Table back = read_csv(os.str());
  ASSERT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_EQ(num(back.rows[i][1]), values[i]);
    EXPECT_EQ(std::get<std::string>(back.rows[i][0]), "v");
  }
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Csv, CommandOutputRoundTrips) {
  const auto r = run_cli({"law", "--gamma", "9", "--x0", "0.7"});
  ASSERT_EQ(r.code, 0);
  const Table t = read_csv(r.out);
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), r.out);
}

TEST(ConfigFile, FlagsOverrideFileAndSidecarEchoes) {
  const std::string cfg_path = tmp_path("cli_test_config.json");
  const std::string out_path = tmp_path("cli_test_law.csv");
  {
    std::ofstream f(cfg_path);
    f << R"({"model": "oscillator", "gamma": 9, "omega": 2, "x0": 2, "t_count": 4, "t_end": 3,
             "t_spacing": "linear"})";
  }
  const auto r = run_cli({"law", "--config", cfg_path, "--gamma", "6", "--out", out_path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const Table t = read_csv(read_file(out_path));
  ASSERT_EQ(t.rows.size(), 4u);
  const OscillatorParams p{6, 2, 1, 2, 0};
  EXPECT_EQ(num(t.rows[3][1]), oscillator_marginal_law(p, 3.0).mean()(0));
  const auto side = nlohmann::json::parse(read_file(out_path + ".config.json"));
  EXPECT_EQ(side["gamma"].get<double>(), 6.0);
  EXPECT_EQ(side["x0"].get<double>(), 2.0);
  EXPECT_EQ(side["t_count"].get<int>(), 4);
  EXPECT_EQ(side["model"].get<std::string>(), "oscillator");

  // The sidecar is itself a valid config that reproduces the run.
  const std::string again = tmp_path("cli_test_law_again.csv");
  const auto r2 = run_cli({"law", "--config", out_path + ".config.json", "--out", again});
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(read_file(again), read_file(out_path));
}

TEST(SimulateCommand, DeterministicBytes) {
  const std::vector<std::string> args{"simulate", "--paths", "2000", "--dt", "0.01", "--seed", "42"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(first_line(a.out), "t,emp_mean,emp_var,emp_w2_vs_reduced,se_mean,se_var,se_w2,analytic_w2,z_score");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(read_csv(a.out).rows.size(), 3u);
  const auto c = run_cli({"simulate", "--paths", "2000", "--dt", "0.01", "--seed", "43"});
  EXPECT_NE(a.out, c.out);
}

TEST(SimulateCommand, ZeroNoiseHasZeroVariance) {
  const auto r = run_cli({"simulate", "--beta", "inf", "--paths", "100", "--dt", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : read_csv(r.out).rows) EXPECT_EQ(num(row[2]), 0.0);
}

TEST(SimulateCommand, UnstableStepIsReported) {
  const auto r = run_cli({"simulate", "--gamma", "50", "--dt", "0.1", "--paths", "10"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("UnstableStep"), std::string::npos) << r.err;
}

TEST(SimulateCommand, DefaultConfigZScores) {
  const auto r = run_cli({"simulate"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = read_csv(r.out);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& row : t.rows) {
    EXPECT_LE(std::abs(num(row[8])), 4.0) << "t=" << num(row[0]);
  }
}

}  // namespace
}  // namespace modred::cli
