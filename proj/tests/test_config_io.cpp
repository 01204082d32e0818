#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pfsi/config.hpp"
#include "pfsi/driver.hpp"
#include "pfsi/io.hpp"

using namespace pfsi;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("pfsi_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string field_of(const std::string& text) {
  try {
    parse_config(text).finalize();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSmallRun = R"(
mode = "fixpoint"
n = 4
steps = 32

[[forcing.plate]]
time = -1
x = 1
amplitude = 1e-3

[fixed_point]
tolerance = 1e-11
)";

}  // namespace

TEST(Config, DefaultsAndDerivedFields) {
  SolverConfig c = parse_config("n = 8\nsteps = 64\n");
  c.finalize();
  EXPECT_EQ(c.mode, RunMode::Fixpoint);
  EXPECT_EQ(c.eps_cells(), 2);
  EXPECT_DOUBLE_EQ(c.kappa, 0.5);
  const DiscreteProblem p = c.problem();
  EXPECT_EQ(p.space.n, 8);
  EXPECT_GE(p.space.plate.kmax(), 2);
  EXPECT_GE(p.grid.nx(), 16);
  EXPECT_EQ(p.grid.nx() % 2, 0);
  EXPECT_GE(p.grid.nz(), 8);
}

TEST(Config, NamedErrors) {
  EXPECT_EQ(field_of("n = 7\n"), "n");
  EXPECT_EQ(field_of("kappa = 1.5\n"), "kappa");
  EXPECT_EQ(field_of("mean = 0.3\n"), "mean");
  EXPECT_EQ(field_of("period = -1.0\n"), "period");
  EXPECT_EQ(field_of("mode = \"bogus\"\n"), "mode");
  EXPECT_EQ(field_of("colour = 3\n"), "colour");
  EXPECT_EQ(field_of("[fixed_point]\nomega = 0.0\n"), "fixed_point.omega");
  EXPECT_EQ(field_of("[fixed_point]\nspeed = 1\n"), "fixed_point.speed");
  EXPECT_EQ(field_of("[quadrature]\nnx = 7\n"), "quadrature.nx");
  EXPECT_EQ(field_of("steps = 64\n[periodization]\nepsilon = 0.3\n"), "periodization.epsilon");
  EXPECT_EQ(field_of("n = \"eight\"\n"), "n");
  EXPECT_EQ(field_of("mode = \"study\"\n"), "study.amplitudes");
  EXPECT_EQ(field_of("[[forcing.plate]]\ntime = 0\nx = 0\namplitude = 1.0\n"), "forcing.plate[0].x");
  EXPECT_EQ(field_of("n = = 3\n"), "config");
  EXPECT_THROW(load_config("/nonexistent/run.toml"), ConfigError);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Io, SeriesCsvLayout) {
  EnergyReport r;
  r.times = {0.0, 0.5, 1.0};
  r.energy = {1.0, 2.0, 3.0};
  r.dissipation = {0.1, 0.2};
  r.power = {0.3, 0.4};
  r.residual = {0.0, 1e-9};
  r.mean_eta = {0.0, 0.0, 0.0};
  r.sup_eta = {0.0, 0.1, 0.0};
  r.periodicity = {0.0, 0.5, 0.0};
  const std::string csv = series_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")), "t,E,dissipation,power,residual,mean_eta,sup_eta,periodicity_defect");
  EXPECT_NE(csv.find("\r\n0.5,2,0.20000000000000001,0.40000000000000002,1.0000000000000001e-09,0,0.10000000000000001,0.5\r\n"),
            std::string::npos);
  EXPECT_NE(csv.find("\r\n1,3,,,,0,0,0\r\n"), std::string::npos);
}

TEST(Io, CheckpointRoundTrip) {
  const auto dir = scratch("ckpt");
  CoefficientTrajectory t = CoefficientTrajectory::zero(2.0, 5, 3);
  t.values.setRandom();
  t.derivatives.setRandom();
  const std::string path = (dir / "a.bin").string();
  save_checkpoint(path, Checkpoint{t, 7, {{"note", "x"}}});
  const Checkpoint c = load_checkpoint(path);
  EXPECT_EQ(c.iteration, 7);
  EXPECT_EQ(c.trajectory.period, 2.0);
  EXPECT_EQ(c.trajectory.values, t.values);
  EXPECT_EQ(c.trajectory.derivatives, t.derivatives);
  EXPECT_EQ(c.meta["note"], "x");
  EXPECT_EQ(std::filesystem::file_size(path), 16u + 2u * 6u * 3u * 8u);

  std::ofstream(path, std::ios::binary | std::ios::in | std::ios::out) << "garbage";
  EXPECT_THROW(load_checkpoint(path), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(Driver, ResumeReproducesUninterruptedRun) {
  const auto full_dir = scratch("full"), part_dir = scratch("part"), resumed_dir = scratch("resumed");
  std::ostringstream log;

  SolverConfig full = parse_config(kSmallRun);
  full.output = full_dir.string();
  ASSERT_EQ(run(full, {}, log), 0) << log.str();

  SolverConfig part = parse_config(kSmallRun);
  part.output = part_dir.string();
  part.max_iterations = 3;
  EXPECT_EQ(run(part, {}, log), 1);

  SolverConfig resumed = parse_config(kSmallRun);
  resumed.output = resumed_dir.string();
  resumed.resume = (part_dir / "checkpoint.bin").string();
  ASSERT_EQ(run(resumed, {}, log), 0) << log.str();

  const Checkpoint a = load_checkpoint((full_dir / "solution.bin").string());
  const Checkpoint b = load_checkpoint((resumed_dir / "solution.bin").string());
  EXPECT_EQ(a.iteration, b.iteration);
  EXPECT_EQ(a.trajectory.values, b.trajectory.values);
  EXPECT_EQ(a.trajectory.derivatives, b.trajectory.derivatives);
  EXPECT_EQ(read_file(full_dir / "series.csv"), read_file(resumed_dir / "series.csv"));
  for (const auto& d : {full_dir, part_dir, resumed_dir}) std::filesystem::remove_all(d);
}

TEST(Driver, ReportsAreBitIdenticalAcrossReruns) {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  std::ostringstream log;
  for (const auto& d : {a, b}) {
    SolverConfig c = parse_config(kSmallRun);
    c.mode = RunMode::Solve;
    c.output = d.string();
    run(c, {}, log);
  }
  EXPECT_EQ(read_file(a / "report.json"), read_file(b / "report.json"));
  EXPECT_EQ(read_file(a / "series.csv"), read_file(b / "series.csv"));
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Driver, SelftestPasses) {
  std::ostringstream log;
  EXPECT_TRUE(run_selftest(99, log)) << log.str();
}
