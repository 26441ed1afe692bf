#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "emdipole/io.hpp"
#include "emdipole/noise.hpp"
#include "emdipole/pipeline.hpp"
#include "test_support.hpp"

namespace emdipole {
namespace {

namespace fs = std::filesystem;

SamplingGrid cube(double c, std::size_t n) { return {Vec3::Constant(-c), Vec3::Constant(c), {n, n, n}}; }

MeasurementSet six_scene_data(double delta, std::uint64_t seed) {
  return add_noise(simulate_measurements(testing::six_mixed_scene(), fibonacci_directions(10),
                                         FrequencyGrid(200.0, default_node_count(200.0, 3 * std::sqrt(3.0)))),
                   {delta, seed});
}

TEST(Reconstruct, SixDipoleSceneEndToEnd) {
  const Scene truth = testing::six_mixed_scene();
  const auto grid = cube(1.5, 31);
  const auto result = reconstruct(six_scene_data(0.1, 11), grid, {});
  const auto m = match_report(truth, result.report, 0.5 * grid.cell_diagonal());
  EXPECT_EQ(m.matches.size(), 6u);
  EXPECT_TRUE(m.missed.empty());
  EXPECT_TRUE(m.spurious.empty());
  EXPECT_TRUE(result.report.failures.empty());
  for (const auto& match : m.matches) {
    EXPECT_TRUE(match.kind_correct);
    EXPECT_EQ(match.location_error, 0.0);
    EXPECT_LE(match.strength_error, 0.15);
  }
  for (const auto& d : result.report.dipoles) {
    EXPECT_GT(d.support, 0.5);
    EXPECT_EQ(d.k_max, 200.0);
  }
  EXPECT_EQ(result.field.grid.size(), grid.size());
}

TEST(Reconstruct, SingleDipoleClosedLoop) {
  const auto ds = fibonacci_directions(10);
  const FrequencyGrid band(200.0, default_node_count(200.0, 2 * std::sqrt(3.0)));
  for (DipoleKind kind : {DipoleKind::magnetic, DipoleKind::electric}) {
    const Scene truth({Dipole{kind, Vec3(0.2, -0.3, 0.1), testing::cv(Complex(1, 0.5), -0.4, Complex(0, 0.8))}});
    const auto ms = simulate_measurements(truth, ds, band);
    const auto result = reconstruct(ms, cube(1, 21), {});
    ASSERT_EQ(result.report.dipoles.size(), 1u);
    std::vector<Dipole> recovered;
    for (const auto& d : result.report.dipoles) recovered.push_back({d.kind, d.location, d.strength});
    const auto again = simulate_measurements(Scene(recovered), ds, band);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ms.samples().size(); ++i) {
      num += (again.samples()[i] - ms.samples()[i]).squaredNorm();
      den += ms.samples()[i].squaredNorm();
    }
    EXPECT_LE(std::sqrt(num / den), kQuadratureTolerance) << to_string(kind);
  }
}

TEST(Reconstruct, EmptyDataGivesEmptyReport) {
  const MeasurementSet empty(fibonacci_directions(6), FrequencyGrid(200.0, 400));
  const auto result = reconstruct(empty, cube(1, 5), {});
  EXPECT_TRUE(result.report.dipoles.empty());
  EXPECT_TRUE(result.report.failures.empty());
  EXPECT_TRUE(result.report.rejected.empty());
}

TEST(Reconstruct, GridAwayFromSourcesConfirmsNothing) {
  const SamplingGrid far{Vec3(1.6, 1.6, 1.6), Vec3(2.4, 2.4, 2.4), {9, 9, 9}};
  const auto result = reconstruct(six_scene_data(0.0, 0), far, {});
  EXPECT_TRUE(result.report.dipoles.empty());
}

TEST(Reconstruct, DeterministicAcrossRuns) {
  const SamplingGrid g{Vec3(-1.2, -1.2, -1.2), Vec3(1.2, 1.2, 1.2), {13, 13, 13}};
  const auto ms = six_scene_data(0.1, 3);
  const auto a = reconstruct(ms, g, {});
  const auto b = reconstruct(ms, g, {});
  EXPECT_EQ(a.field.values_mag, b.field.values_mag);
  EXPECT_EQ(a.field.values_elec, b.field.values_elec);
  ASSERT_EQ(a.report.dipoles.size(), b.report.dipoles.size());
  for (std::size_t i = 0; i < a.report.dipoles.size(); ++i) {
    EXPECT_EQ(a.report.dipoles[i].location, b.report.dipoles[i].location);
    EXPECT_EQ(a.report.dipoles[i].strength, b.report.dipoles[i].strength);
  }
}

TEST(Reconstruct, WithoutConfirmationKeepsEveryPeak) {
  const auto ms = six_scene_data(0.0, 0);
  const auto g = cube(1.5, 31);
  ReconstructionConfig raw;
  raw.confirm_peaks = false;
  const auto confirmed = reconstruct(ms, g, {});
  const auto unconfirmed = reconstruct(ms, g, raw);
  EXPECT_TRUE(unconfirmed.report.rejected.empty());
  EXPECT_GE(unconfirmed.report.dipoles.size() + unconfirmed.report.failures.size(),
            confirmed.report.dipoles.size() + confirmed.report.rejected.size());
}

TEST(Reconstruct, RejectsInvalidConfig) {
  const auto ms = six_scene_data(0.0, 0);
  ReconstructionConfig c;
  c.strength_k = 500.0;
  EXPECT_THROW(reconstruct(ms, cube(1, 3), c), std::invalid_argument);
  c = {};
  c.support_tolerance = 0.0;
  EXPECT_THROW(reconstruct(ms, cube(1, 3), c), std::invalid_argument);
  c = {};
  c.imaging.epsilon = -1.0;
  EXPECT_THROW(reconstruct(ms, cube(1, 3), c), std::invalid_argument);
}

#ifdef EMDIPOLE_CLI

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("emdipole_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(EMDIPOLE_CLI) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string output() const {
    std::ifstream in(dir_ / "stdout.txt");
    return {std::istreambuf_iterator<char>(in), {}};
  }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, SimulateReconstructEvaluate) {
  const std::string scene = (fs::path(EMDIPOLE_DATA_DIR) / "six_dipoles.json").string();
  ASSERT_EQ(run("simulate -s " + scene + " -d fib:10 --noise 0.1 --seed 4 -o " + path("m.csv")), 0) << output();
  ASSERT_TRUE(fs::exists(path("m.directions.json")));
  ASSERT_EQ(run("reconstruct -m " + path("m.csv") + " --grid=-1.5:1.5:31,-1.5:1.5:31,-1.5:1.5:31 -o " + path("r.json") +
                " --field-csv " + path("f.csv")),
            0)
      << output();
  const auto j = io::read_json_file(path("r.json"));
  EXPECT_EQ(j.at("metadata").at("seed"), 4);
  EXPECT_EQ(j.at("dipoles").size(), 6u);
  EXPECT_TRUE(fs::exists(path("f.csv")));
  ASSERT_EQ(run("evaluate -r " + path("r.json") + " -t " + scene + " -o " + path("e.csv")), 0) << output();
  EXPECT_NE(output().find("matched 6/6"), std::string::npos) << output();
  EXPECT_NE(output().find("spurious 0"), std::string::npos) << output();
}

TEST_F(Cli, ConfigFileSuppliesOptions) {
  const std::string scene = (fs::path(EMDIPOLE_DATA_DIR) / "six_dipoles.json").string();
  std::ofstream(path("sim.ini")) << "[simulate]\nscene = " << scene << "\ndirections = fib:6\nk-max = 20\noutput = " << path("m.csv")
                                 << "\n";
  ASSERT_EQ(run("--config " + path("sim.ini") + " simulate"), 0) << output();
  EXPECT_EQ(io::load_measurements(path("m.csv")).direction_count(), 6u);
}

TEST_F(Cli, CheckDirections) {
  ASSERT_EQ(run("check-directions -d plane:40 --magnetic 19 --planar"), 0) << output();
  EXPECT_NE(output().find("40"), std::string::npos);
}

TEST_F(Cli, ParseErrorsExitWithTwo) {
  std::ofstream(path("bad.json")) << R"({"dipoles": [{"kind": "magnetic", "location": [0, 0]}]})";
  EXPECT_EQ(run("simulate -s " + path("bad.json") + " -o " + path("m.csv")), 2);
  EXPECT_NE(output().find("dipoles[0].location"), std::string::npos) << output();
  EXPECT_EQ(run("simulate"), 2);
  EXPECT_NE(run("reconstruct -m " + path("absent.csv")), 0);
}

#endif

}  // namespace
}  // namespace emdipole
