#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "wavecontrol/error.hpp"
#include "wavecontrol/run_config.hpp"
#include "wavecontrol/scenario.hpp"

using namespace wavecontrol;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wavecontrol_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run_wavectl(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + WAVECONTROL_WAVECTL + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string coarse_pressure_config(const fs::path& out) {
  return "mode = pressure\n"
         "environment.period = 1.2\n"
         "environment.depth = 2.5\n"
         "body.r = 0.5\n"
         "geometry.mesh_size = 0.25\n"
         "output.dir = " + out.string() + "\n";
}

ConfigEntries entries_from(const std::string& text) {
  std::istringstream in(text);
  return parse_entries(in);
}

std::string config_error_key(const std::string& text, ConfigUse use = ConfigUse::Run) {
  try {
    make_run_config(entries_from(text), use);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::vector<std::vector<double>> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  const ConfigEntries e = entries_from("# header\nmode = membrane  # trailing\n\nbody.r=0.5\n");
  EXPECT_EQ(e.at("mode"), "membrane");
  EXPECT_EQ(e.at("body.r"), "0.5");
  EXPECT_EQ(e.size(), 2u);
}

TEST(Config, MalformedLinesAreRejected) {
  EXPECT_THROW(entries_from("mode pressure\n"), ConfigError);
  EXPECT_THROW(entries_from("mode = pressure\nmode = plate\n"), ConfigError);
  EXPECT_THROW(entries_from("body.r =\n"), ConfigError);
}

TEST(Config, ErrorsNameTheKey) {
  const std::string base = "mode = pressure\nenvironment.period = 1.2\nenvironment.depth = 2.5\n";
  EXPECT_NE(config_error_key(base).find("body.r"), std::string::npos);
  EXPECT_NE(config_error_key(base + "body.r = 0.5\nbogus.key = 1\n").find("bogus.key"), std::string::npos);
  EXPECT_NE(config_error_key(base + "body.r = -0.5\n").find("body.r"), std::string::npos);
  EXPECT_NE(config_error_key(base + "body.r = abc\n").find("body.r"), std::string::npos);
  EXPECT_NE(config_error_key("mode = sail\nenvironment.period = 1\nenvironment.depth = 1\nbody.r = 0.5\n").find("mode"),
            std::string::npos);
  EXPECT_NE(config_error_key("dispersion.omega_min = 1\n", ConfigUse::Dispersion).find("dispersion."),
            std::string::npos);
}

TEST(Config, TypedValues) {
  const RunConfig cfg = make_run_config(entries_from(
      "mode = plate\nenvironment.period = 1.5\nenvironment.depth = 3\nbody.r = 0.4\ncost.height = 2\n"
      "optimizer.max_iter = 7\noptimizer.v0 = 0.25\nseed = 42\n"));
  EXPECT_EQ(cfg.mode, RunMode::Plate);
  EXPECT_DOUBLE_EQ(cfg.period, 1.5);
  EXPECT_DOUBLE_EQ(cfg.geometry.depth, 3.0);
  EXPECT_DOUBLE_EQ(cfg.geometry.body_radius, 0.4);
  EXPECT_EQ(cfg.optimizer.max_iter, 7);
  EXPECT_DOUBLE_EQ(cfg.v0, 0.25);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_DOUBLE_EQ(cfg.cost_config().C(2, 2), 4.0);
  EXPECT_TRUE(cfg.geometry.with_body);
}

TEST(Config, PresetsLoad) {
  for (const char* name : {"sphere2d_pressure", "no_obstacle", "membrane", "plate"}) {
    EXPECT_NO_THROW(load_run_config(std::string(WAVECONTROL_PRESET_DIR) + "/" + name + ".cfg")) << name;
  }
  EXPECT_NO_THROW(load_run_config(std::string(WAVECONTROL_PRESET_DIR) + "/dispersion.cfg", ConfigUse::Dispersion));
  EXPECT_FALSE(load_run_config(std::string(WAVECONTROL_PRESET_DIR) + "/no_obstacle.cfg").geometry.with_body);
}

TEST(Dispersion, TableContainsTheCaseRow) {
  RunConfig cfg = load_run_config(std::string(WAVECONTROL_PRESET_DIR) + "/dispersion.cfg", ConfigUse::Dispersion);
  std::ostringstream out;
  write_dispersion_table(cfg, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "omega,h0,k,lambda,residual");
  const auto rows = read_csv(out.str());
  bool found = false;
  std::map<double, double> last_k;
  for (const auto& r : rows) {
    ASSERT_EQ(r.size(), 5u);
    EXPECT_LT(r[4], 1e-12);
    if (last_k.count(r[1])) EXPECT_GT(r[2], last_k[r[1]]);
    last_k[r[1]] = r[2];
    if (std::abs(r[0] - 2.0 * M_PI / 1.2) < 1e-9 && r[1] == 2.5) {
      found = true;
      EXPECT_NEAR(r[3], 2.25, 0.02);
    }
    if (r[1] == 1000.0 && r[0] > 2.0) EXPECT_NEAR(r[2], r[0] * r[0] / kGravity, 1e-9 * r[2]);
  }
  EXPECT_TRUE(found);
}

TEST(Wavectl, RunWritesOutputsAndExitsZero) {
  const fs::path dir = scratch("run");
  write_file(dir / "case.cfg", coarse_pressure_config(dir / "out"));
  ASSERT_EQ(run_wavectl("run \"" + (dir / "case.cfg").string() + "\"", dir / "log.txt"), 0) << read_file(dir / "log.txt");
  for (const char* f : {"summary.txt", "history.csv", "mesh.txt", "field.csv", "control_u.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  const std::string summary = read_file(dir / "out" / "summary.txt");
  EXPECT_NE(summary.find("motion_ratio = "), std::string::npos);
  EXPECT_NE(summary.find("mode = pressure"), std::string::npos);
}

TEST(Wavectl, ConfigErrorsExitOne) {
  const fs::path dir = scratch("bad");
  write_file(dir / "bad.cfg", "mode = pressure\nenvironment.period = 1.2\n");
  EXPECT_EQ(run_wavectl("run \"" + (dir / "bad.cfg").string() + "\"", dir / "log.txt"), 1);
  EXPECT_NE(read_file(dir / "log.txt").find("environment.depth"), std::string::npos);
  EXPECT_EQ(run_wavectl("run \"" + (dir / "missing.cfg").string() + "\"", dir / "log2.txt"), 1);
  EXPECT_EQ(run_wavectl("frobnicate", dir / "log3.txt"), 1);
}

TEST(Wavectl, CheckGradientAndMeshReader) {
  const fs::path dir = scratch("grad");
  write_file(dir / "ok.cfg", coarse_pressure_config(dir / "out_ok") + "gradient.directions = 2\n");
  EXPECT_EQ(run_wavectl("check-gradient \"" + (dir / "ok.cfg").string() + "\"", dir / "log.txt"), 0)
      << read_file(dir / "log.txt");
  EXPECT_TRUE(fs::exists(dir / "out_ok" / "gradient_check.csv"));
  // an unresolved mesh file is a numerical failure of the reader but an input error to the user
  write_file(dir / "mesh.txt", "not a mesh\n");
  EXPECT_EQ(run_wavectl("validate-mesh \"" + (dir / "mesh.txt").string() + "\"", dir / "log2.txt"), 1);
}

TEST(Wavectl, DispersionWritesTable) {
  const fs::path dir = scratch("disp");
  write_file(dir / "d.cfg",
             "dispersion.omega_min = 1\ndispersion.omega_max = 4\ndispersion.omega_count = 4\n"
             "dispersion.depths = 2.5\noutput.dir = " + (dir / "out").string() + "\n");
  ASSERT_EQ(run_wavectl("dispersion \"" + (dir / "d.cfg").string() + "\"", dir / "log.txt"), 0);
  EXPECT_EQ(read_csv(read_file(dir / "out" / "dispersion.csv")).size(), 4u);
}

TEST(Wavectl, ValidateMeshRoundTrip) {
  const fs::path dir = scratch("mesh");
  write_file(dir / "case.cfg", coarse_pressure_config(dir / "out"));
  ASSERT_EQ(run_wavectl("run \"" + (dir / "case.cfg").string() + "\"", dir / "log.txt"), 0);
  EXPECT_EQ(run_wavectl("validate-mesh \"" + (dir / "out" / "mesh.txt").string() + "\" --intervals 2", dir / "v.txt"), 0)
      << read_file(dir / "v.txt");
  EXPECT_NE(read_file(dir / "v.txt").find("mesh valid"), std::string::npos);
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
  const fs::path dir = scratch("det");
  for (const char* sub : {"a", "b"}) {
    RunConfig cfg = make_run_config(entries_from("mode = membrane\nenvironment.period = 1.2\nenvironment.depth = 2.5\n"
                                                 "body.r = 0.5\ngeometry.mesh_size = 0.25\noptimizer.max_iter = 5\n"));
    cfg.output_dir = (dir / sub).string();
    run_scenario(cfg);
  }
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const fs::path other = dir / "b" / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(read_file(entry.path()), read_file(other)) << entry.path().filename();
  }
}
