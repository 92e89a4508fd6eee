// wavectl: batch front-end for the wave-control solvers.
//
//   wavectl run <config>
//   wavectl check-gradient <config>
//   wavectl dispersion <config>
//   wavectl validate-mesh <meshfile> [--intervals N]
//
// Exit status: 0 success, 1 input/config error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wavecontrol/error.hpp"
#include "wavecontrol/scenario.hpp"

namespace {

using namespace wavecontrol;

int cmd_run(const std::string& path) {
  const RunConfig cfg = load_run_config(path);
  const ScenarioOutcome outcome = run_scenario(cfg);
  std::cout << outcome.summary;
  return 0;
}

int cmd_check_gradient(const std::string& path) {
  const RunConfig cfg = load_run_config(path);
  const GradientCheckReport report = run_gradient_check(cfg);
  for (std::size_t d = 0; d < report.min_error.size(); ++d) {
    std::printf("direction %zu: adjoint %.12g min_rel_error %.3e\n", d, report.adjoint_derivative[d],
                report.min_error[d]);
  }
  const bool ok = report.passed(1e-6);
  std::printf("%s: worst min_rel_error %.3e (tolerance 1e-6)\n", ok ? "PASS" : "FAIL", report.worst());
  return ok ? 0 : 2;
}

int cmd_dispersion(const std::string& path) {
  const RunConfig cfg = load_run_config(path, ConfigUse::Dispersion);
  std::filesystem::create_directories(cfg.output_dir);
  const auto file = std::filesystem::path(cfg.output_dir) / "dispersion.csv";
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("output.dir", "cannot write '" + file.string() + "'");
  write_dispersion_table(cfg, out);
  write_dispersion_table(cfg, std::cout);
  return 0;
}

int cmd_validate_mesh(const std::string& path, int intervals) {
  Mesh2D mesh;
  try {
    mesh = read_mesh_file(path);
  } catch (const NumericalError& e) {
    throw InputError(e.what());
  }
  const MeshDiagnostics d = validate_mesh(mesh, intervals);
  auto flag = [](bool b) { return b ? "ok" : "FAIL"; };
  std::printf("vertices %zu triangles %zu boundary_edges %zu\n", mesh.vertices.size(), mesh.triangles.size(),
              mesh.boundary_edges.size());
  std::printf("single_owner %s\ncoverage %s\nplanes %s\norientation %s\ncontrol_intervals %s (%d)\npositive_area %s\n",
              flag(d.single_owner), flag(d.coverage), flag(d.planes), flag(d.orientation), flag(d.control_intervals),
              d.control_interval_count, flag(d.positive_area));
  std::printf("min_quality %.6g\nmin_area %.6g\n", d.min_quality, d.min_area);
  for (const auto& m : d.messages) std::printf("  %s\n", m.c_str());
  std::printf("%s\n", d.ok() ? "mesh valid" : "mesh invalid");
  return d.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain wave-control solver"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->add_option("config", config, "Config file")->required();
  auto* grad = app.add_subcommand("check-gradient", "Compare adjoint gradients with finite differences");
  grad->add_option("config", config, "Config file")->required();
  auto* disp = app.add_subcommand("dispersion", "Tabulate the dispersion relation");
  disp->add_option("config", config, "Config file")->required();
  std::string mesh_file;
  int intervals = 2;
  auto* mesh = app.add_subcommand("validate-mesh", "Check a mesh file");
  mesh->add_option("meshfile", mesh_file, "Mesh file")->required();
  mesh->add_option("--intervals", intervals, "Expected number of control intervals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config);
    if (*grad) return cmd_check_gradient(config);
    if (*disp) return cmd_dispersion(config);
    if (*mesh) return cmd_validate_mesh(mesh_file, intervals);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
