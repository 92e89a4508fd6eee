#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wavecontrol/geometry.hpp"
#include "wavecontrol/ocp.hpp"

namespace wavecontrol {

enum class RunMode { Baseline, Pressure, Membrane, Plate, NoObstacle };

std::string_view to_string(RunMode mode);

/// Flat "section.key = value" text; '#' starts a comment.
struct RunConfig {
  RunMode mode = RunMode::Pressure;
  SliceGeometryConfig geometry;

  double rho = kWaterDensity;
  double g = kGravity;
  double period = 1.2;
  double amplitude = 1.0;
  int direction = 1;

  double body_density = 0.5 * kWaterDensity;

  double c_surge = 1.0;
  double c_heave = 1.0;
  double height = 1.0;  // roll weight is height^2
  CostConfig cost;

  OptimizerSettings optimizer;
  double u0 = 1.0;
  double v0 = 0.5;

  int gradient_directions = 5;
  double gradient_u = 1.0;
  double gradient_v = 0.5;
  Complex gradient_pressure{1000.0, 500.0};

  double omega_min = 0.5;
  double omega_max = 10.0;
  int omega_count = 20;
  std::vector<double> dispersion_depths;
  std::vector<double> dispersion_periods;  // extra rows at omega = 2 pi / T

  std::string output_dir = "out";
  std::uint64_t seed = 1;

  WaveEnvironment environment() const;
  RigidBody2D body() const;
  CostConfig cost_config() const;
};

using ConfigEntries = std::map<std::string, std::string>;

/// Throws ConfigError naming the offending line or key.
ConfigEntries parse_entries(std::istream& in);

enum class ConfigUse { Run, Dispersion };

/// Typed view of the entries. Unknown keys, malformed values and missing required keys
/// raise ConfigError with the key. Relative output directories are kept as given.
RunConfig make_run_config(const ConfigEntries& entries, ConfigUse use = ConfigUse::Run);
RunConfig load_run_config(const std::string& path, ConfigUse use = ConfigUse::Run);

}  // namespace wavecontrol
