#include "wavecontrol/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "wavecontrol/error.hpp"

namespace wavecontrol {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a number, got '" + text + "'");
  return value;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
  return value;
}

RunMode to_mode(const std::string& text) {
  if (text == "baseline") return RunMode::Baseline;
  if (text == "pressure") return RunMode::Pressure;
  if (text == "membrane") return RunMode::Membrane;
  if (text == "plate") return RunMode::Plate;
  if (text == "no_obstacle") return RunMode::NoObstacle;
  throw ConfigError("mode", "unknown mode '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list");
  return out;
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Baseline: return "baseline";
    case RunMode::Pressure: return "pressure";
    case RunMode::Membrane: return "membrane";
    case RunMode::Plate: return "plate";
    case RunMode::NoObstacle: return "no_obstacle";
  }
  return "unknown";
}

WaveEnvironment RunConfig::environment() const {
  return WaveEnvironment::from_period(period, geometry.depth, amplitude, direction, rho, g);
}

RigidBody2D RunConfig::body() const { return body_matrices(body_density, geometry.body_radius, rho, g); }

CostConfig RunConfig::cost_config() const {
  CostConfig c = cost;
  c.C = Eigen::Vector3d(c_surge, c_heave, height * height).asDiagonal();
  return c;
}

ConfigEntries parse_entries(std::istream& in) {
  ConfigEntries entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", "line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(number) + ": empty key");
    if (value.empty()) throw ConfigError(key, "empty value");
    if (!entries.emplace(key, value).second) throw ConfigError(key, "duplicate key");
  }
  return entries;
}

RunConfig make_run_config(const ConfigEntries& entries, ConfigUse use) {
  RunConfig cfg;
  std::set<std::string> seen;
  using Setter = std::function<void(const std::string& key, const std::string& value)>;
  auto num = [](double& target) -> Setter {
    return [&target](const std::string& k, const std::string& v) { target = to_double(k, v); };
  };
  auto integer = [](int& target) -> Setter {
    return [&target](const std::string& k, const std::string& v) { target = static_cast<int>(to_integer(k, v)); };
  };
  const std::map<std::string, Setter> setters = {
      {"mode", [&](const std::string&, const std::string& v) { cfg.mode = to_mode(v); }},
      {"seed", [&](const std::string& k, const std::string& v) { cfg.seed = static_cast<std::uint64_t>(to_integer(k, v)); }},
      {"output.dir", [&](const std::string&, const std::string& v) { cfg.output_dir = v; }},
      {"geometry.half_width", num(cfg.geometry.half_width)},
      {"geometry.control_extent", num(cfg.geometry.control_extent)},
      {"geometry.mesh_size", num(cfg.geometry.mesh_size)},
      {"environment.rho", num(cfg.rho)},
      {"environment.g", num(cfg.g)},
      {"environment.period", num(cfg.period)},
      {"environment.depth", num(cfg.geometry.depth)},
      {"environment.amplitude", num(cfg.amplitude)},
      {"environment.direction", integer(cfg.direction)},
      {"body.density", num(cfg.body_density)},
      {"body.r", num(cfg.geometry.body_radius)},
      {"cost.c_surge", num(cfg.c_surge)},
      {"cost.c_heave", num(cfg.c_heave)},
      {"cost.height", num(cfg.height)},
      {"cost.alpha_u", num(cfg.cost.alpha_u)},
      {"cost.beta_u", num(cfg.cost.beta_u)},
      {"cost.alpha_v", num(cfg.cost.alpha_v)},
      {"cost.beta_v", num(cfg.cost.beta_v)},
      {"optimizer.max_iter", integer(cfg.optimizer.max_iter)},
      {"optimizer.tol_rel", num(cfg.optimizer.tol_rel)},
      {"optimizer.tol_abs", num(cfg.optimizer.tol_abs)},
      {"optimizer.armijo", num(cfg.optimizer.armijo)},
      {"optimizer.backtrack", num(cfg.optimizer.backtrack)},
      {"optimizer.max_backtracks", integer(cfg.optimizer.max_backtracks)},
      {"optimizer.epsilon", num(cfg.optimizer.epsilon)},
      {"optimizer.u0", num(cfg.u0)},
      {"optimizer.v0", num(cfg.v0)},
      {"gradient.directions", integer(cfg.gradient_directions)},
      {"gradient.u", num(cfg.gradient_u)},
      {"gradient.v", num(cfg.gradient_v)},
      {"gradient.pressure_re", [&](const std::string& k, const std::string& v) {
         cfg.gradient_pressure.real(to_double(k, v));
       }},
      {"gradient.pressure_im", [&](const std::string& k, const std::string& v) {
         cfg.gradient_pressure.imag(to_double(k, v));
       }},
      {"dispersion.omega_min", num(cfg.omega_min)},
      {"dispersion.omega_max", num(cfg.omega_max)},
      {"dispersion.omega_count", integer(cfg.omega_count)},
      {"dispersion.depths", [&](const std::string& k, const std::string& v) { cfg.dispersion_depths = to_list(k, v); }},
      {"dispersion.periods", [&](const std::string& k, const std::string& v) { cfg.dispersion_periods = to_list(k, v); }},
  };
  for (const auto& [key, value] : entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    it->second(key, value);
    seen.insert(key);
  }

  const std::vector<std::string> required =
      use == ConfigUse::Run
          ? std::vector<std::string>{"mode", "environment.period", "environment.depth", "body.r"}
          : std::vector<std::string>{"dispersion.omega_min", "dispersion.omega_max", "dispersion.omega_count",
                                     "dispersion.depths"};
  for (const auto& key : required) {
    if (!seen.count(key)) throw ConfigError(key, "missing required key");
  }

  auto positive = [](const std::string& key, double value) {
    if (!(value > 0.0)) throw ConfigError(key, "must be positive");
  };
  if (use == ConfigUse::Run) {
    positive("environment.period", cfg.period);
    positive("environment.depth", cfg.geometry.depth);
    positive("environment.rho", cfg.rho);
    positive("environment.g", cfg.g);
    positive("body.r", cfg.geometry.body_radius);
    positive("body.density", cfg.body_density);
    positive("geometry.mesh_size", cfg.geometry.mesh_size);
    if (cfg.amplitude < 0.0) throw ConfigError("environment.amplitude", "must be non-negative");
    if (cfg.direction != 1 && cfg.direction != -1) throw ConfigError("environment.direction", "must be 1 or -1");
    positive("cost.height", cfg.height);
    positive("cost.c_surge", cfg.c_surge);
    positive("cost.c_heave", cfg.c_heave);
    positive("cost.alpha_u", cfg.cost.alpha_u);
    positive("cost.beta_u", cfg.cost.beta_u);
    positive("cost.alpha_v", cfg.cost.alpha_v);
    positive("cost.beta_v", cfg.cost.beta_v);
    if (cfg.optimizer.max_iter < 0) throw ConfigError("optimizer.max_iter", "must be non-negative");
    if (cfg.gradient_directions < 1) throw ConfigError("gradient.directions", "must be at least 1");
    cfg.geometry.with_body = cfg.mode != RunMode::NoObstacle;
  } else {
    positive("dispersion.omega_min", cfg.omega_min);
    if (!(cfg.omega_max >= cfg.omega_min)) throw ConfigError("dispersion.omega_max", "must not be below omega_min");
    if (cfg.omega_count < 1) throw ConfigError("dispersion.omega_count", "must be at least 1");
    for (double d : cfg.dispersion_depths) positive("dispersion.depths", d);
    for (double t : cfg.dispersion_periods) positive("dispersion.periods", t);
    positive("environment.g", cfg.g);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path, ConfigUse use) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  return make_run_config(parse_entries(in), use);
}

}  // namespace wavecontrol
