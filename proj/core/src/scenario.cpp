#include "wavecontrol/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wavecontrol/error.hpp"

namespace wavecontrol {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ConfigError("output.dir", "cannot write '" + (dir / name).string() + "'");
  return out;
}

void write_history(const std::filesystem::path& dir, const OCPResult& r) {
  auto out = open_output(dir, "history.csv");
  out << "iter,J,motion_term,pg_norm\n";
  for (std::size_t i = 0; i < r.J_history.size(); ++i) {
    out << i << ',' << fmt(r.J_history[i]) << ',' << fmt(r.motion_history[i]) << ',' << fmt(r.pg_norm_history[i])
        << '\n';
  }
}

void write_real_control(const std::filesystem::path& dir, const std::string& name, const AssembledOperators& ops,
                        const RealVector& values) {
  auto out = open_output(dir, name);
  out << "x,value\n";
  for (int i = 0; i < ops.control_size(); ++i) out << fmt(ops.surface.control_x[i]) << ',' << fmt(values(i)) << '\n';
}

void write_complex_control(const std::filesystem::path& dir, const AssembledOperators& ops,
                           const ComplexVector& values) {
  auto out = open_output(dir, "control_u.csv");
  out << "x,re,im\n";
  for (int i = 0; i < ops.control_size(); ++i) {
    out << fmt(ops.surface.control_x[i]) << ',' << fmt(values(i).real()) << ',' << fmt(values(i).imag()) << '\n';
  }
}

void body_table(std::ostream& out, const BodyVector& uncontrolled, const BodyVector* controlled) {
  static const char* names[3] = {"surge", "heave", "roll"};
  for (int i = 0; i < 3; ++i) {
    out << "X." << names[i] << ".uncontrolled.amplitude = " << fmt(std::abs(uncontrolled(i))) << '\n';
    out << "X." << names[i] << ".uncontrolled.phase = " << fmt(std::arg(uncontrolled(i))) << '\n';
    if (controlled) {
      out << "X." << names[i] << ".controlled.amplitude = " << fmt(std::abs((*controlled)(i))) << '\n';
      out << "X." << names[i] << ".controlled.phase = " << fmt(std::arg((*controlled)(i))) << '\n';
    }
  }
}

}  // namespace

ScenarioOutcome run_scenario(const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir", "cannot create '" + dir.string() + "': " + ec.message());

  const WaveEnvironment env = cfg.environment();
  const Mesh2D mesh = build_slice_mesh(cfg.geometry);
  write_mesh_file((dir / "mesh.txt").string(), mesh);
  const AssembledOperators ops = assemble(mesh, env);
  const CostConfig cost = cfg.cost_config();

  ScenarioOutcome outcome;
  outcome.mode = cfg.mode;
  std::ostringstream summary;
  summary << "mode = " << to_string(cfg.mode) << '\n';
  summary << "omega = " << fmt(env.omega) << '\n';
  summary << "k = " << fmt(env.k) << '\n';
  summary << "wavelength = " << fmt(2.0 * std::numbers::pi / env.k) << '\n';
  summary << "vertices = " << mesh.vertices.size() << '\n';
  summary << "triangles = " << mesh.triangles.size() << '\n';
  summary << "potential_dofs = " << ops.potential_size() << '\n';
  summary << "control_dofs = " << ops.control_size() << '\n';

  if (cfg.mode == RunMode::NoObstacle) {
    const NoObstacleReport report = no_obstacle_consistency(ops);
    outcome.no_obstacle_ratio = report.ratio;
    summary << "scattered_norm = " << fmt(report.scattered_norm) << '\n';
    summary << "incident_norm = " << fmt(report.incident_norm) << '\n';
    summary << "scattered_ratio = " << fmt(report.ratio) << '\n';
    summary << "scattered_ratio_ok = " << (report.ratio < 5e-2 ? "yes" : "no") << '\n';
    const StateSolution zero{ComplexVector::Zero(ops.potential_size()), {}, BodyVector::Zero(), 0.0, 1.0};
    auto field = open_output(dir, "field.csv");
    write_field(field, ops, zero.phi);
    OCPResult empty;
    empty.J_history = {0.0};
    empty.motion_history = {0.0};
    empty.pg_norm_history = {0.0};
    write_history(dir, empty);
    outcome.summary = summary.str();
    open_output(dir, "summary.txt") << outcome.summary;
    return outcome;
  }

  const RigidBody2D body = cfg.body();
  const StateSolution baseline = solve_state_pressure(ops, body, ComplexVector::Zero(ops.control_size()));
  outcome.uncontrolled_motion = motion_term(baseline.X, cost.C);

  OCPResult result;
  const ControlTensors* tensors = nullptr;
  ControlTensors tensor_storage;
  switch (cfg.mode) {
    case RunMode::Baseline:
      result.state = baseline;
      result.cost = {outcome.uncontrolled_motion, outcome.uncontrolled_motion};
      result.J_history = {result.cost.J};
      result.motion_history = {result.cost.motion_term};
      result.pg_norm_history = {0.0};
      break;
    case RunMode::Pressure:
      result = solve_lq_pressure(ops, body, cost);
      break;
    case RunMode::Membrane:
    case RunMode::Plate: {
      const ControlMode mode = cfg.mode == RunMode::Membrane ? ControlMode::Membrane : ControlMode::Plate;
      tensor_storage = mode == ControlMode::Membrane ? assemble_membrane_tensors(ops) : assemble_plate_tensor(ops);
      tensors = &tensor_storage;
      const int l = ops.control_size();
      result = solve_passive(mode, ops, tensor_storage, body, cost, cfg.optimizer, RealVector::Constant(l, cfg.u0),
                             RealVector::Constant(l, cfg.v0));
      break;
    }
    case RunMode::NoObstacle: break;
  }
  outcome.controlled_motion = result.cost.motion_term;
  outcome.termination = result.termination;

  const bool controlled = cfg.mode != RunMode::Baseline;
  body_table(summary, baseline.X, controlled ? &result.state.X : nullptr);
  summary << "motion_term.uncontrolled = " << fmt(outcome.uncontrolled_motion) << '\n';
  if (controlled) {
    summary << "motion_term.controlled = " << fmt(outcome.controlled_motion) << '\n';
    summary << "motion_ratio = " << fmt(outcome.controlled_motion / outcome.uncontrolled_motion) << '\n';
    summary << "J.controlled = " << fmt(result.cost.J) << '\n';
    summary << "termination = " << to_string(result.termination) << '\n';
    summary << "iterations = " << result.iterations << '\n';
  }
  if (cfg.mode == RunMode::Pressure) {
    summary << "kkt_residual = " << fmt(result.kkt_residual) << '\n';
    summary << "cost_mismatch = " << fmt(result.cost_mismatch) << '\n';
  }
  summary << "state_residual = " << fmt(result.state.residual_norm) << '\n';

  write_history(dir, result);
  {
    auto field = open_output(dir, "field.csv");
    write_field(field, ops, result.state.phi);
  }
  if (cfg.mode == RunMode::Pressure) write_complex_control(dir, ops, result.u_active);
  if (tensors) {
    write_real_control(dir, "control_u.csv", ops, result.u);
    write_real_control(dir, "control_v.csv", ops, result.v);
    auto eta = open_output(dir, "eta.csv");
    write_trace(eta, *tensors, result.state.eta);
  }
  outcome.summary = summary.str();
  open_output(dir, "summary.txt") << outcome.summary;
  return outcome;
}

GradientCheckReport run_gradient_check(const RunConfig& cfg) {
  if (cfg.mode != RunMode::Pressure && cfg.mode != RunMode::Membrane && cfg.mode != RunMode::Plate) {
    throw ConfigError("mode", "gradient check needs pressure, membrane or plate");
  }
  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir", "cannot create '" + dir.string() + "': " + ec.message());

  const Mesh2D mesh = build_slice_mesh(cfg.geometry);
  const AssembledOperators ops = assemble(mesh, cfg.environment());
  const RigidBody2D body = cfg.body();
  const CostConfig cost = cfg.cost_config();
  const int l = ops.control_size();

  GradientCheckReport report;
  if (cfg.mode == RunMode::Pressure) {
    const auto problem = make_pressure_problem(ops, body, cost);
    report = fd_gradient_check(*problem, pack_complex(ComplexVector::Constant(l, cfg.gradient_pressure)),
                               cfg.gradient_directions, cfg.seed);
  } else {
    const ControlMode mode = cfg.mode == RunMode::Membrane ? ControlMode::Membrane : ControlMode::Plate;
    const ControlTensors tensors =
        mode == ControlMode::Membrane ? assemble_membrane_tensors(ops) : assemble_plate_tensor(ops);
    const auto problem = make_passive_problem(mode, ops, tensors, body, cost, cfg.optimizer.epsilon);
    report = fd_gradient_check(
        *problem, pack_passive(RealVector::Constant(l, cfg.gradient_u), RealVector::Constant(l, cfg.gradient_v)),
        cfg.gradient_directions, cfg.seed);
  }
  auto out = open_output(dir, "gradient_check.csv");
  out << "direction,step,adjoint,rel_error\n";
  for (std::size_t d = 0; d < report.fd_error.size(); ++d) {
    for (std::size_t s = 0; s < report.steps.size(); ++s) {
      out << d << ',' << fmt(report.steps[s]) << ',' << fmt(report.adjoint_derivative[d]) << ','
          << fmt(report.fd_error[d][s]) << '\n';
    }
  }
  return report;
}

void write_dispersion_table(const RunConfig& cfg, std::ostream& out) {
  std::vector<double> omegas;
  for (int i = 0; i < cfg.omega_count; ++i) {
    const double t = cfg.omega_count == 1 ? 0.0 : static_cast<double>(i) / (cfg.omega_count - 1);
    omegas.push_back(cfg.omega_min + t * (cfg.omega_max - cfg.omega_min));
  }
  for (double period : cfg.dispersion_periods) omegas.push_back(2.0 * std::numbers::pi / period);
  std::sort(omegas.begin(), omegas.end());
  out << "omega,h0,k,lambda,residual\n";
  for (double depth : cfg.dispersion_depths) {
    for (double omega : omegas) {
      const double k = solve_dispersion(omega, depth, cfg.g);
      out << fmt(omega) << ',' << fmt(depth) << ',' << fmt(k) << ',' << fmt(2.0 * std::numbers::pi / k) << ','
          << fmt(dispersion_residual(k, omega, depth, cfg.g)) << '\n';
    }
  }
}

}  // namespace wavecontrol
