#include "wavecontrol/forward_solver.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "quadrature.hpp"
#include "wavecontrol/error.hpp"

namespace wavecontrol {
namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

void add_block(Triplets& out, const RealSparse& block, int row0, int col0, Complex scale) {
  for (int c = 0; c < block.outerSize(); ++c) {
    for (RealSparse::InnerIterator it(block, c); it; ++it) {
      out.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), scale * it.value());
    }
  }
}

void add_transposed_block(Triplets& out, const RealSparse& block, int row0, int col0, Complex scale) {
  for (int c = 0; c < block.outerSize(); ++c) {
    for (RealSparse::InnerIterator it(block, c); it; ++it) {
      out.emplace_back(row0 + static_cast<int>(it.col()), col0 + static_cast<int>(it.row()), scale * it.value());
    }
  }
}

// Body rows and columns shared by every mode; returns the condition number of K - w2 M.
double add_body_blocks(Triplets& out, const AssembledOperators& ops, const RigidBody2D& body) {
  const int n = ops.potential_size();
  const double w = ops.env.omega;
  if (!ops.has_body) {
    for (int r = 0; r < 3; ++r) out.emplace_back(n + r, n + r, 1.0);
    return 1.0;
  }
  const Eigen::Matrix3d dyn = body.stiffness - w * w * body.mass;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (dyn(r, c) != 0.0) out.emplace_back(n + r, n + c, dyn(r, c));
    }
  }
  add_transposed_block(out, ops.K_g, 0, n, -kJ * w);
  add_block(out, ops.K_g, n, 0, kJ * w * ops.env.rho);
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(dyn).singularValues();
  const double cond = sv(2) > 0.0 ? sv(0) / sv(2) : std::numeric_limits<double>::infinity();
  if (cond > 1e12) {
    std::clog << "warning: body block K - omega^2 M is near-singular (condition " << cond << ")\n";
  }
  return cond;
}

ComplexSparse build(int size, const Triplets& t) {
  ComplexSparse m(size, size);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

std::string_view to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::Pressure: return "pressure";
    case ControlMode::Membrane: return "membrane";
    case ControlMode::Plate: return "plate";
  }
  return "unknown";
}

CoupledSystem::CoupledSystem(const AssembledOperators& ops, const ControlTensors* tensors, ComplexSparse matrix, int m,
                             double body_condition)
    : ops_(&ops),
      tensors_(tensors),
      n_(ops.potential_size()),
      m_(m),
      body_condition_(body_condition),
      solver_(std::make_shared<SparseSolver>(std::move(matrix))) {}

CoupledSystem CoupledSystem::pressure(const AssembledOperators& ops, const RigidBody2D& body) {
  const int n = ops.potential_size();
  const double w2g = ops.env.omega * ops.env.omega / ops.env.g;
  Triplets t;
  add_block(t, ops.A, 0, 0, 1.0);
  add_block(t, ops.C_f, 0, 0, -w2g);
  add_block(t, ops.C_c, 0, 0, -w2g);
  add_block(t, ops.C_e, 0, 0, ops.alpha);
  const double cond = add_body_blocks(t, ops, body);
  return CoupledSystem(ops, nullptr, build(n + 3, t), 0, cond);
}

CoupledSystem CoupledSystem::passive(ControlMode mode, const AssembledOperators& ops, const ControlTensors& tensors,
                                     const RigidBody2D& body, const RealVector& u, const RealVector& v) {
  if (mode == ControlMode::Pressure) throw InputError("passive system requested in pressure mode");
  const int n = ops.potential_size();
  const int m = tensors.state_size;
  const double w = ops.env.omega;
  const double rho = ops.env.rho;
  Triplets t;
  add_block(t, ops.A, 0, 0, 1.0);
  add_block(t, ops.C_f, 0, 0, -w * w / ops.env.g);
  add_block(t, ops.C_e, 0, 0, ops.alpha);
  const double cond = add_body_blocks(t, ops, body);
  add_block(t, tensors.coupling, 0, n + 3, -kJ * w);
  add_transposed_block(t, tensors.coupling, n + 3, 0, kJ * w * rho);
  add_block(t, tensors.contract_stiffness(u), n + 3, n + 3, 1.0);
  add_block(t, tensors.contract_mass(v), n + 3, n + 3, rho * ops.env.g);
  return CoupledSystem(ops, &tensors, build(n + 3 + m, t), m, cond);
}

ComplexVector CoupledSystem::pressure_rhs(const ComplexVector& u) const {
  const auto& env = ops_->env;
  if (u.size() != ops_->control_size()) throw InputError("pressure control has the wrong length");
  ComplexVector rhs(n_ + 3 + m_);
  rhs.head(n_) = ops_->f_g - kJ * (env.omega / (env.rho * env.g)) * (ops_->D_c.cast<Complex>() * u);
  rhs.segment<3>(n_) = -kJ * env.omega * env.rho * ops_->g;
  return rhs;
}

ComplexVector CoupledSystem::passive_rhs() const {
  const auto& env = ops_->env;
  ComplexVector rhs(n_ + 3 + m_);
  rhs.head(n_) = ops_->f_g + ops_->f_c;
  rhs.segment<3>(n_) = -kJ * env.omega * env.rho * ops_->g;
  if (m_ > 0) rhs.tail(m_) = -kJ * env.omega * env.rho * tensors_->incident_trace;
  return rhs;
}

StateSolution CoupledSystem::solve(const ComplexVector& rhs) const {
  const ComplexVector x = solver_->solve(rhs);
  StateSolution s;
  s.phi = x.head(n_);
  s.X = x.segment<3>(n_);
  s.eta = x.tail(m_);
  s.residual_norm = solver_->last_residual();
  s.body_condition = body_condition_;
  return s;
}

AdjointSolution CoupledSystem::solve_adjoint(const BodyVector& X, const Eigen::Matrix3d& C) const {
  ComplexVector rhs = ComplexVector::Zero(n_ + 3 + m_);
  if (ops_->has_body) rhs.segment<3>(n_) = -(C.transpose().cast<Complex>() * X);
  const ComplexVector y = solver_->solve_adjoint(rhs);
  AdjointSolution a;
  a.lambda = y.head(n_);
  a.Y = y.segment<3>(n_);
  a.mu = y.tail(m_);
  a.residual_norm = solver_->last_residual();
  return a;
}

StateSolution solve_state_pressure(const AssembledOperators& ops, const RigidBody2D& body, const ComplexVector& u) {
  const CoupledSystem sys = CoupledSystem::pressure(ops, body);
  return sys.solve(sys.pressure_rhs(u));
}

AdjointSolution solve_adjoint_pressure(const AssembledOperators& ops, const RigidBody2D& body, const BodyVector& X,
                                       const Eigen::Matrix3d& C) {
  return CoupledSystem::pressure(ops, body).solve_adjoint(X, C);
}

void check_admissible(const RealVector& u, const RealVector& v, double eps) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u(i) >= eps)) throw InadmissibleControl("u[" + std::to_string(i) + "] is below the lower bound");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) >= eps && v(i) <= 1.0 - eps)) {
      throw InadmissibleControl("v[" + std::to_string(i) + "] is outside [eps, 1 - eps]");
    }
  }
}

StateSolution solve_state_membrane(const AssembledOperators& ops, const ControlTensors& tensors,
                                   const RigidBody2D& body, const RealVector& u, const RealVector& v, double eps) {
  check_admissible(u, v, eps);
  const CoupledSystem sys = CoupledSystem::passive(ControlMode::Membrane, ops, tensors, body, u, v);
  return sys.solve(sys.passive_rhs());
}

StateSolution solve_state_plate(const AssembledOperators& ops, const ControlTensors& tensors, const RigidBody2D& body,
                                const RealVector& u, const RealVector& v, double eps) {
  check_admissible(u, v, eps);
  const CoupledSystem sys = CoupledSystem::passive(ControlMode::Plate, ops, tensors, body, u, v);
  return sys.solve(sys.passive_rhs());
}

AdjointSolution solve_adjoint_passive(ControlMode mode, const AssembledOperators& ops, const ControlTensors& tensors,
                                      const RigidBody2D& body, const RealVector& u, const RealVector& v,
                                      const BodyVector& X, const Eigen::Matrix3d& C) {
  return CoupledSystem::passive(mode, ops, tensors, body, u, v).solve_adjoint(X, C);
}

NoObstacleReport no_obstacle_consistency(const AssembledOperators& ops) {
  if (ops.has_body) throw InvalidGeometry("no-obstacle check needs a mesh without the body");
  const int n = ops.potential_size();
  const double w2g = ops.env.omega * ops.env.omega / ops.env.g;
  const ComplexSparse m = (ops.A - w2g * (ops.C_f + ops.C_c)).cast<Complex>() + ops.alpha * ops.C_e.cast<Complex>();
  ComplexVector rhs = ComplexVector::Zero(n);
  for (const auto& seg : ops.boundary) {
    if (seg.tag != BoundaryTag::Truncation) continue;
    const double len = std::hypot(seg.end.x - seg.start.x, seg.end.z - seg.start.z);
    for (const auto& q : detail::kGauss5) {
      const double x = seg.start.x + q.s * (seg.end.x - seg.start.x);
      const double z = seg.start.z + q.s * (seg.end.z - seg.start.z);
      const Complex data = incident_normal_derivative(ops.env, x, z, seg.normal) + ops.alpha * incident_potential(ops.env, x, z);
      const auto shape = detail::quadratic_values(q.s);
      for (int i = 0; i < 3; ++i) rhs(seg.dofs[i]) += q.w * len * data * shape[i];
    }
  }
  const SparseSolver solver(m);
  const ComplexVector total = solver.solve(rhs);
  const ComplexVector incident = interpolate_incident(ops);
  NoObstacleReport report;
  report.dofs = n;
  report.incident_norm = boundary_norm(ops.C_f, incident);
  report.scattered_norm = boundary_norm(ops.C_f, total - incident);
  report.ratio = report.incident_norm > 0.0 ? report.scattered_norm / report.incident_norm : 0.0;
  return report;
}

void write_field(std::ostream& out, const AssembledOperators& ops, const ComplexVector& phi) {
  char buf[160];
  out << "x,z,re,im\n";
  for (int i = 0; i < ops.potential_size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", ops.space.coords[i].x, ops.space.coords[i].z,
                  phi(i).real(), phi(i).imag());
    out << buf;
  }
}

void write_trace(std::ostream& out, const ControlTensors& tensors, const ComplexVector& eta) {
  char buf[128];
  out << "x,re,im\n";
  const ComplexVector values = tensors.displacement(eta);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", tensors.node_x[i], values(i).real(), values(i).imag());
    out << buf;
  }
}

}  // namespace wavecontrol
