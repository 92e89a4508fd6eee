#pragma once

#include <iosfwd>
#include <memory>

#include "wavecontrol/fem_assembly.hpp"
#include "wavecontrol/sparse_lu.hpp"
#include "wavecontrol/surface_tensors.hpp"
#include "wavecontrol/wave_physics.hpp"

namespace wavecontrol {

enum class ControlMode { Pressure, Membrane, Plate };

std::string_view to_string(ControlMode mode);

struct StateSolution {
  ComplexVector phi;  // scattered potential at every potential DOF
  ComplexVector eta;  // surface displacement DOFs, empty in pressure mode
  BodyVector X = BodyVector::Zero();
  double residual_norm = 0.0;    // relative residual of the coupled system
  double body_condition = 1.0;   // condition number of K - omega^2 M
};

struct AdjointSolution {
  ComplexVector lambda;
  ComplexVector mu;
  BodyVector Y = BodyVector::Zero();
  double residual_norm = 0.0;
};

/// Monolithic coupled operator. Unknown ordering: potential, body (3), surface state.
///   pressure:  [ A - w2/g (C_f + C_c) + a C_e    -jw K_g^T ]
///              [ jw rho K_g                        K - w2 M ]
///   passive:   [ A - w2/g C_f + a C_e   -jw K_g^T   -jw D   ]
///              [ jw rho K_g              K - w2 M    0      ]
///              [ jw rho D^T              0           S(u,v) ]
/// with S = Au + rho g Bv for the membrane and Lu + rho g Bv for the plate.
/// Without a body the body rows reduce to the identity.
class CoupledSystem {
 public:
  static CoupledSystem pressure(const AssembledOperators& ops, const RigidBody2D& body);
  static CoupledSystem passive(ControlMode mode, const AssembledOperators& ops, const ControlTensors& tensors,
                               const RigidBody2D& body, const RealVector& u, const RealVector& v);

  /// Pressure mode: rhs = (f_g - j w/(rho g) D_c u, -j w rho g).
  ComplexVector pressure_rhs(const ComplexVector& u) const;
  /// Passive modes: rhs = (f_g + f_c, -j w rho g, -j w rho h_c).
  ComplexVector passive_rhs() const;

  StateSolution solve(const ComplexVector& rhs) const;
  /// Solves S^H (lambda, Y, mu) = (0, -C X, 0).
  AdjointSolution solve_adjoint(const BodyVector& X, const Eigen::Matrix3d& C) const;

  const ComplexSparse& matrix() const { return solver_->matrix(); }
  int potential_size() const { return n_; }
  int surface_size() const { return m_; }

 private:
  CoupledSystem(const AssembledOperators& ops, const ControlTensors* tensors, ComplexSparse matrix, int m,
                double body_condition);

  const AssembledOperators* ops_;
  const ControlTensors* tensors_;
  int n_;
  int m_;
  double body_condition_;
  std::shared_ptr<SparseSolver> solver_;
};

StateSolution solve_state_pressure(const AssembledOperators& ops, const RigidBody2D& body, const ComplexVector& u);
AdjointSolution solve_adjoint_pressure(const AssembledOperators& ops, const RigidBody2D& body, const BodyVector& X,
                                       const Eigen::Matrix3d& C);

/// Throws InadmissibleControl unless u >= eps and eps <= v <= 1 - eps.
void check_admissible(const RealVector& u, const RealVector& v, double eps);

StateSolution solve_state_membrane(const AssembledOperators& ops, const ControlTensors& tensors,
                                   const RigidBody2D& body, const RealVector& u, const RealVector& v,
                                   double eps = 1e-6);
StateSolution solve_state_plate(const AssembledOperators& ops, const ControlTensors& tensors, const RigidBody2D& body,
                                const RealVector& u, const RealVector& v, double eps = 1e-6);
AdjointSolution solve_adjoint_passive(ControlMode mode, const AssembledOperators& ops, const ControlTensors& tensors,
                                      const RigidBody2D& body, const RealVector& u, const RealVector& v,
                                      const BodyVector& X, const Eigen::Matrix3d& C);

/// Total-field check on a body-free mesh: solves the potential problem with the incident
/// wave entering through the truncation lines and compares with the analytic field.
struct NoObstacleReport {
  double ratio = 0.0;  // |phi_h - I phi_inc| / |I phi_inc| on the free surface
  double scattered_norm = 0.0;
  double incident_norm = 0.0;
  int dofs = 0;
};
NoObstacleReport no_obstacle_consistency(const AssembledOperators& ops);

/// CSV "x,z,re,im" per potential DOF.
void write_field(std::ostream& out, const AssembledOperators& ops, const ComplexVector& phi);
/// CSV "x,re,im" per surface displacement node.
void write_trace(std::ostream& out, const ControlTensors& tensors, const ComplexVector& eta);

}  // namespace wavecontrol
