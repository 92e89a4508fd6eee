#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wavecontrol/forward_solver.hpp"
#include "wavecontrol/projected_gradient.hpp"

namespace wavecontrol {

struct CostConfig {
  Eigen::Matrix3d C = Eigen::Matrix3d::Identity();
  double alpha_u = 1e-10;
  double beta_u = 1e-10;
  double alpha_v = 1e-4;
  double beta_v = 4e-2;

  /// diag(1, 1, H^2): surge, heave, roll weighted by a characteristic height.
  static Eigen::Matrix3d weight_matrix(double H);
};

struct CostValue {
  double J = 0.0;
  double motion_term = 0.0;  // X^H C X / 2
};

double motion_term(const BodyVector& X, const Eigen::Matrix3d& C);
/// J = X^H C X / 2 + (alpha u^H E_c u + beta u^H A_c u) / 2.
CostValue pressure_cost(const BodyVector& X, const ComplexVector& u, const CostConfig& cfg,
                        const AssembledOperators& ops);
CostValue passive_cost(const BodyVector& X, const RealVector& u, const RealVector& v, const CostConfig& cfg,
                       const AssembledOperators& ops);

/// Control-to-cost map with states eliminated. Controls are packed in a real vector:
/// pressure mode stores (Re u, Im u), passive modes store (u, v).
class ReducedProblem {
 public:
  virtual ~ReducedProblem() = default;
  virtual ControlMode mode() const = 0;
  virtual int size() const = 0;
  virtual Evaluation evaluate(const RealVector& x, bool with_gradient) const = 0;
  virtual StateSolution state(const RealVector& x) const = 0;
  virtual BoxBounds bounds() const = 0;
  virtual RealVector precondition(const RealVector& gradient) const = 0;
};

std::unique_ptr<ReducedProblem> make_pressure_problem(const AssembledOperators& ops, const RigidBody2D& body,
                                                      const CostConfig& cfg);
std::unique_ptr<ReducedProblem> make_passive_problem(ControlMode mode, const AssembledOperators& ops,
                                                     const ControlTensors& tensors, const RigidBody2D& body,
                                                     const CostConfig& cfg, double eps = 1e-6);

RealVector pack_complex(const ComplexVector& u);
ComplexVector unpack_complex(const RealVector& x);
RealVector pack_passive(const RealVector& u, const RealVector& v);

struct OCPResult {
  ControlMode mode = ControlMode::Pressure;
  ComplexVector u_active;  // pressure mode
  RealVector u;            // passive modes: tension or flexural rigidity
  RealVector v;            // passive modes: 1 - omega^2 m / (g rho)
  StateSolution state;
  CostValue cost;
  std::vector<double> J_history;
  std::vector<double> motion_history;
  std::vector<double> pg_norm_history;
  Termination termination = Termination::Converged;
  int iterations = 0;
  double kkt_residual = 0.0;     // one-shot LQ solve only
  double cost_mismatch = 0.0;    // |J(KKT) - J(fresh forward solve)| / J
};

/// One-shot solve of the saddle system in (phi, X, lambda, Y, u):
///   [ A_tot      -jw K_g^T   0             0           jw/(rho g) D_c ] = f_g
///   [ jw rho K_g  K - w2 M   0             0           0              ] = -jw rho g
///   [ 0           0          A_tot^H       -jw rho K_g^T  0           ] = 0
///   [ 0           C          jw K_g        K - w2 M    0              ] = 0
///   [ 0           0          -jw/(rho g) D_c^T  0      aE_c + bA_c    ] = 0
/// Throws SingularKKT if the factorization fails or the residual exceeds 1e-8.
OCPResult solve_lq_pressure(const AssembledOperators& ops, const RigidBody2D& body, const CostConfig& cfg);

/// Projected-gradient minimization of the reduced LQ cost, started from u0.
OCPResult solve_pressure_gradient(const AssembledOperators& ops, const RigidBody2D& body, const CostConfig& cfg,
                                  const OptimizerSettings& settings, const ComplexVector& u0);

/// Throws InadmissibleInitialControl if (u0, v0) is outside the admissible box.
OCPResult solve_passive(ControlMode mode, const AssembledOperators& ops, const ControlTensors& tensors,
                        const RigidBody2D& body, const CostConfig& cfg, const OptimizerSettings& settings,
                        const RealVector& u0, const RealVector& v0);

struct GradientCheckReport {
  ControlMode mode = ControlMode::Pressure;
  std::vector<double> steps;
  std::vector<double> adjoint_derivative;        // per direction
  std::vector<std::vector<double>> fd_error;     // [direction][step], relative
  std::vector<double> min_error;                 // per direction

  double worst() const;
  bool passed(double tol) const { return worst() < tol; }
};

/// Compares the adjoint directional derivative with central differences along seeded
/// random unit directions for steps 1e-3 ... 1e-7, scaled by max(1, |x|_inf).
GradientCheckReport fd_gradient_check(const ReducedProblem& problem, const RealVector& point, int directions,
                                      std::uint64_t seed);

}  // namespace wavecontrol
