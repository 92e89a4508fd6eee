#include "wavecontrol/ocp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "wavecontrol/error.hpp"

namespace wavecontrol {
namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

double quadratic_form(const RealSparse& m, const RealVector& u) { return u.dot(m * u); }

double quadratic_form(const RealSparse& m, const ComplexVector& u) {
  return u.dot(m.cast<Complex>() * u).real();
}

RealSparse regularization(const AssembledOperators& ops, double alpha, double beta) {
  RealSparse r = alpha * ops.E_c + beta * ops.A_c;
  r.makeCompressed();
  return r;
}

// j w/(rho g) D_c, placed in the potential rows.
ComplexSparse control_operator(const AssembledOperators& ops) {
  const int n = ops.potential_size();
  const double scale = ops.env.omega / (ops.env.rho * ops.env.g);
  Triplets t;
  for (int c = 0; c < ops.D_c.outerSize(); ++c) {
    for (RealSparse::InnerIterator it(ops.D_c, c); it; ++it) {
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), kJ * scale * it.value());
    }
  }
  ComplexSparse b(n + 3, ops.control_size());
  b.setFromTriplets(t.begin(), t.end());
  b.makeCompressed();
  return b;
}

class PressureProblem final : public ReducedProblem {
 public:
  PressureProblem(const AssembledOperators& ops, const RigidBody2D& body, const CostConfig& cfg)
      : ops_(ops), cfg_(cfg), system_(CoupledSystem::pressure(ops, body)), B_(control_operator(ops)),
        R_(regularization(ops, cfg.alpha_u, cfg.beta_u)) {
    R_factor_.compute(R_);
    if (R_factor_.info() != Eigen::Success) throw SingularSystem("control regularization is not positive definite");
  }

  ControlMode mode() const override { return ControlMode::Pressure; }
  int size() const override { return 2 * ops_.control_size(); }

  StateSolution state(const RealVector& x) const override {
    return system_.solve(system_.pressure_rhs(unpack_complex(x)));
  }

  Evaluation evaluate(const RealVector& x, bool with_gradient) const override {
    const ComplexVector u = unpack_complex(x);
    const StateSolution s = system_.solve(system_.pressure_rhs(u));
    const CostValue c = pressure_cost(s.X, u, cfg_, ops_);
    Evaluation e{c.J, c.motion_term, {}};
    if (with_gradient) {
      const AdjointSolution a = system_.solve_adjoint(s.X, cfg_.C);
      ComplexVector w(ops_.potential_size() + 3);
      w << a.lambda, a.Y;
      const ComplexVector g = R_.cast<Complex>() * u + B_.adjoint() * w;
      e.gradient = pack_complex(g);
    }
    return e;
  }

  BoxBounds bounds() const override {
    const double inf = std::numeric_limits<double>::infinity();
    return {RealVector::Constant(size(), -inf), RealVector::Constant(size(), inf)};
  }

  RealVector precondition(const RealVector& gradient) const override {
    const int l = ops_.control_size();
    RealVector out(gradient.size());
    out.head(l) = R_factor_.solve(gradient.head(l));
    out.tail(l) = R_factor_.solve(gradient.tail(l));
    return out;
  }

 private:
  const AssembledOperators& ops_;
  CostConfig cfg_;
  CoupledSystem system_;
  ComplexSparse B_;
  RealSparse R_;
  Eigen::SimplicialLDLT<RealSparse> R_factor_;
};

class PassiveProblem final : public ReducedProblem {
 public:
  PassiveProblem(ControlMode mode, const AssembledOperators& ops, const ControlTensors& tensors,
                 const RigidBody2D& body, const CostConfig& cfg, double eps)
      : mode_(mode), ops_(ops), tensors_(tensors), body_(body), cfg_(cfg), eps_(eps) {
    if (mode == ControlMode::Pressure) throw InputError("passive problem requested in pressure mode");
    const int l = ops.control_size();
    diag_u_.resize(l);
    diag_v_.resize(l);
    const RealSparse Ru = regularization(ops, cfg.alpha_u, cfg.beta_u);
    const RealSparse Rv = regularization(ops, cfg.alpha_v, cfg.beta_v);
    for (int k = 0; k < l; ++k) {
      diag_u_(k) = 1.0 / Ru.coeff(k, k);
      diag_v_(k) = 1.0 / Rv.coeff(k, k);
    }
  }

  ControlMode mode() const override { return mode_; }
  int size() const override { return 2 * ops_.control_size(); }

  StateSolution state(const RealVector& x) const override { return system_at(x).solve(system_at(x).passive_rhs()); }

  Evaluation evaluate(const RealVector& x, bool with_gradient) const override {
    const int l = ops_.control_size();
    const RealVector u = x.head(l);
    const RealVector v = x.tail(l);
    const CoupledSystem& sys = system_at(x);
    const StateSolution s = sys.solve(sys.passive_rhs());
    const CostValue c = passive_cost(s.X, u, v, cfg_, ops_);
    Evaluation e{c.J, c.motion_term, {}};
    if (with_gradient) {
      const AdjointSolution a = sys.solve_adjoint(s.X, cfg_.C);
      e.gradient.resize(2 * l);
      e.gradient.head(l) = regularization(ops_, cfg_.alpha_u, cfg_.beta_u) * u + tensors_.stiffness_gradient(a.mu, s.eta);
      e.gradient.tail(l) = regularization(ops_, cfg_.alpha_v, cfg_.beta_v) * v +
                           ops_.env.rho * ops_.env.g * tensors_.mass_gradient(a.mu, s.eta);
    }
    return e;
  }

  BoxBounds bounds() const override {
    const int l = ops_.control_size();
    BoxBounds b;
    b.lower = RealVector::Constant(2 * l, eps_);
    b.upper.resize(2 * l);
    b.upper.head(l).setConstant(std::numeric_limits<double>::infinity());
    b.upper.tail(l).setConstant(1.0 - eps_);
    return b;
  }

  RealVector precondition(const RealVector& gradient) const override {
    const int l = ops_.control_size();
    RealVector out(gradient.size());
    out.head(l) = diag_u_.cwiseProduct(gradient.head(l));
    out.tail(l) = diag_v_.cwiseProduct(gradient.tail(l));
    return out;
  }

 private:
  const CoupledSystem& system_at(const RealVector& x) const {
    if (!cached_ || cached_x_.size() != x.size() || cached_x_ != x) {
      const int l = ops_.control_size();
      check_admissible(x.head(l), x.tail(l), eps_);
      cached_ = std::make_unique<CoupledSystem>(
          CoupledSystem::passive(mode_, ops_, tensors_, body_, x.head(l), x.tail(l)));
      cached_x_ = x;
    }
    return *cached_;
  }

  ControlMode mode_;
  const AssembledOperators& ops_;
  const ControlTensors& tensors_;
  RigidBody2D body_;
  CostConfig cfg_;
  double eps_;
  RealVector diag_u_;
  RealVector diag_v_;
  mutable std::unique_ptr<CoupledSystem> cached_;
  mutable RealVector cached_x_;
};

void copy_history(const PGResult& pg, OCPResult& out) {
  out.J_history = pg.history.J;
  out.motion_history = pg.history.motion_term;
  out.pg_norm_history = pg.history.pg_norm;
  out.termination = pg.termination;
  out.iterations = pg.iterations;
}

}  // namespace

Eigen::Matrix3d CostConfig::weight_matrix(double H) {
  return Eigen::Vector3d(1.0, 1.0, H * H).asDiagonal();
}

double motion_term(const BodyVector& X, const Eigen::Matrix3d& C) {
  return 0.5 * X.dot(C.cast<Complex>() * X).real();
}

CostValue pressure_cost(const BodyVector& X, const ComplexVector& u, const CostConfig& cfg,
                        const AssembledOperators& ops) {
  CostValue c;
  c.motion_term = motion_term(X, cfg.C);
  c.J = c.motion_term + 0.5 * (cfg.alpha_u * quadratic_form(ops.E_c, u) + cfg.beta_u * quadratic_form(ops.A_c, u));
  return c;
}

CostValue passive_cost(const BodyVector& X, const RealVector& u, const RealVector& v, const CostConfig& cfg,
                       const AssembledOperators& ops) {
  CostValue c;
  c.motion_term = motion_term(X, cfg.C);
  c.J = c.motion_term + 0.5 * (cfg.alpha_u * quadratic_form(ops.E_c, u) + cfg.beta_u * quadratic_form(ops.A_c, u)) +
        0.5 * (cfg.alpha_v * quadratic_form(ops.E_c, v) + cfg.beta_v * quadratic_form(ops.A_c, v));
  return c;
}

RealVector pack_complex(const ComplexVector& u) {
  RealVector x(2 * u.size());
  x << u.real(), u.imag();
  return x;
}

ComplexVector unpack_complex(const RealVector& x) {
  const Eigen::Index l = x.size() / 2;
  ComplexVector u(l);
  for (Eigen::Index i = 0; i < l; ++i) u(i) = Complex(x(i), x(l + i));
  return u;
}

RealVector pack_passive(const RealVector& u, const RealVector& v) {
  RealVector x(u.size() + v.size());
  x << u, v;
  return x;
}

std::unique_ptr<ReducedProblem> make_pressure_problem(const AssembledOperators& ops, const RigidBody2D& body,
                                                      const CostConfig& cfg) {
  return std::make_unique<PressureProblem>(ops, body, cfg);
}

std::unique_ptr<ReducedProblem> make_passive_problem(ControlMode mode, const AssembledOperators& ops,
                                                     const ControlTensors& tensors, const RigidBody2D& body,
                                                     const CostConfig& cfg, double eps) {
  return std::make_unique<PassiveProblem>(mode, ops, tensors, body, cfg, eps);
}

OCPResult solve_lq_pressure(const AssembledOperators& ops, const RigidBody2D& body, const CostConfig& cfg) {
  const int n = ops.potential_size() + 3;
  const int l = ops.control_size();
  const CoupledSystem system = CoupledSystem::pressure(ops, body);
  const ComplexSparse& S = system.matrix();
  const ComplexSparse B = control_operator(ops);
  const ComplexSparse SH = S.adjoint();
  const ComplexSparse BH = B.adjoint();
  const RealSparse R = regularization(ops, cfg.alpha_u, cfg.beta_u);

  Triplets t;
  auto put = [&t](const ComplexSparse& m, int r0, int c0) {
    for (int c = 0; c < m.outerSize(); ++c) {
      for (ComplexSparse::InnerIterator it(m, c); it; ++it) {
        t.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()), it.value());
      }
    }
  };
  put(S, 0, 0);
  put(B, 0, 2 * n);
  if (ops.has_body) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (cfg.C(r, c) != 0.0) t.emplace_back(n + n - 3 + r, n - 3 + c, cfg.C(r, c));
      }
    }
  }
  put(SH, n, n);
  put(BH, 2 * n, n);
  put(R.cast<Complex>(), 2 * n, 2 * n);
  ComplexSparse kkt(2 * n + l, 2 * n + l);
  kkt.setFromTriplets(t.begin(), t.end());
  kkt.makeCompressed();

  ComplexVector rhs = ComplexVector::Zero(2 * n + l);
  rhs.head(n) = system.pressure_rhs(ComplexVector::Zero(l));

  ComplexVector z;
  try {
    const SparseSolver solver(kkt);
    z = solver.solve(rhs);
  } catch (const SingularSystem& e) {
    throw SingularKKT(std::string("KKT system: ") + e.what());
  }
  const double bnorm = rhs.norm();
  OCPResult out;
  out.mode = ControlMode::Pressure;
  out.kkt_residual = bnorm > 0.0 ? (rhs - kkt * z).norm() / bnorm : (kkt * z).norm();
  if (!(out.kkt_residual < 1e-8)) {
    throw SingularKKT("KKT residual " + std::to_string(out.kkt_residual) + " exceeds 1e-8");
  }
  out.u_active = z.tail(l);
  const BodyVector X_kkt = z.segment<3>(n - 3);
  const CostValue kkt_cost = pressure_cost(X_kkt, out.u_active, cfg, ops);

  out.state = system.solve(system.pressure_rhs(out.u_active));
  out.cost = pressure_cost(out.state.X, out.u_active, cfg, ops);
  out.cost_mismatch = out.cost.J > 0.0 ? std::abs(out.cost.J - kkt_cost.J) / out.cost.J : std::abs(kkt_cost.J);
  out.J_history = {out.cost.J};
  out.motion_history = {out.cost.motion_term};
  out.pg_norm_history = {0.0};
  out.termination = Termination::Converged;
  return out;
}

OCPResult solve_pressure_gradient(const AssembledOperators& ops, const RigidBody2D& body, const CostConfig& cfg,
                                  const OptimizerSettings& settings, const ComplexVector& u0) {
  const auto problem = make_pressure_problem(ops, body, cfg);
  const PGResult pg = minimize_projected(
      [&](const RealVector& x, bool g) { return problem->evaluate(x, g); }, pack_complex(u0), problem->bounds(),
      [&](const RealVector& g) { return problem->precondition(g); }, settings);
  OCPResult out;
  out.mode = ControlMode::Pressure;
  out.u_active = unpack_complex(pg.x);
  out.state = problem->state(pg.x);
  out.cost = pressure_cost(out.state.X, out.u_active, cfg, ops);
  copy_history(pg, out);
  return out;
}

OCPResult solve_passive(ControlMode mode, const AssembledOperators& ops, const ControlTensors& tensors,
                        const RigidBody2D& body, const CostConfig& cfg, const OptimizerSettings& settings,
                        const RealVector& u0, const RealVector& v0) {
  if (u0.size() != ops.control_size() || v0.size() != ops.control_size()) {
    throw InadmissibleInitialControl("initial controls have the wrong length");
  }
  try {
    check_admissible(u0, v0, settings.epsilon);
  } catch (const InadmissibleControl& e) {
    throw InadmissibleInitialControl(std::string("initial control: ") + e.what());
  }
  const auto problem = make_passive_problem(mode, ops, tensors, body, cfg, settings.epsilon);
  const PGResult pg = minimize_projected(
      [&](const RealVector& x, bool g) { return problem->evaluate(x, g); }, pack_passive(u0, v0),
      problem->bounds(), [&](const RealVector& g) { return problem->precondition(g); }, settings);
  const int l = ops.control_size();
  OCPResult out;
  out.mode = mode;
  out.u = pg.x.head(l);
  out.v = pg.x.tail(l);
  out.state = problem->state(pg.x);
  out.cost = passive_cost(out.state.X, out.u, out.v, cfg, ops);
  copy_history(pg, out);
  return out;
}

}  // namespace wavecontrol
