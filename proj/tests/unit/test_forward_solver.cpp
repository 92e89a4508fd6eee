#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "wavecontrol/error.hpp"
#include "wavecontrol/forward_solver.hpp"

using namespace wavecontrol;
using namespace wavecontrol::testing;

namespace {

struct Fixture {
  Mesh2D mesh;
  AssembledOperators ops;
  ControlTensors membrane;
  ControlTensors plate;
  RigidBody2D body;
};

Fixture make_fixture(double amplitude, double h = 0.125) {
  Fixture f;
  f.mesh = build_slice_mesh(coarse_slice(h));
  f.ops = assemble(f.mesh, case_environment(amplitude));
  f.membrane = assemble_membrane_tensors(f.ops);
  f.plate = assemble_plate_tensor(f.ops);
  f.body = body_matrices(0.5 * kWaterDensity, 0.5);
  return f;
}

const Fixture& unit_fixture() {
  static const Fixture f = make_fixture(1.0);
  return f;
}

RealVector constant(int n, double v) { return RealVector::Constant(n, v); }

double surface_l2(const AssembledOperators& ops, const ComplexVector& phi) { return boundary_norm(ops.C_c, phi); }

}  // namespace

TEST(ForwardSolver, PressureResidualIsSmall) {
  const auto& f = unit_fixture();
  const StateSolution s = solve_state_pressure(f.ops, f.body, ComplexVector::Zero(f.ops.control_size()));
  EXPECT_LT(s.residual_norm, 1e-10);
  EXPECT_GT(std::abs(s.X(1)), 0.0);
  EXPECT_TRUE(std::isfinite(std::abs(s.X(1))));
}

TEST(ForwardSolver, ZeroAmplitudeGivesZeroState) {
  const Fixture f = make_fixture(0.0, 0.25);
  const int l = f.ops.control_size();
  const StateSolution p = solve_state_pressure(f.ops, f.body, ComplexVector::Zero(l));
  EXPECT_EQ(p.phi.norm(), 0.0);
  EXPECT_EQ(p.X.norm(), 0.0);
  const StateSolution m = solve_state_membrane(f.ops, f.membrane, f.body, constant(l, 1.0), constant(l, 0.5));
  EXPECT_EQ(m.phi.norm() + m.X.norm() + m.eta.norm(), 0.0);
  const StateSolution q = solve_state_plate(f.ops, f.plate, f.body, constant(l, 1.0), constant(l, 0.5));
  EXPECT_EQ(q.phi.norm() + q.X.norm() + q.eta.norm(), 0.0);
}

TEST(ForwardSolver, LinearInAmplitude) {
  const Fixture f1 = make_fixture(1.0, 0.25);
  const Fixture f2 = make_fixture(2.0, 0.25);
  const int l = f1.ops.control_size();
  const ComplexVector zero = ComplexVector::Zero(l);
  const StateSolution a = solve_state_pressure(f1.ops, f1.body, zero);
  const StateSolution b = solve_state_pressure(f2.ops, f2.body, zero);
  EXPECT_LT((b.phi - 2.0 * a.phi).norm(), 1e-10 * b.phi.norm());
  EXPECT_LT((b.X - 2.0 * a.X).norm(), 1e-10 * b.X.norm());
  const RealVector u = constant(l, 1.0), v = constant(l, 0.5);
  const StateSolution ma = solve_state_membrane(f1.ops, f1.membrane, f1.body, u, v);
  const StateSolution mb = solve_state_membrane(f2.ops, f2.membrane, f2.body, u, v);
  EXPECT_LT((mb.X - 2.0 * ma.X).norm(), 1e-10 * mb.X.norm());
  EXPECT_LT((mb.eta - 2.0 * ma.eta).norm(), 1e-10 * mb.eta.norm());
  const StateSolution pa = solve_state_plate(f1.ops, f1.plate, f1.body, u, v);
  const StateSolution pb = solve_state_plate(f2.ops, f2.plate, f2.body, u, v);
  EXPECT_LT((pb.X - 2.0 * pa.X).norm(), 1e-10 * pb.X.norm());
  EXPECT_LT((pb.eta - 2.0 * pa.eta).norm(), 1e-10 * pb.eta.norm());
}

TEST(ForwardSolver, AdjointOfZeroMotionIsZero) {
  const auto& f = unit_fixture();
  const int l = f.ops.control_size();
  const Eigen::Matrix3d C = CostConfig::weight_matrix(1.0);
  const AdjointSolution a = solve_adjoint_pressure(f.ops, f.body, BodyVector::Zero(), C);
  EXPECT_EQ(a.lambda.norm() + a.Y.norm(), 0.0);
  const AdjointSolution m = solve_adjoint_passive(ControlMode::Membrane, f.ops, f.membrane, f.body, constant(l, 1.0),
                                                  constant(l, 0.5), BodyVector::Zero(), C);
  EXPECT_EQ(m.lambda.norm() + m.Y.norm() + m.mu.norm(), 0.0);
}

TEST(ForwardSolver, AdjointSolvesHermitianTranspose) {
  const auto& f = unit_fixture();
  const int l = f.ops.control_size();
  const Eigen::Matrix3d C = CostConfig::weight_matrix(1.0);
  const BodyVector X(Complex(0.1, 0.2), Complex(-0.3, 0.05), Complex(0.01, -0.02));
  for (int mode = 0; mode < 3; ++mode) {
    const CoupledSystem sys =
        mode == 0 ? CoupledSystem::pressure(f.ops, f.body)
                  : CoupledSystem::passive(mode == 1 ? ControlMode::Membrane : ControlMode::Plate, f.ops,
                                           mode == 1 ? f.membrane : f.plate, f.body, constant(l, 1.0), constant(l, 0.5));
    const AdjointSolution a = sys.solve_adjoint(X, C);
    ComplexVector w(sys.matrix().rows());
    w << a.lambda, a.Y, a.mu;
    ComplexVector rhs = ComplexVector::Zero(w.size());
    rhs.segment<3>(sys.potential_size()) = -(C.cast<Complex>() * X);
    const ComplexSparse SH = sys.matrix().adjoint();
    EXPECT_LT((SH * w - rhs).norm(), 1e-10 * rhs.norm());
    // duality: <w, S x> = <S^H w, x> for a random x
    std::mt19937_64 rng(mode);
    std::normal_distribution<double> nd;
    ComplexVector x(w.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = Complex(nd(rng), nd(rng));
    const Complex lhs = w.dot(sys.matrix() * x);
    const Complex rhs_dot = (SH * w).dot(x);
    EXPECT_LT(std::abs(lhs - rhs_dot), 1e-10 * std::abs(lhs));
  }
}

TEST(ForwardSolver, AdjointUsesConjugateRadiation) {
  const auto& f = unit_fixture();
  const CoupledSystem sys = CoupledSystem::pressure(f.ops, f.body);
  const ComplexSparse SH = sys.matrix().adjoint();
  // on a truncation DOF the adjoint diagonal carries conj(alpha) C_e
  for (const auto& seg : f.ops.boundary) {
    if (seg.tag != BoundaryTag::Truncation) continue;
    const int i = seg.dofs[1];
    const double ce = f.ops.C_e.coeff(i, i);
    EXPECT_NEAR(SH.coeff(i, i).imag(), -f.ops.alpha.imag() * ce, 1e-12);
    EXPECT_NEAR(sys.matrix().coeff(i, i).imag(), f.ops.alpha.imag() * ce, 1e-12);
    break;
  }
}

TEST(ForwardSolver, InadmissibleControlsAreRejected) {
  const auto& f = unit_fixture();
  const int l = f.ops.control_size();
  EXPECT_THROW(solve_state_membrane(f.ops, f.membrane, f.body, constant(l, 0.0), constant(l, 0.5)),
               InadmissibleControl);
  EXPECT_THROW(solve_state_membrane(f.ops, f.membrane, f.body, constant(l, 1.0), constant(l, 1.0)),
               InadmissibleControl);
  EXPECT_THROW(solve_state_plate(f.ops, f.plate, f.body, constant(l, 1.0), constant(l, 0.0)), InadmissibleControl);
}

TEST(ForwardSolver, LimpMembraneMatchesFreeSurface) {
  const auto& f = unit_fixture();
  const int l = f.ops.control_size();
  const double eps = 1e-6;
  const StateSolution free = solve_state_pressure(f.ops, f.body, ComplexVector::Zero(l));
  const StateSolution limp = solve_state_membrane(f.ops, f.membrane, f.body, constant(l, eps), constant(l, 1.0 - eps));
  EXPECT_LT(surface_l2(f.ops, limp.phi - free.phi), 1e-5 * surface_l2(f.ops, free.phi));
  EXPECT_LT((limp.X - free.X).norm(), 1e-5 * free.X.norm());
}

TEST(ForwardSolver, LimpPlateApproachesFreeSurfaceUnderRefinement) {
  const double eps = 1e-6;
  double prev = 1e300;
  for (double h : {0.25, 0.125, 0.0625}) {
    const Fixture f = make_fixture(1.0, h);
    const int l = f.ops.control_size();
    const StateSolution free = solve_state_pressure(f.ops, f.body, ComplexVector::Zero(l));
    const StateSolution limp = solve_state_plate(f.ops, f.plate, f.body, constant(l, eps), constant(l, 1.0 - eps));
    const double diff = surface_l2(f.ops, limp.phi - free.phi) / surface_l2(f.ops, free.phi);
    EXPECT_LT(diff, prev);
    prev = diff;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(ForwardSolver, StiffPlateCurvatureEnergyDecreases) {
  const auto& f = unit_fixture();
  const int l = f.ops.control_size();
  const RealSparse L1 = f.plate.contract_stiffness(constant(l, 1.0));
  double prev = 1e300;
  for (double B = 1e-2; B <= 1e3; B *= 10.0) {
    const StateSolution s = solve_state_plate(f.ops, f.plate, f.body, constant(l, B), constant(l, 0.5));
    const double energy = s.eta.dot(L1.cast<Complex>() * s.eta).real();
    EXPECT_LT(energy, prev) << "B = " << B;
    prev = energy;
  }
}

TEST(ForwardSolver, LoadedChannelDispersion) {
  const WaveFit m = channel_wavenumber(ControlMode::Membrane, 200.0, 0.3, 0.1);
  EXPECT_NEAR(m.kappa, kMembraneKappa, 0.01 * kMembraneKappa);
  const WaveFit p = channel_wavenumber(ControlMode::Plate, 50.0, 0.3, 0.1);
  EXPECT_NEAR(p.kappa, kPlateKappa, 0.01 * kPlateKappa);
  // with a limp, massless cover the free-surface wavenumber comes back
  const WaveFit free = channel_wavenumber(ControlMode::Membrane, 1e-6, 1.0 - 1e-6, 0.1);
  EXPECT_NEAR(free.kappa, kFreeKappa, 0.01 * kFreeKappa);
}

TEST(ForwardSolver, NoObstacleConsistency) {
  const double lambda = kWavelengthCase;
  double prev = 1e300;
  for (double h : {lambda / 10.0, lambda / 20.0}) {
    SliceGeometryConfig g = coarse_slice(h);
    g.with_body = false;
    const AssembledOperators ops = assemble(build_slice_mesh(g), case_environment());
    const NoObstacleReport r = no_obstacle_consistency(ops);
    EXPECT_LT(r.ratio, prev);
    prev = r.ratio;
  }
  EXPECT_LT(prev, 5e-2);
}

TEST(ForwardSolver, NoObstacleScatteredFieldIsZero) {
  SliceGeometryConfig g = coarse_slice(0.25);
  g.with_body = false;
  const AssembledOperators ops = assemble(build_slice_mesh(g), case_environment());
  EXPECT_FALSE(ops.has_body);
  const StateSolution s = solve_state_pressure(ops, body_matrices(0.5 * kWaterDensity, 0.5), ComplexVector::Zero(ops.control_size()));
  EXPECT_EQ(s.phi.norm(), 0.0);
  EXPECT_EQ(s.X.norm(), 0.0);
}

TEST(ForwardSolver, HeaveConvergesUnderRefinement) {
  std::vector<Complex> heave;
  for (double h : {0.2, 0.1, 0.05}) {
    const AssembledOperators ops = assemble(build_slice_mesh(coarse_slice(h)), case_environment());
    heave.push_back(solve_state_pressure(ops, body_matrices(0.5 * kWaterDensity, 0.5), ComplexVector::Zero(ops.control_size())).X(1));
  }
  EXPECT_LT(std::abs(heave[2] - heave[1]), std::abs(heave[1] - heave[0]));
  EXPECT_LT(std::abs(heave[2] - heave[1]), 1e-2 * std::abs(heave[2]));
}

TEST(ForwardSolver, FieldDumps) {
  const auto& f = unit_fixture();
  const int l = f.ops.control_size();
  const StateSolution s = solve_state_membrane(f.ops, f.membrane, f.body, constant(l, 1.0), constant(l, 0.5));
  std::ostringstream field, trace;
  write_field(field, f.ops, s.phi);
  write_trace(trace, f.membrane, s.eta);
  std::istringstream fin(field.str()), tin(trace.str());
  std::string line;
  int rows = 0;
  std::getline(fin, line);
  EXPECT_EQ(line, "x,z,re,im");
  while (std::getline(fin, line)) ++rows;
  EXPECT_EQ(rows, f.ops.potential_size());
  rows = 0;
  std::getline(tin, line);
  EXPECT_EQ(line, "x,re,im");
  while (std::getline(tin, line)) ++rows;
  EXPECT_EQ(rows, static_cast<int>(f.membrane.node_x.size()));
}
