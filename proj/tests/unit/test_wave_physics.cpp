#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_support.hpp"
#include "wavecontrol/error.hpp"
#include "wavecontrol/wave_physics.hpp"

using namespace wavecontrol;
using namespace wavecontrol::testing;

TEST(Dispersion, CaseStudyWavelength) {
  const double omega = 2.0 * std::numbers::pi / 1.2;
  const double k = solve_dispersion(omega, 2.5);
  EXPECT_NEAR(k, kWavenumberCase, 1e-12 * kWavenumberCase);
  const double lambda = 2.0 * std::numbers::pi / k;
  EXPECT_NEAR(lambda, kWavelengthCase, 1e-12);
  EXPECT_GE(lambda, 2.23);
  EXPECT_LE(lambda, 2.27);
  EXPECT_LT(dispersion_residual(k, omega, 2.5), 1e-12);
}

TEST(Dispersion, DeepWaterLimit) {
  const double k = solve_dispersion(10.0, 1000.0);
  EXPECT_NEAR(k, 100.0 / 9.81, 1e-9 * k);
  EXPECT_NEAR(k, kWavenumberDeep, 1e-12 * k);
}

TEST(Dispersion, ShallowWaterMatchesBisectionOracle) {
  const double k = solve_dispersion(0.5, 0.01);
  EXPECT_NEAR(k, kWavenumberShallow, 1e-14 * kWavenumberShallow * 10);
  const double shallow = 0.5 / std::sqrt(9.81 * 0.01);
  EXPECT_NEAR(k, shallow, 1e-3 * shallow);
}

TEST(Dispersion, MonotoneInOmega) {
  for (double h0 : {0.01, 1.0, 2.5, 100.0}) {
    double prev = 0.0;
    for (double w = 0.1; w < 20.0; w += 0.1) {
      const double k = solve_dispersion(w, h0);
      EXPECT_GT(k, prev);
      EXPECT_LT(dispersion_residual(k, w, h0), 1e-12);
      prev = k;
    }
  }
}

TEST(Dispersion, ExtremeInputs) {
  EXPECT_LT(dispersion_residual(solve_dispersion(1e-3, 1e-3), 1e-3, 1e-3), 1e-12);
  EXPECT_LT(dispersion_residual(solve_dispersion(50.0, 1e4), 50.0, 1e4), 1e-12);
  EXPECT_THROW(solve_dispersion(-1.0, 1.0), InputError);
  EXPECT_THROW(solve_dispersion(1.0, 0.0), InputError);
}

TEST(Incident, SurfaceElevationHasAmplitudeA) {
  const WaveEnvironment env = WaveEnvironment::from_period(1.2, 2.5, 0.7);
  for (double x : {-3.0, -0.3, 0.0, 1.7, 4.0}) {
    const Complex eta = -kJ * env.omega / env.g * incident_potential(env, x, 0.0);
    EXPECT_NEAR(std::abs(eta), 0.7, 1e-14);
  }
}

TEST(Incident, BottomNormalDerivativeVanishes) {
  const WaveEnvironment env = case_environment();
  for (double x : {-2.0, 0.1, 3.3}) {
    EXPECT_EQ(std::abs(incident_normal_derivative(env, x, -2.5, {0.0, -1.0})), 0.0);
  }
}

TEST(Incident, FreeSurfaceConditionHolds) {
  const WaveEnvironment env = case_environment();
  for (double x : {-1.0, 0.0, 0.77}) {
    const Complex phi = incident_potential(env, x, 0.0);
    const Complex phi_z = incident_normal_derivative(env, x, 0.0, {0.0, 1.0});
    EXPECT_LT(std::abs(phi_z - env.omega * env.omega / env.g * phi), 1e-12 * std::abs(phi_z));
  }
}

TEST(Incident, SatisfiesLaplace) {
  const WaveEnvironment env = case_environment();
  const double lambda = 2.0 * std::numbers::pi / env.k;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), uz(-2.4, -0.1);
  const double d = 1e-4;
  for (int i = 0; i < 50; ++i) {
    const double x = ux(rng), z = uz(rng);
    const Complex c = incident_potential(env, x, z);
    const Complex lap = (incident_potential(env, x + d, z) + incident_potential(env, x - d, z) +
                         incident_potential(env, x, z + d) + incident_potential(env, x, z - d) - 4.0 * c) /
                        (d * d);
    EXPECT_LT(std::abs(lap), 1e-5 * std::abs(c) / (lambda * lambda));
  }
}

TEST(Incident, GradientMatchesFiniteDifferences) {
  const WaveEnvironment env = case_environment();
  const double d = 1e-6;
  for (double z : {-2.0, -0.5, 0.0}) {
    const auto grad = incident_gradient(env, 0.3, z);
    const Complex fx = (incident_potential(env, 0.3 + d, z) - incident_potential(env, 0.3 - d, z)) / (2 * d);
    const Complex fz = (incident_potential(env, 0.3, z + d) - incident_potential(env, 0.3, z - d)) / (2 * d);
    EXPECT_LT(std::abs(grad(0) - fx), 1e-7 * std::abs(grad(0)) + 1e-9);
    EXPECT_LT(std::abs(grad(1) - fz), 1e-7 * std::abs(grad(0)) + 1e-9);
  }
}

TEST(Incident, PropagatesTowardDirection) {
  for (int dir : {1, -1}) {
    const WaveEnvironment env = WaveEnvironment::from_period(1.2, 2.5, 1.0, dir);
    const double quarter = 0.5 * std::numbers::pi / env.k;
    const Complex ratio = incident_potential(env, quarter, 0.0) / incident_potential(env, 0.0, 0.0);
    // e^{j(wt - k x)}: phase lags downstream
    EXPECT_NEAR(std::arg(ratio), -dir * std::numbers::pi / 2, 1e-12);
  }
}

TEST(Incident, StableForLargeDepth) {
  const WaveEnvironment env = WaveEnvironment::make(10.0, 1000.0);
  const Complex phi = incident_potential(env, 0.0, -1.0);
  EXPECT_TRUE(std::isfinite(phi.real()) && std::isfinite(phi.imag()));
  EXPECT_NEAR(std::abs(phi), env.g * env.amplitude / env.omega * std::exp(-env.k), 1e-12);
}

TEST(Radiation, CoefficientIsJk) {
  const WaveEnvironment env = case_environment();
  const Complex a = radiation_coefficient(env);
  EXPECT_EQ(a.real(), 0.0);
  EXPECT_NEAR(a.imag(), kWavenumberCase, 1e-12);
  EXPECT_NEAR(a.imag(), 2.795, 1e-3);
}

TEST(Radiation, DeepWaterScaling) {
  const Complex a1 = radiation_coefficient(WaveEnvironment::make(8.0, 1000.0));
  const Complex a2 = radiation_coefficient(WaveEnvironment::make(16.0, 1000.0));
  EXPECT_NEAR(std::abs(a2) / std::abs(a1), 4.0, 1e-12);
}

TEST(Body, HeaveStiffnessMatchesWaterplane) {
  const RigidBody2D b = body_matrices(515.0, 0.5);
  EXPECT_NEAR(b.stiffness(1, 1), kHeaveStiffness, 1e-9 * kHeaveStiffness);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(b.stiffness(0, i), 0.0);
    EXPECT_EQ(b.stiffness(i, 0), 0.0);
  }
  int nonzero = 0;
  for (int i = 0; i < 3; ++i) nonzero += std::abs(b.stiffness(i, i)) > 1e-9 ? 1 : 0;
  EXPECT_EQ(nonzero, 1);
}

TEST(Body, MassIsDiagonalAndPositive) {
  const RigidBody2D b = body_matrices(515.0, 0.5);
  const double m = 515.0 * std::numbers::pi * 0.25;
  EXPECT_NEAR(b.mass(0, 0), m, 1e-12 * m);
  EXPECT_NEAR(b.mass(1, 1), m, 1e-12 * m);
  EXPECT_NEAR(b.mass(2, 2), 515.0 * std::numbers::pi * std::pow(0.5, 4) / 2.0, 1e-12);
  EXPECT_TRUE(b.mass.isDiagonal());
  EXPECT_TRUE(b.mass.isApprox(b.mass.transpose(), 0.0));
  EXPECT_TRUE(b.stiffness.isApprox(b.stiffness.transpose(), 0.0));
  EXPECT_GT(b.mass.diagonal().minCoeff(), 0.0);
}

TEST(Body, BuoyancyImbalanceIsRejected) {
  EXPECT_THROW(body_matrices(600.0, 0.5), BuoyancyImbalance);
  EXPECT_NO_THROW(body_matrices(515.0, 0.5));
}
