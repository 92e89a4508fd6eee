#pragma once

#include <Eigen/Core>

#include "wavecontrol/types.hpp"

namespace wavecontrol {

inline constexpr double kWaterDensity = 1030.0;  // kg/m^3
inline constexpr double kGravity = 9.81;         // m/s^2

/// Positive real root k of omega^2 = g k tanh(k h0). Newton iteration from k = omega^2/g,
/// safeguarded by bisection on [1e-12, 10 omega^2/g + 10/h0]. Throws NonConvergence
/// after 200 iterations.
double solve_dispersion(double omega, double depth, double g = kGravity);

/// Relative residual |g k tanh(k h0) - omega^2| / omega^2.
double dispersion_residual(double k, double omega, double depth, double g = kGravity);

/// Monochromatic incident wave over a flat bed. Time convention e^{+j omega t};
/// direction = +1 propagates toward +x.
struct WaveEnvironment {
  double rho = kWaterDensity;
  double g = kGravity;
  double omega = 0.0;
  double depth = 0.0;
  double amplitude = 1.0;
  int direction = 1;
  double k = 0.0;  // derived

  static WaveEnvironment make(double omega, double depth, double amplitude = 1.0, int direction = 1,
                              double rho = kWaterDensity, double g = kGravity);
  static WaveEnvironment from_period(double period, double depth, double amplitude = 1.0, int direction = 1,
                                     double rho = kWaterDensity, double g = kGravity);
};

Complex incident_potential(const WaveEnvironment& env, double x, double z);
Eigen::Vector2cd incident_gradient(const WaveEnvironment& env, double x, double z);
Complex incident_normal_derivative(const WaveEnvironment& env, double x, double z, const Point2& normal);

/// First-order absorbing coefficient on a straight vertical truncation line: alpha = j k.
Complex radiation_coefficient(const WaveEnvironment& env);

/// Half-submerged circular body with three rigid degrees of freedom (surge, heave, roll),
/// quantities per unit length normal to the slice.
struct RigidBody2D {
  double density = 0.5 * kWaterDensity;  // rho_b
  double radius = 0.5;
  Point2 center;  // reference point x_G, at the circle centre on the waterline
  Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d stiffness = Eigen::Matrix3d::Zero();
};

/// Mass and hydrostatic stiffness of the half-submerged circle. Throws BuoyancyImbalance
/// unless rho_b pi r^2 equals rho pi r^2 / 2 to 1e-9 relative.
RigidBody2D body_matrices(double body_density, double radius, double rho = kWaterDensity, double g = kGravity,
                          Point2 center = {});

}  // namespace wavecontrol
