#include "wavecontrol/wave_physics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wavecontrol/error.hpp"

namespace wavecontrol {

double dispersion_residual(double k, double omega, double depth, double g) {
  return std::abs(g * k * std::tanh(k * depth) - omega * omega) / (omega * omega);
}

double solve_dispersion(double omega, double depth, double g) {
  if (!(omega > 0.0 && depth > 0.0 && g > 0.0)) {
    throw InputError("dispersion relation requires positive omega, depth and g");
  }
  const double target = omega * omega;
  auto f = [&](double k) { return g * k * std::tanh(k * depth) - target; };

  double lo = 1e-12;
  double hi = 10.0 * target / g + 10.0 / depth;
  double k = target / g;
  if (!(k > lo && k < hi)) k = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double fk = f(k);
    if (std::abs(fk) <= 1e-15 * target) return k;
    if (fk > 0.0) {
      hi = k;
    } else {
      lo = k;
    }
    const double sech = 1.0 / std::cosh(k * depth);
    const double slope = g * std::tanh(k * depth) + g * k * depth * sech * sech;
    double next = k - fk / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - k) <= 4.0 * std::numeric_limits<double>::epsilon() * k) {
      if (dispersion_residual(next, omega, depth, g) < 1e-12) return next;
    }
    k = next;
  }
  throw NonConvergence("dispersion relation did not converge in 200 iterations");
}

WaveEnvironment WaveEnvironment::make(double omega, double depth, double amplitude, int direction, double rho,
                                      double g) {
  if (!(rho > 0.0 && g > 0.0 && omega > 0.0 && depth > 0.0 && amplitude >= 0.0)) {
    throw InputError("wave environment requires positive rho, g, omega, depth and non-negative amplitude");
  }
  if (direction != 1 && direction != -1) throw InputError("wave direction must be +1 or -1");
  WaveEnvironment env;
  env.rho = rho;
  env.g = g;
  env.omega = omega;
  env.depth = depth;
  env.amplitude = amplitude;
  env.direction = direction;
  env.k = solve_dispersion(omega, depth, g);
  return env;
}

WaveEnvironment WaveEnvironment::from_period(double period, double depth, double amplitude, int direction, double rho,
                                             double g) {
  if (!(period > 0.0)) throw InputError("wave period must be positive");
  return make(2.0 * std::numbers::pi / period, depth, amplitude, direction, rho, g);
}

namespace {

// cosh(k(z+h))/cosh(kh) and sinh(k(z+h))/cosh(kh) without overflow for large kh.
struct DepthProfile {
  double c;
  double s;
};

DepthProfile depth_profile(double k, double z, double depth) {
  const double decay = std::exp(k * z);
  const double bottom = std::exp(-2.0 * k * (z + depth));
  const double norm = 1.0 + std::exp(-2.0 * k * depth);
  return {decay * (1.0 + bottom) / norm, decay * (1.0 - bottom) / norm};
}

Complex phase(const WaveEnvironment& env, double x) {
  return std::exp(Complex(0.0, -env.direction * env.k * x));
}

}  // namespace

Complex incident_potential(const WaveEnvironment& env, double x, double z) {
  const auto profile = depth_profile(env.k, z, env.depth);
  return kJ * (env.g * env.amplitude / env.omega) * profile.c * phase(env, x);
}

Eigen::Vector2cd incident_gradient(const WaveEnvironment& env, double x, double z) {
  const auto profile = depth_profile(env.k, z, env.depth);
  const Complex scale = kJ * (env.g * env.amplitude / env.omega) * phase(env, x);
  Eigen::Vector2cd grad;
  grad(0) = Complex(0.0, -env.direction * env.k) * scale * profile.c;
  grad(1) = env.k * scale * profile.s;
  return grad;
}

Complex incident_normal_derivative(const WaveEnvironment& env, double x, double z, const Point2& normal) {
  const auto grad = incident_gradient(env, x, z);
  return grad(0) * normal.x + grad(1) * normal.z;
}

Complex radiation_coefficient(const WaveEnvironment& env) { return Complex(0.0, env.k); }

RigidBody2D body_matrices(double body_density, double radius, double rho, double g, Point2 center) {
  if (!(radius > 0.0 && body_density > 0.0)) throw InputError("body radius and density must be positive");
  const double pi = std::numbers::pi;
  const double body_mass = body_density * pi * radius * radius;
  const double displaced = rho * pi * radius * radius / 2.0;
  if (std::abs(body_mass - displaced) > 1e-9 * displaced) {
    throw BuoyancyImbalance("body mass per unit length does not balance the displaced water of a half-submerged circle");
  }
  RigidBody2D body;
  body.density = body_density;
  body.radius = radius;
  body.center = center;

  const double r3 = radius * radius * radius;
  const double polar_moment = body_density * pi * r3 * radius / 2.0;
  body.mass.diagonal() << body_mass, body_mass, polar_moment;

  // Waterline [-r, r] about x_G and the submerged half disk below it.
  const double waterline = 2.0 * radius;
  const double waterline_first_moment = 0.0;
  const double waterline_second_moment = 2.0 * r3 / 3.0;
  const double displaced_vertical_moment = -2.0 * r3 / 3.0;
  body.stiffness(1, 1) = rho * g * waterline;
  body.stiffness(1, 2) = body.stiffness(2, 1) = rho * g * waterline_first_moment;
  body.stiffness(2, 2) = rho * g * (waterline_second_moment + displaced_vertical_moment);
  return body;
}

}  // namespace wavecontrol
