#include <algorithm>
#include <cmath>
#include <random>

#include "wavecontrol/error.hpp"
#include "wavecontrol/ocp.hpp"

namespace wavecontrol {

double GradientCheckReport::worst() const {
  double w = 0.0;
  for (double e : min_error) w = std::max(w, e);
  return min_error.empty() ? std::numeric_limits<double>::infinity() : w;
}

GradientCheckReport fd_gradient_check(const ReducedProblem& problem, const RealVector& point, int directions,
                                      std::uint64_t seed) {
  if (point.size() != problem.size()) throw InputError("gradient-check point has the wrong length");
  GradientCheckReport report;
  report.mode = problem.mode();
  const double scale = std::max(1.0, point.lpNorm<Eigen::Infinity>());
  for (double s = 1e-3; s > 0.5e-7; s *= 0.1) report.steps.push_back(s * scale);

  const BoxBounds box = problem.bounds();
  const double margin = 10.0 * report.steps.front();
  if (((point - box.lower).array() < margin).any() || ((box.upper - point).array() < margin).any()) {
    throw InadmissibleControl("gradient-check point is closer to the bounds than ten FD steps");
  }

  const RealVector gradient = problem.evaluate(point, true).gradient;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int d = 0; d < directions; ++d) {
    RealVector dir(point.size());
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = normal(rng);
    dir.normalize();
    const double exact = gradient.dot(dir);
    std::vector<double> errors;
    for (double h : report.steps) {
      const double jp = problem.evaluate(point + h * dir, false).J;
      const double jm = problem.evaluate(point - h * dir, false).J;
      const double fd = (jp - jm) / (2.0 * h);
      const double denom = std::max({std::abs(exact), std::abs(fd), 1e-300});
      errors.push_back(std::abs(fd - exact) / denom);
    }
    report.adjoint_derivative.push_back(exact);
    report.min_error.push_back(*std::min_element(errors.begin(), errors.end()));
    report.fd_error.push_back(std::move(errors));
  }
  return report;
}

}  // namespace wavecontrol
