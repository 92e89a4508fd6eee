#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "wavecontrol/types.hpp"

namespace wavecontrol {

struct OptimizerSettings {
  double tol_rel = 1e-6;
  double tol_abs = 1e-12;
  int max_iter = 500;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  double epsilon = 1e-6;  // admissible-set margin for passive controls
  bool barzilai_borwein = true;
};

enum class Termination { Converged, MaxIter, LineSearchFailure };

std::string_view to_string(Termination t);

struct Evaluation {
  double J = 0.0;
  double motion_term = 0.0;
  RealVector gradient;  // empty when not requested
};

/// Box [lower, upper]; infinite entries are allowed.
struct BoxBounds {
  RealVector lower;
  RealVector upper;

  RealVector project(const RealVector& x) const;
};

struct PGHistory {
  std::vector<double> J;
  std::vector<double> motion_term;
  std::vector<double> pg_norm;
};

struct PGResult {
  RealVector x;
  Evaluation last;
  PGHistory history;
  Termination termination = Termination::MaxIter;
  int iterations = 0;
};

using Evaluator = std::function<Evaluation(const RealVector& x, bool with_gradient)>;
using Preconditioner = std::function<RealVector(const RealVector& gradient)>;

/// Projected (preconditioned) gradient descent with Armijo backtracking and
/// Barzilai-Borwein initial steps. Every accepted step strictly decreases J. The
/// preconditioner must be diagonal and positive wherever a bound can become active.
/// Stops when |P(x - M g) - x| < tol_rel * initial + tol_abs or after max_iter steps.
PGResult minimize_projected(const Evaluator& evaluate, RealVector x0, const BoxBounds& bounds,
                            const Preconditioner& precondition, const OptimizerSettings& settings);

}  // namespace wavecontrol
