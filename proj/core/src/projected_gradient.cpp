#include "wavecontrol/projected_gradient.hpp"

#include <algorithm>
#include <cmath>

#include "wavecontrol/error.hpp"

namespace wavecontrol {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIter: return "max_iter";
    case Termination::LineSearchFailure: return "line_search_failure";
  }
  return "unknown";
}

RealVector BoxBounds::project(const RealVector& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

PGResult minimize_projected(const Evaluator& evaluate, RealVector x0, const BoxBounds& bounds,
                            const Preconditioner& precondition, const OptimizerSettings& settings) {
  if (bounds.lower.size() != x0.size() || bounds.upper.size() != x0.size()) {
    throw InputError("bounds do not match the control dimension");
  }
  PGResult result;
  result.x = std::move(x0);
  Evaluation current = evaluate(result.x, true);

  auto pg_norm = [&](const RealVector& x, const RealVector& direction) {
    return (bounds.project(x + direction) - x).norm();
  };

  RealVector direction = -precondition(current.gradient);
  double norm0 = pg_norm(result.x, direction);
  result.history.J.push_back(current.J);
  result.history.motion_term.push_back(current.motion_term);
  result.history.pg_norm.push_back(norm0);
  result.termination = Termination::MaxIter;
  if (norm0 <= settings.tol_abs) {
    result.termination = Termination::Converged;
    result.last = std::move(current);
    return result;
  }

  double step = 1.0;
  for (int iter = 0; iter < settings.max_iter; ++iter) {
    auto trial_point = [&](double t) { return bounds.project(result.x + t * direction); };
    auto armijo_ok = [&](const RealVector& xt, double Jt) {
      const double decrease = current.gradient.dot(xt - result.x);
      return Jt < current.J && Jt <= current.J + settings.armijo * decrease;
    };

    RealVector accepted_x;
    Evaluation accepted;
    bool found = false;
    double t = step;
    for (int bt = 0; bt <= settings.max_backtracks; ++bt) {
      RealVector xt = trial_point(t);
      Evaluation et = evaluate(xt, false);
      if (std::isfinite(et.J) && armijo_ok(xt, et.J)) {
        accepted_x = std::move(xt);
        accepted = std::move(et);
        found = true;
        if (bt == 0 && iter == 0) {
          // first step: expand while the sufficient-decrease test keeps improving J
          for (int grow = 0; grow < settings.max_backtracks; ++grow) {
            const double t2 = 2.0 * t;
            RealVector x2 = trial_point(t2);
            Evaluation e2 = evaluate(x2, false);
            if (!(std::isfinite(e2.J) && armijo_ok(x2, e2.J) && e2.J < accepted.J)) break;
            t = t2;
            accepted_x = std::move(x2);
            accepted = std::move(e2);
          }
        }
        break;
      }
      t *= settings.backtrack;
    }
    if (!found) {
      result.termination = Termination::LineSearchFailure;
      break;
    }

    Evaluation next = evaluate(accepted_x, true);
    const RealVector s = accepted_x - result.x;
    const RealVector y = next.gradient - current.gradient;
    result.x = std::move(accepted_x);
    current = std::move(next);
    direction = -precondition(current.gradient);
    result.iterations = iter + 1;

    const double norm = pg_norm(result.x, direction);
    result.history.J.push_back(current.J);
    result.history.motion_term.push_back(current.motion_term);
    result.history.pg_norm.push_back(norm);
    if (norm < settings.tol_rel * norm0 + settings.tol_abs) {
      result.termination = Termination::Converged;
      break;
    }

    step = t;
    if (settings.barzilai_borwein) {
      // short Barzilai-Borwein step s^T y / y^T M y
      const double sy = s.dot(y);
      const double yMy = precondition(y).dot(y);
      if (sy > 0.0 && yMy > 0.0) step = sy / yMy;
    }
    if (!(step > 0.0) || !std::isfinite(step)) step = t;
  }
  result.last = std::move(current);
  return result;
}

}  // namespace wavecontrol
