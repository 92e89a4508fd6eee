#include "wavecontrol/sparse_lu.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/SparseLU>

#include "wavecontrol/error.hpp"

namespace wavecontrol {

struct SparseSolver::Factor {
  Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu;
  ComplexSparse scaled;
};

namespace {

// Ruiz iteration: alternately divide rows and columns by the square root of their
// largest magnitude until both are within a few percent of one.
void equilibrate(const ComplexSparse& m, RealVector& row, RealVector& col) {
  row = RealVector::Ones(m.rows());
  col = RealVector::Ones(m.cols());
  for (int sweep = 0; sweep < 20; ++sweep) {
    RealVector rmax = RealVector::Zero(m.rows());
    RealVector cmax = RealVector::Zero(m.cols());
    for (int c = 0; c < m.outerSize(); ++c) {
      for (ComplexSparse::InnerIterator it(m, c); it; ++it) {
        const double a = std::abs(it.value()) * row(it.row()) * col(c);
        rmax(it.row()) = std::max(rmax(it.row()), a);
        cmax(c) = std::max(cmax(c), a);
      }
    }
    double spread = 0.0;
    for (Eigen::Index i = 0; i < rmax.size(); ++i) {
      if (rmax(i) > 0.0) {
        row(i) /= std::sqrt(rmax(i));
        spread = std::max(spread, std::abs(1.0 - rmax(i)));
      }
    }
    for (Eigen::Index i = 0; i < cmax.size(); ++i) {
      if (cmax(i) > 0.0) {
        col(i) /= std::sqrt(cmax(i));
        spread = std::max(spread, std::abs(1.0 - cmax(i)));
      }
    }
    if (spread < 0.05) break;
  }
}

}  // namespace

SparseSolver::SparseSolver(ComplexSparse matrix) : matrix_(std::move(matrix)), factor_(std::make_unique<Factor>()) {
  if (matrix_.rows() != matrix_.cols()) throw SingularSystem("system matrix is not square");
  matrix_.makeCompressed();
  equilibrate(matrix_, row_scale_, col_scale_);
  factor_->scaled = row_scale_.cast<Complex>().asDiagonal() * matrix_ * col_scale_.cast<Complex>().asDiagonal();
  factor_->scaled.makeCompressed();
  factor_->lu.analyzePattern(factor_->scaled);
  factor_->lu.factorize(factor_->scaled);
  if (factor_->lu.info() != Eigen::Success) {
    throw SingularSystem("sparse LU factorization failed: " + factor_->lu.lastErrorMessage());
  }
}

SparseSolver::~SparseSolver() = default;
SparseSolver::SparseSolver(SparseSolver&&) noexcept = default;
SparseSolver& SparseSolver::operator=(SparseSolver&&) noexcept = default;

ComplexVector SparseSolver::refine(const ComplexVector& rhs, bool adjoint) const {
  if (rhs.size() != matrix_.rows()) throw SingularSystem("right-hand side has the wrong length");
  const auto r = row_scale_.cast<Complex>().asDiagonal();
  const auto c = col_scale_.cast<Complex>().asDiagonal();
  // A x = b  <=>  (R A C) (C^-1 x) = R b;  A^H y = b  <=>  (R A C)^H (R^-1 y) = C b.
  auto inner = [&](const ComplexVector& b) -> ComplexVector {
    if (adjoint) return r * ComplexVector(factor_->lu.adjoint().solve(ComplexVector(c * b)));
    return c * ComplexVector(factor_->lu.solve(ComplexVector(r * b)));
  };
  auto apply = [&](const ComplexVector& x) -> ComplexVector {
    if (adjoint) return matrix_.adjoint() * x;
    return matrix_ * x;
  };
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    last_residual_ = 0.0;
    return ComplexVector::Zero(rhs.size());
  }
  ComplexVector x = inner(rhs);
  ComplexVector res = rhs - apply(x);
  double rel = res.norm() / bnorm;
  for (int step = 0; step < 3 && rel > 1e-14; ++step) {
    const ComplexVector dx = inner(res);
    const ComplexVector trial = x + dx;
    const ComplexVector trial_res = rhs - apply(trial);
    const double trial_rel = trial_res.norm() / bnorm;
    if (!(trial_rel < rel)) break;
    x = trial;
    rel = trial_rel;
  }
  last_residual_ = rel;
  if (!std::isfinite(rel) || rel > kResidualTolerance) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "linear solve residual %.3e exceeds tolerance", rel);
    throw SingularSystem(buf);
  }
  return x;
}

ComplexVector SparseSolver::solve(const ComplexVector& rhs) const { return refine(rhs, false); }

ComplexVector SparseSolver::solve_adjoint(const ComplexVector& rhs) const { return refine(rhs, true); }

}  // namespace wavecontrol
