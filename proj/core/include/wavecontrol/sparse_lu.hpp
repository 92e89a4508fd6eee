#pragma once

#include <memory>

#include "wavecontrol/types.hpp"

namespace wavecontrol {

/// Complex sparse LU with row/column equilibration and iterative refinement.
/// One factorization serves both A x = b and A^H y = c.
class SparseSolver {
 public:
  explicit SparseSolver(ComplexSparse matrix);
  ~SparseSolver();
  SparseSolver(SparseSolver&&) noexcept;
  SparseSolver& operator=(SparseSolver&&) noexcept;

  /// Throws SingularSystem if the factorization fails or the relative residual
  /// stays above the tolerance after refinement.
  ComplexVector solve(const ComplexVector& rhs) const;
  ComplexVector solve_adjoint(const ComplexVector& rhs) const;

  /// Relative residual of the most recent solve.
  double last_residual() const { return last_residual_; }
  const ComplexSparse& matrix() const { return matrix_; }
  int size() const { return static_cast<int>(matrix_.rows()); }

  static constexpr double kResidualTolerance = 1e-10;

 private:
  struct Factor;
  ComplexVector refine(const ComplexVector& rhs, bool adjoint) const;

  ComplexSparse matrix_;
  RealVector row_scale_;
  RealVector col_scale_;
  std::unique_ptr<Factor> factor_;
  mutable double last_residual_ = 0.0;
};

}  // namespace wavecontrol
