#pragma once

#include <complex>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace wavecontrol {

using Complex = std::complex<double>;
inline constexpr Complex kJ{0.0, 1.0};

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealSparse = Eigen::SparseMatrix<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;
using BodyVector = Eigen::Vector3cd;  // surge, heave, roll

struct Point2 {
  double x = 0.0;
  double z = 0.0;
};

}  // namespace wavecontrol
