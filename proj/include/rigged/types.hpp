#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace rigged {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

} // namespace rigged
