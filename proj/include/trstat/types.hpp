#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace trstat {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

}  // namespace trstat
