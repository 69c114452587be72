// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace mmhybrid {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace mmhybrid
