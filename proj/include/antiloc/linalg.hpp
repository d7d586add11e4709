#pragma once

#include <Eigen/Core>
#include <complex>

namespace antiloc {

using complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace antiloc
