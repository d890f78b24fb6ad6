#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

namespace pivot {

using Scalar = double;

template <typename T>
using Vec3T = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Mat3T = Eigen::Matrix<T, 3, 3>;
template <typename T>
using Vec6T = Eigen::Matrix<T, 6, 1>;
template <typename T>
using Mat6T = Eigen::Matrix<T, 6, 6>;

using Vec3 = Vec3T<Scalar>;
using Mat3 = Mat3T<Scalar>;
using Vec6 = Vec6T<Scalar>;
using Mat6 = Mat6T<Scalar>;
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace pivot
