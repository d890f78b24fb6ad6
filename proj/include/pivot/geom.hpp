#pragma once

#include <cmath>

#include "pivot/errors.hpp"
#include "pivot/types.hpp"

namespace pivot {

/// Pitch band (rad) excluded around +-pi/2 when building the Euler-rate map.
inline constexpr Scalar kDefaultSingularityMargin = 0.05;

/// Skew-symmetric matrix of v, so that skew(v) * w == v x w.
template <typename Derived>
Mat3T<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using T = typename Derived::Scalar;
  Mat3T<T> s;
  s << T(0), -v[2], v[1],
       v[2], T(0), -v[0],
      -v[1], v[0], T(0);
  return s;
}

/**
 * Orientation as roll/pitch/yaw.
 *
 * Convention used throughout: the body-to-world rotation is
 * R = Rz(psi) * Ry(theta) * Rx(phi), i.e. roll about body x, then pitch
 * about y, then yaw about z (fixed-axis order). The stacked angle vector
 * is ordered (phi, theta, psi) to line up with the rows of the rate map
 * returned by euler_rate_matrix().
 */
template <typename T>
struct EulerAnglesT {
  T phi{0};    // roll  (rad)
  T theta{0};  // pitch (rad)
  T psi{0};    // yaw   (rad)

  EulerAnglesT() = default;
  EulerAnglesT(T phi_, T theta_, T psi_) : phi(phi_), theta(theta_), psi(psi_) {}

  static EulerAnglesT FromVector(const Vec3T<T>& v) { return {v[0], v[1], v[2]}; }

  Vec3T<T> vector() const { return Vec3T<T>(phi, theta, psi); }
};

using EulerAngles = EulerAnglesT<Scalar>;

template <typename T>
Mat3T<T> rotation_x(T angle) {
  const T c = std::cos(angle), s = std::sin(angle);
  Mat3T<T> r;
  r << T(1), T(0), T(0),
       T(0), c, -s,
       T(0), s, c;
  return r;
}

template <typename T>
Mat3T<T> rotation_y(T angle) {
  const T c = std::cos(angle), s = std::sin(angle);
  Mat3T<T> r;
  r << c, T(0), s,
       T(0), T(1), T(0),
      -s, T(0), c;
  return r;
}

template <typename T>
Mat3T<T> rotation_z(T angle) {
  const T c = std::cos(angle), s = std::sin(angle);
  Mat3T<T> r;
  r << c, -s, T(0),
       s, c, T(0),
       T(0), T(0), T(1);
  return r;
}

/// Body-to-world rotation for the roll/pitch/yaw convention above.
template <typename T>
Mat3T<T> rotation_from_euler(const EulerAnglesT<T>& e) {
  return rotation_z(e.psi) * rotation_y(e.theta) * rotation_x(e.phi);
}

/// Inverse of rotation_from_euler on the |theta| < pi/2 branch.
template <typename T>
EulerAnglesT<T> euler_from_rotation(const Mat3T<T>& r) {
  T sth = -r(2, 0);
  sth = std::max(T(-1), std::min(T(1), sth));
  EulerAnglesT<T> e;
  e.theta = std::asin(sth);
  e.phi = std::atan2(r(2, 1), r(2, 2));
  e.psi = std::atan2(r(1, 0), r(0, 0));
  return e;
}

/**
 * Rate map W with euler_rates = W * omega, omega the body-frame angular
 * velocity:
 *
 *   W = [ 1  sin(phi) tan(theta)  cos(phi) tan(theta) ]
 *       [ 0  cos(phi)            -sin(phi)            ]
 *       [ 0  sin(phi) sec(theta)  cos(phi) sec(theta) ]
 *
 * Throws SingularConfiguration when |theta| is within eps_sing of pi/2.
 */
template <typename T>
Mat3T<T> euler_rate_matrix(const EulerAnglesT<T>& e,
                           T eps_sing = T(kDefaultSingularityMargin)) {
  constexpr T half_pi = T(M_PI / 2.0);
  if (std::abs(e.theta) >= half_pi - eps_sing) {
    throw SingularConfiguration("euler_rate_matrix: pitch " +
                                std::to_string(e.theta) +
                                " rad is inside the singular band");
  }
  const T sphi = std::sin(e.phi), cphi = std::cos(e.phi);
  const T tth = std::tan(e.theta), sec = T(1) / std::cos(e.theta);
  Mat3T<T> w;
  w << T(1), sphi * tth, cphi * tth,
       T(0), cphi, -sphi,
       T(0), sphi * sec, cphi * sec;
  return w;
}

/**
 * 6x6 map taking the object twist [p_dot; omega] to the twist of a frame
 * rigidly attached at body offset p_body:
 *
 *   [ I  -[R p_body]x ]
 *   [ 0   I           ]
 */
template <typename T>
Mat6T<T> velocity_transform(const Mat3T<T>& rotation, const Vec3T<T>& p_body) {
  Mat6T<T> d = Mat6T<T>::Identity();
  d.template block<3, 3>(0, 3) = -skew((rotation * p_body).eval());
  return d;
}

/// Position plus orientation; the rotation matrix is derived from angles.
template <typename T>
struct PoseT {
  Vec3T<T> position = Vec3T<T>::Zero();
  EulerAnglesT<T> angles;

  Mat3T<T> rotation() const { return rotation_from_euler(angles); }
};

using Pose = PoseT<Scalar>;

}  // namespace pivot
