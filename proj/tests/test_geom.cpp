#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pivot/geom.hpp"

using namespace pivot;

TEST_SUITE_BEGIN("geom");

TEST_CASE("skew of zero is the zero matrix") {
  CHECK(skew(Vec3::Zero()).isZero(0.0));
}

TEST_CASE("skew reproduces the cross product axiom") {
  const Vec3 r = skew(Vec3(1, 0, 0)) * Vec3(0, 1, 0);
  CHECK(r.isApprox(Vec3(0, 0, 1), 1e-15));
}

TEST_CASE("skew matches the componentwise cross product") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<Scalar> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v(u(rng), u(rng), u(rng)), w(u(rng), u(rng), u(rng));
    CHECK((skew(v) * w - oracles::cross_by_hand(v, w)).norm() <= 1e-12);
    CHECK((skew(v) + skew(v).transpose()).isZero(0.0));  // exactly antisymmetric
  }
}

TEST_CASE("euler rate matrix is the identity at zero roll and pitch") {
  for (Scalar yaw : {0.0, 0.7, -2.0}) {
    const Mat3 w = euler_rate_matrix(EulerAngles(0, 0, yaw));
    CHECK(w.isIdentity(1e-15));
  }
}

TEST_CASE("euler rate matrix rejects the singular band") {
  CHECK_THROWS_AS(euler_rate_matrix(EulerAngles(0, M_PI / 2 - 0.01, 0)),
                  SingularConfiguration);
  CHECK_THROWS_AS(euler_rate_matrix(EulerAngles(0.3, -(M_PI / 2 - 0.04), 1.0)),
                  SingularConfiguration);
  CHECK_NOTHROW(euler_rate_matrix(EulerAngles(0.3, 1.0, 1.0)));
}

TEST_CASE("euler rates from W match finite differences of composed rotations") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<Scalar> ang(-0.8, 0.8), om(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const EulerAngles e0(ang(rng), ang(rng), ang(rng));
    const Vec3 omega_body(om(rng), om(rng), om(rng));
    const Mat3 r0 = rotation_from_euler(e0);
    const Mat3 w = euler_rate_matrix(e0);

    auto fd_error = [&](Scalar h) {
      const Mat3 r1 = r0 * oracles::rotation_exp(omega_body * h);
      const Vec3 fd = (euler_from_rotation(r1).vector() - e0.vector()) / h;
      return (fd - w * omega_body).norm();
    };
    const Scalar e_h = fd_error(1e-4);
    const Scalar e_h2 = fd_error(5e-5);
    CHECK(e_h < 1e-3);
    CHECK(e_h2 <= 0.6 * e_h + 1e-10);  // first-order shrink
  }
}

TEST_CASE("rotation round-trips through euler angles") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<Scalar> ang(-1.2, 1.2);
  for (int i = 0; i < 100; ++i) {
    const EulerAngles e(ang(rng), ang(rng), ang(rng));
    const Mat3 r = rotation_from_euler(e);
    CHECK((r * r.transpose()).isIdentity(1e-12));
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    const EulerAngles back = euler_from_rotation(r);
    CHECK((back.vector() - e.vector()).norm() <= 1e-12);
  }
}

TEST_CASE("velocity transform with zero lever arm is the identity") {
  const Mat6 d = velocity_transform(rotation_from_euler(EulerAngles(0.3, 0.2, -0.5)),
                                    Vec3::Zero());
  CHECK(d.isIdentity(0.0));
}

TEST_CASE("velocity transform top-right block is minus the lever skew") {
  const Mat6 d = velocity_transform(Mat3::Identity().eval(), Vec3(0, 0, 1));
  CHECK(d.block<3, 3>(0, 3).isApprox(-skew(Vec3(0, 0, 1)), 1e-15));
  CHECK(d.block<3, 3>(0, 0).isIdentity(0.0));
  CHECK(d.block<3, 3>(3, 3).isIdentity(0.0));
  CHECK(d.block<3, 3>(3, 0).isZero(0.0));
}

TEST_CASE("velocity transform matches finite-difference point velocity") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<Scalar> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const Mat3 r0 = oracles::rotation_exp(Vec3(u(rng), u(rng), u(rng)));
    const Vec3 p_body(u(rng), u(rng), u(rng));
    const Vec3 p_dot(u(rng), u(rng), u(rng));
    const Vec3 omega_world(u(rng), u(rng), u(rng));
    Vec6 twist;
    twist << p_dot, omega_world;
    const Vec3 predicted = (velocity_transform(r0, p_body) * twist).head<3>();

    auto fd_error = [&](Scalar h) {
      auto point = [&](Scalar t) {
        return (p_dot * t + oracles::rotation_exp(omega_world * t) * r0 * p_body).eval();
      };
      const Vec3 fd = (point(h) - point(-h)) / (2 * h);
      return (fd - predicted).norm();
    };
    const Scalar e_h = fd_error(1e-3);
    CHECK(e_h < 1e-5);
    CHECK(fd_error(5e-4) <= 0.6 * e_h + 1e-12);
  }
}

TEST_SUITE_END();
