#include "pivot/dynamics.hpp"

#include <Eigen/Cholesky>

#include "pivot/errors.hpp"
#include "pivot/geom.hpp"

namespace pivot {

Vec3 gravity_torque(const ObjectModel& model, const ObjectState& state) {
  if (!state.support.is_single_support())
    throw NoPivot("gravity_torque: no pivot outside single support");
  const Vec3 r_com = com_world(model, state) - state.support.pivot;
  return r_com.cross(model.mass * model.gravity);
}

Mat3 world_inertia_about_pivot(const ObjectModel& model, const ObjectState& state) {
  const Mat3 r = state.rotation();
  const Vec3 c = com_world(model, state) - state.support.pivot;
  return r * model.inertia * r.transpose() +
         model.mass * (c.squaredNorm() * Mat3::Identity() - c * c.transpose());
}

ObjectState step_nonlinear(const ObjectModel& model, const ObjectState& state,
                           const Vec3& f1, const Vec3& f2, Scalar dt,
                           const Vec3& tau_ext) {
  if (!state.support.is_single_support())
    throw NoPivot("step_nonlinear: plant integration requires single support");

  const Mat3 rot = state.rotation();
  const Vec3 p0 = state.support.pivot;
  const Vec3 r1 = state.position + rot * model.grasp_point(0) - p0;
  const Vec3 r2 = state.position + rot * model.grasp_point(1) - p0;
  const Vec3 r_com = com_world(model, state) - p0;

  const Vec3 tau = r1.cross(f1) + r2.cross(f2) +
                   r_com.cross(model.mass * model.gravity) + tau_ext;
  const Mat3 inertia_w = world_inertia_about_pivot(model, state);
  const Vec3 omega_dot =
      inertia_w.ldlt().solve(tau - state.omega.cross(inertia_w * state.omega));

  ObjectState next = state;
  next.omega = state.omega + dt * omega_dot;
  const Mat3 w = euler_rate_matrix(state.angles);
  next.angles = EulerAngles::FromVector(state.angles.vector() + dt * (w * next.omega));

  // Keep the pivot vertex pinned to its world anchor.
  const Vec3 pivot_body = model.bottom_vertex(state.support.pivot_vertex());
  next.position = p0 - rotation_from_euler(next.angles) * pivot_body;
  return next;
}

StepMatrices linearize(const ObjectModel& model, const ObjectState& state,
                       const Vec3& p1_world, const Vec3& p2_world, Scalar T,
                       const Mat3& gravity_projection) {
  const Vec3 p0 = state.support.pivot;
  const Vec3 r1 = p1_world - p0;
  const Vec3 r2 = p2_world - p0;
  const Vec3 r_com = com_world(model, state) - p0;

  const Mat3 w = euler_rate_matrix(state.angles);
  const Mat3 inertia_w = world_inertia_about_pivot(model, state);
  const Mat3 inertia_inv = inertia_w.inverse();

  StepMatrices s;
  s.T = T;
  s.A.block<3, 3>(0, 3) = T * w;

  const Mat3 top = inertia_inv * (0.5 * T * T) * w;
  const Mat3 bot = inertia_inv * T;
  s.B.block<3, 3>(0, 0) = top * skew(r1);
  s.B.block<3, 3>(0, 3) = top * skew(r2);
  s.B.block<3, 3>(3, 0) = bot * skew(r1);
  s.B.block<3, 3>(3, 3) = bot * skew(r2);

  const Vec3 tau_g = gravity_projection * (skew(r_com) * (model.mass * model.gravity));
  s.D.head<3>() = top * tau_g;
  s.D.tail<3>() = bot * tau_g;
  return s;
}

PredictionBundle stack_prediction(const StepMatrices& step, int n_p) {
  if (n_p < 1) throw InvalidParams("stack_prediction: horizon must be >= 1");
  PredictionBundle b;
  b.n_p = n_p;
  b.T = step.T;
  b.A_stack.setZero(6 * n_p, 6);
  b.B_stack.setZero(6 * n_p, 6 * n_p);
  b.D_stack.setZero(6 * n_p);

  std::vector<Mat6> a_pow(n_p);  // a_pow[l] = A^l
  a_pow[0] = Mat6::Identity();
  for (int l = 1; l < n_p; ++l) a_pow[l] = step.A * a_pow[l - 1];

  Mat6 a_row = step.A;  // A^{i+1} for block row i
  Vec6 d_acc = Vec6::Zero();
  for (int i = 0; i < n_p; ++i) {
    b.A_stack.block<6, 6>(6 * i, 0) = a_row;
    d_acc += a_pow[i] * step.D;
    b.D_stack.segment<6>(6 * i) = d_acc;
    for (int j = 0; j <= i; ++j)
      b.B_stack.block<6, 6>(6 * i, 6 * j) = a_pow[i - j] * step.B;
    if (i + 1 < n_p) a_row = step.A * a_row;
  }
  return b;
}

std::vector<Vec6> predict_states(const StepMatrices& step, const Vec6& x,
                                 const VecX& u_sequence, int n_p) {
  std::vector<Vec6> out;
  out.reserve(n_p);
  Vec6 cur = x;
  for (int i = 0; i < n_p; ++i) {
    const Vec6 u = u_sequence.segment<6>(6 * i);
    cur = step.A * cur + step.B * u + step.D;
    out.push_back(cur);
  }
  return out;
}

}  // namespace pivot
