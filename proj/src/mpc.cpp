#include "pivot/mpc.hpp"

#include <Eigen/SVD>

#include "pivot/errors.hpp"
#include "pivot/geom.hpp"

namespace pivot {

FrictionModel make_friction_model(const ObjectModel& model, const ObjectState& state,
                                  const MpcConfig& config) {
  FrictionModel fm;
  fm.mu = config.mu;
  fm.f_n_max = config.f_n_max;
  const Mat3 r = state.rotation();
  // Hand 0 grasps the +y face, hand 1 the -y face.
  for (int i = 0; i < 2; ++i) {
    const Vec3 n_body = i == 0 ? Vec3(0, -1, 0) : Vec3(0, 1, 0);
    const Vec3 t_body(1, 0, 0);
    const Vec3 o_body = n_body.cross(t_body);
    Mat3 frame;
    frame.col(0) = r * t_body;
    frame.col(1) = r * o_body;
    frame.col(2) = r * n_body;
    fm.frames[i] = frame;
  }
  (void)model;
  return fm;
}

Scalar friction_cone_violation(const FrictionModel& fm, int contact, const Vec3& force) {
  const Vec3 f = fm.frames[contact].transpose() * force;  // (t, o, n)
  Scalar v = 0;
  v = std::max(v, std::abs(f[0]) - fm.mu * f[2]);
  v = std::max(v, std::abs(f[1]) - fm.mu * f[2]);
  v = std::max(v, -f[2]);
  v = std::max(v, f[2] - fm.f_n_max);
  return v;
}

Vec3 clamp_to_friction_cone(const FrictionModel& fm, int contact, const Vec3& force) {
  Vec3 f = fm.frames[contact].transpose() * force;
  f[2] = std::clamp(f[2], 0.0, fm.f_n_max);
  const Scalar cap = fm.mu * f[2];
  f[0] = std::clamp(f[0], -cap, cap);
  f[1] = std::clamp(f[1], -cap, cap);
  return fm.frames[contact] * f;
}

FrictionConstraints friction_constraints(const FrictionModel& fm, int n_p) {
  FrictionConstraints out;
  const int rows_per_step = 10;
  out.G.setZero(rows_per_step * n_p, 6 * n_p);
  out.lower.resize(rows_per_step * n_p);
  out.upper.resize(rows_per_step * n_p);

  // One contact: five rows on f = (f_t, f_o, f_n) in world coordinates.
  Eigen::Matrix<Scalar, 5, 3> rows[2];
  for (int c = 0; c < 2; ++c) {
    const Vec3 t = fm.frames[c].col(0);
    const Vec3 o = fm.frames[c].col(1);
    const Vec3 n = fm.frames[c].col(2);
    rows[c].row(0) = (t - fm.mu * n).transpose();
    rows[c].row(1) = (t + fm.mu * n).transpose();
    rows[c].row(2) = (o - fm.mu * n).transpose();
    rows[c].row(3) = (o + fm.mu * n).transpose();
    rows[c].row(4) = n.transpose();
  }
  const Scalar big = 2.0 * fm.mu * fm.f_n_max;
  Eigen::Matrix<Scalar, 5, 1> lo, hi;
  lo << -big, 0, -big, 0, 0;
  hi << 0, big, 0, big, fm.f_n_max;

  for (int k = 0; k < n_p; ++k) {
    for (int c = 0; c < 2; ++c) {
      const int r0 = rows_per_step * k + 5 * c;
      out.G.block<5, 3>(r0, 6 * k + 3 * c) = rows[c];
      out.lower.segment<5>(r0) = lo;
      out.upper.segment<5>(r0) = hi;
    }
  }
  return out;
}

ContactVelocity contact_point_velocity(const ObjectModel& model,
                                       const ObjectState& state, int contact) {
  const Mat3 r = state.rotation();
  const Vec3 p_i = state.position + r * model.grasp_point(contact);
  ContactVelocity cv;
  cv.map = skew(state.support.pivot - p_i);  // p_dot = omega x (p_i - p_0)
  cv.velocity = cv.map * state.omega;
  return cv;
}

Eigen::Matrix<Scalar, 3, 6> hand_contact_map(const ObjectModel& model,
                                             const ObjectState& state, int contact,
                                             Scalar hand_radius) {
  const Mat3 r = state.rotation();
  const Vec3 n_body = contact == 0 ? Vec3(0, -1, 0) : Vec3(0, 1, 0);
  // World vector from hand center to contact point.
  const Vec3 d = hand_radius * (r * n_body);
  Eigen::Matrix<Scalar, 3, 6> sd;
  sd.leftCols<3>() = Mat3::Identity();
  sd.rightCols<3>() = -skew(d);
  return sd;
}

Vec6 eef_velocity(const Vec3& contact_velocity,
                  const Eigen::Matrix<Scalar, 3, 6>& sd_hi, const Vec6& k_v) {
  Eigen::JacobiSVD<MatX> svd(sd_hi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX sv = svd.singularValues();
  const Scalar cutoff = 1e-10 * sv[0];
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv[i] > cutoff ? 1 : 0;
  if (rank < 3)
    throw RankDeficient("eef_velocity: hand contact rows lost rank");

  VecX inv_sv = sv;
  for (int i = 0; i < sv.size(); ++i) inv_sv[i] = 1.0 / sv[i];
  const MatX pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
  return pinv * contact_velocity + (Mat6::Identity() - pinv * sd_hi) * k_v;
}

ControlOutput assemble_and_solve(const ObjectModel& model, const ObjectState& state,
                                 const VecX& x_ref_stack, const PredictionBundle& bundle,
                                 const MpcConfig& config, const FrictionModel& fm,
                                 QpSolver& solver,
                                 const std::vector<ActiveConstraint>& warm_start) {
  const int n_p = bundle.n_p;
  const Vec6 x = state.state_vector();
  const VecX residual = bundle.A_stack * x + bundle.D_stack - x_ref_stack;

  QpProblem qp;
  qp.Q = config.alpha * bundle.B_stack.transpose() * bundle.B_stack;
  qp.Q.diagonal().array() += config.beta;
  qp.r = config.alpha * bundle.B_stack.transpose() * residual;
  qp.s = 0.5 * config.alpha * residual.squaredNorm();

  FrictionConstraints fc = friction_constraints(fm, n_p);
  qp.G = std::move(fc.G);
  qp.lower = std::move(fc.lower);
  qp.upper = std::move(fc.upper);

  const QpSolution sol = solver.solve(qp, {}, warm_start);

  ControlOutput out;
  out.u_full = sol.u_star;
  out.f_ref[0] = sol.u_star.head<3>();
  out.f_ref[1] = sol.u_star.segment<3>(3);
  out.objective = sol.objective;
  out.qp_residual = sol.kkt_residual;
  out.qp_iterations = sol.iterations;
  out.qp_status = sol.status;
  out.active_set = sol.active_set;

  StepMatrices step;
  step.A = bundle.A_stack.topRows<6>();
  step.B = bundle.B_stack.topLeftCorner<6, 6>();
  step.D = bundle.D_stack.head<6>();
  step.T = bundle.T;
  out.predicted_states = predict_states(step, x, sol.u_star, n_p);

  for (int i = 0; i < 2; ++i) {
    const ContactVelocity cv = contact_point_velocity(model, state, i);
    const auto sd = hand_contact_map(model, state, i, config.hand_radius);
    out.eef_twist_ref[i] = eef_velocity(cv.velocity, sd, config.k_v);
    out.eef_velocity_ref[i] = out.eef_twist_ref[i].head<3>();
  }
  return out;
}

}  // namespace pivot
