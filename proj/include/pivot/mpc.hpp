#pragma once

#include <array>
#include <vector>

#include "pivot/dynamics.hpp"
#include "pivot/model.hpp"
#include "pivot/qp.hpp"
#include "pivot/types.hpp"

namespace pivot {

struct MpcConfig {
  Scalar alpha = 100.0;   // state-error weight
  Scalar beta = 0.1;      // input weight
  int n_p = 10;           // prediction horizon
  Scalar T = 0.02;        // sampling time (s)
  Vec6 k_v = Vec6::Zero();  // null-space preference for the hand twist
  Scalar f_n_max = 50.0;  // normal-force upper bound (N)
  Scalar mu = 0.5;        // friction coefficient
  Scalar hand_radius = 0.05;  // spherical hand radius (m)
};

/// Contact frames for the two hand contacts. Columns of each rotation are
/// the tangent, binormal and inward-normal axes (t, o, n) in world frame.
struct FrictionModel {
  std::array<Mat3, 2> frames{Mat3::Identity(), Mat3::Identity()};
  Scalar mu = 0.5;
  Scalar f_n_max = 50.0;
};

/// Contact frames from the grasped side faces at the current orientation:
/// n points into the object, t along the walking axis, o completing a
/// right-handed frame.
FrictionModel make_friction_model(const ObjectModel& model, const ObjectState& state,
                                  const MpcConfig& config);

/// Largest violation of the cone inequalities |f_t| <= mu f_n, |f_o| <= mu f_n,
/// 0 <= f_n <= f_n_max for contact i, evaluated directly on the force.
Scalar friction_cone_violation(const FrictionModel& fm, int contact, const Vec3& force);

/// Clamp a force onto the admissible pyramid, contact-frame coordinate-wise.
Vec3 clamp_to_friction_cone(const FrictionModel& fm, int contact, const Vec3& force);

/// Two-sided linearized cone rows for the whole horizon, block-diagonal per
/// step and per contact. Five rows per contact:
///   (t -+ mu n)' f  paired with zero on the binding side, and 0 <= n'f <= f_max.
struct FrictionConstraints {
  MatX G;      // (10 n_p) x (6 n_p)
  VecX lower;  // 10 n_p
  VecX upper;  // 10 n_p
};
FrictionConstraints friction_constraints(const FrictionModel& fm, int n_p);

/// Linear map M_i with contact-point velocity p_dot_i = M_i * omega for a
/// grasp point rigidly attached to the object pivoting about p_0.
struct ContactVelocity {
  Mat3 map = Mat3::Zero();  // M_i
  Vec3 velocity = Vec3::Zero();
};
ContactVelocity contact_point_velocity(const ObjectModel& model,
                                       const ObjectState& state, int contact);

/// Hand contact map SD_Hi (3x6): twist of the spherical hand to the velocity
/// of its contact point.
Eigen::Matrix<Scalar, 3, 6> hand_contact_map(const ObjectModel& model,
                                             const ObjectState& state, int contact,
                                             Scalar hand_radius);

/// Minimum-norm 6-D hand twist reproducing the contact-point velocity, plus
/// a null-space term from k_v. Throws RankDeficient when the contact rows
/// lose rank (singular values below 1e-10 of the largest).
Vec6 eef_velocity(const Vec3& contact_velocity,
                  const Eigen::Matrix<Scalar, 3, 6>& sd_hi, const Vec6& k_v);

struct ControlOutput {
  std::array<Vec3, 2> f_ref{Vec3::Zero(), Vec3::Zero()};
  std::array<Vec3, 2> eef_velocity_ref{Vec3::Zero(), Vec3::Zero()};
  std::array<Vec6, 2> eef_twist_ref{Vec6::Zero(), Vec6::Zero()};
  std::vector<Vec6> predicted_states;
  VecX u_full;
  Scalar objective = 0;
  Scalar qp_residual = 0;
  int qp_iterations = 0;
  QpStatus qp_status = QpStatus::Optimal;
  std::vector<ActiveConstraint> active_set;
};

/**
 * Build and solve the tracking QP for one control step.
 *
 *   J = alpha/2 ||A'x + B'U + D' - X_ref||^2 + beta/2 ||U||^2
 *
 * as min 0.5 U'QU + r'U + s with Q = alpha B''B' + beta I,
 * r = alpha B''(A'x + D' - X_ref), s = alpha/2 ||A'x + D' - X_ref||^2,
 * subject to the stacked cone rows. Only the first input block is applied;
 * hand velocity references come from the contact maps at the same state.
 */
ControlOutput assemble_and_solve(const ObjectModel& model, const ObjectState& state,
                                 const VecX& x_ref_stack, const PredictionBundle& bundle,
                                 const MpcConfig& config, const FrictionModel& fm,
                                 QpSolver& solver,
                                 const std::vector<ActiveConstraint>& warm_start = {});

}  // namespace pivot
