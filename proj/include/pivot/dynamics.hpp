#pragma once

#include <vector>

#include "pivot/model.hpp"
#include "pivot/types.hpp"

namespace pivot {

/// Discrete one-step rotational model  x_{k+1} = A x_k + B u_k + D  with
/// x = [euler; omega] and u = [f_1; f_2] the two contact forces (world frame).
struct StepMatrices {
  Mat6 A = Mat6::Identity();
  Mat6 B = Mat6::Zero();
  Vec6 D = Vec6::Zero();
  Scalar T = 0;
};

/// Condensed prediction over a horizon of n_p steps from the current state:
///   X = A' x_k + B' U + D',  X = [x_{k+1}; ...; x_{k+n_p}].
/// A' stacks powers of A, B' holds the lower-triangular impulse-response
/// blocks A^{i-j} B, and D' accumulates the affine term row-wise.
struct PredictionBundle {
  MatX A_stack;  // (6 n_p) x 6
  MatX B_stack;  // (6 n_p) x (6 n_p), block lower-triangular
  VecX D_stack;  // 6 n_p
  int n_p = 0;
  Scalar T = 0;
};

/// Torque of gravity about the pivot, r_com x (m g) with world-frame r_com.
/// Throws NoPivot outside single support.
Vec3 gravity_torque(const ObjectModel& model, const ObjectState& state);

/// World-frame inertia about the pivot: R I_o R^T plus the parallel-axis
/// term for the CoG offset from the pivot.
Mat3 world_inertia_about_pivot(const ObjectModel& model, const ObjectState& state);

/**
 * One plant step of the single-support rotational dynamics:
 *
 *   r_1 x f_1 + r_2 x f_2 + r_com x m g (+ tau_ext) = I_w w_dot + w x I_w w
 *
 * with lever arms taken about the pivot. Semi-implicit integration: omega
 * first, then the Euler angles through the rate map, and the object position
 * is rebuilt so the pivot vertex stays pinned to its world anchor.
 *
 * tau_ext carries external disturbance torque about the pivot (zero in
 * nominal use).
 */
ObjectState step_nonlinear(const ObjectModel& model, const ObjectState& state,
                           const Vec3& f1, const Vec3& f2, Scalar dt,
                           const Vec3& tau_ext = Vec3::Zero());

/**
 * Discrete linearization about the current state, frozen for a control step.
 * Lever arms r_i = p_i - p_0 use the passed world-frame grasp positions.
 * The gyroscopic term is not part of the linear model.
 *
 * gravity_projection filters the affine gravity torque: identity in single
 * support; in connect phases it keeps only the components the ground does
 * not resist.
 */
StepMatrices linearize(const ObjectModel& model, const ObjectState& state,
                       const Vec3& p1_world, const Vec3& p2_world, Scalar T,
                       const Mat3& gravity_projection = Mat3::Identity());

/// Condensed horizon stacking of a one-step model; n_p = 1 returns the
/// single-step matrices unchanged.
PredictionBundle stack_prediction(const StepMatrices& step, int n_p);

/// X = A' x + B' U + D' evaluated by iterating the one-step map, so the first
/// block equals A x + B u_0 + D exactly.
std::vector<Vec6> predict_states(const StepMatrices& step, const Vec6& x,
                                 const VecX& u_sequence, int n_p);

}  // namespace pivot
