#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pivot/gait_graph.hpp"
#include "pivot/model.hpp"
#include "pivot/mpc.hpp"
#include "pivot/qp.hpp"
#include "pivot/types.hpp"

namespace pivot {

struct DisturbanceEvent {
  enum class Kind { Payload, Impulse, Push };
  Kind kind = Kind::Payload;
  Scalar time = 0;               // s
  Scalar mass = 0;               // Payload (kg)
  Vec3 position = Vec3::Zero();  // Payload attachment, body frame (m)
  Vec3 delta_omega = Vec3::Zero();  // Impulse (rad/s)
  Vec3 force = Vec3::Zero();        // Push, world frame (N), applied at the CoG
  Scalar duration = 0;              // Push (s)
};

struct SensorNoise {
  Scalar pose_rad = 0.002;  // uniform, per Euler axis
  Scalar pos_m = 0.001;     // uniform, per position axis
  Scalar force_n = 0.5;     // uniform, per force axis
};

struct ContactConfig {
  Scalar k_env = 4000.0;        // unilateral normal spring (N/m)
  Scalar contact_tol = 1e-4;    // ground contact tolerance (m)
  Scalar scuff_tol = 1e-3;      // below-ground depth counted as a collision (m)
  Scalar separation_tol = 5e-3; // normal retreat before contact is lost (m)
};

struct Scenario {
  std::string name = "scenario";
  ObjectModel object;        // nominal model, as the controller knows it
  MpcConfig mpc;
  GaitParams gait;
  GaitWeights weights;
  DisturbanceDetector detector;  // thresholds; runtime state reset per run
  bool allow_switching = true;
  std::string initial_node = "DS_A";  // must be a DS or QS node
  int goal_steps = 2;
  std::vector<DisturbanceEvent> events;  // time-ordered
  SensorNoise noise;
  Mat3 d_imp = 200.0 * Mat3::Identity();  // impedance damping (N s/m)
  ContactConfig contact;
  Scalar omega_filter_tau = 0.1;  // s, first-order filter on the rate estimate
  Scalar fall_angle = 0.8;        // rad, unrecoverable tilt
  std::uint64_t seed = 0;
};

struct StepRecord {
  Scalar t = 0;
  Vec3 euler_true = Vec3::Zero();
  Vec3 omega_true = Vec3::Zero();
  Vec3 p_b = Vec3::Zero();
  Vec3 euler_sensed = Vec3::Zero();
  Vec3 euler_ref = Vec3::Zero();
  Vec3 omega_ref = Vec3::Zero();
  std::array<Vec3, 2> f_applied{Vec3::Zero(), Vec3::Zero()};
  std::array<Vec3, 2> f_ref{Vec3::Zero(), Vec3::Zero()};
  QpStatus qp_status = QpStatus::Optimal;
  int qp_iterations = 0;
  Scalar qp_residual = 0;
  int active_node = 0;
  int edge_id = 0;
  PathCost path_cost;
  bool detector_flag = false;
  SupportPhase phase = SupportPhase::QS;  // actual plant support
};

struct FootprintRecord {
  int step_index = 0;
  VertexId vertex = VertexId::FrontRight;
  Scalar x = 0;
  Scalar y = 0;
};

struct SwitchEvent {
  Scalar t = 0;
  GaitMode from = GaitMode::DS;
  GaitMode to = GaitMode::QS;
};

struct RunSummary {
  bool completed = false;
  std::string reason;  // goal_reached | scuff | fall | infeasible | contact_lost | timeout
  std::string detail;
  int steps_completed = 0;
  Scalar sim_time = 0;
  std::vector<SwitchEvent> switches;
  Scalar first_detection_time = -1;
  Scalar max_pivot_drift = 0;
  Scalar max_cone_violation = 0;
  Scalar tracking_error_after_transient = 0;  // max |euler - ref| after edge 1
  Scalar tracking_error_last_edge = 0;
  Scalar wall_ms = 0;  // not serialized; runs must be bit-reproducible
};

struct SimLog {
  std::vector<StepRecord> records;
  std::vector<FootprintRecord> footprints;
  RunSummary summary;
};

/// Damping-law end-effector command: reference velocity plus the force error
/// mapped through the inverse damping. f_ref and f_measured are the reaction
/// forces the wrist sensor feels. Throws SingularDamping unless d_imp is
/// symmetric positive definite.
Vec3 impedance_update(const Vec3& v_ref, const Vec3& f_ref, const Vec3& f_measured,
                      const Mat3& d_imp);

/// Normal-spring deflection state of one hand contact.
struct ContactChannel {
  Scalar deflection = 0;  // m, along the inward normal
};

/// Realized contact force: the commanded force plus a stiff unilateral spring
/// along the inward normal, fed by the relative approach velocity and capped
/// on the friction pyramid. Throws ContactLost when the hand has retreated
/// past the separation tolerance.
Vec3 contact_force_model(ContactChannel& channel, const FrictionModel& fm, int contact,
                         const Vec3& f_ref, const Vec3& v_cmd, const Vec3& v_contact,
                         const Vec3& n_in, const ContactConfig& config, Scalar dt);

/// Touchdown / scuff rules for one integrated plant state against the planned
/// annotation. On touchdown the pose is snapped onto the landing manifold
/// (roll zeroed, pitch too for a flat landing), the rate is absorbed, and the
/// connect support is returned. Throws ScuffDetected for a vertex below
/// ground outside the touchdown window.
SupportState phase_transition(const ObjectModel& model, ObjectState& state,
                              const ReferenceSample& annotation,
                              SupportPhase landing_phase, const ContactConfig& config);

/// Run the closed loop to completion or failure. Failures are recorded in the
/// summary, never thrown.
SimLog run(const Scenario& scenario);

}  // namespace pivot
