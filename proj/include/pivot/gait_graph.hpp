#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pivot/geom.hpp"
#include "pivot/model.hpp"
#include "pivot/types.hpp"

namespace pivot {

enum class GaitMode { DS, QS };

inline const char* gait_mode_label(GaitMode m) { return m == GaitMode::DS ? "DS" : "QS"; }

/// Gait geometry and timing. The defaults walk a two-step cycle in 2.2 s
/// (DS) or 5.6 s (QS) at a 0.085 m step.
struct GaitParams {
  Scalar step_length = 0.085;   // advance of the swing vertex per step (m)
  Scalar edge_width = 0.4;      // lateral distance between the pivot vertices (m)
  Scalar ds_roll_peak = 0.2;    // swing-apex roll in the DS cycle (rad)
  Scalar qs_roll_peak = 0.35;   // swing-apex roll in the QS cycle (rad)
  Scalar ds_pitch = 0.15;       // pitch held throughout the DS cycle (rad)
  Scalar qs_pitch_peak = 0.2;   // swing-apex pitch in the QS cycle (rad)
  Scalar ds_edge_time = 0.55;   // per-edge transit time, DS cycle (s)
  Scalar qs_edge_time = 1.4;    // per-edge transit time, QS cycle (s)
  Scalar switch_edge_time = 1.4;  // transit time of cycle-switching edges (s)
  Scalar dwell_frac = 0.25;     // tail of a landing edge held at the key pose
  Scalar ramp_time = 0.15;      // gravity-feedforward ramp at support changes (s)
  Scalar window_frac = 0.3;     // tail fraction of a descent accepting touchdown

  Scalar yaw_step() const;  // per-step yaw swing implied by the step length
};

/// Path-cost weights and the disturbance penalties (delta_ds > delta_qs).
struct GaitWeights {
  Scalar alpha_g = 1.0;   // state-distance term
  Scalar beta_g = 1.0;    // transit-time term
  Scalar gamma_g = 1.0;   // disturbance term
  Scalar delta_ds = 10.0;
  Scalar delta_qs = 1.0;
};

struct GaitNode {
  int id = 0;
  std::string name;
  SupportPhase phase = SupportPhase::QS;
  EulerAngles key_angles;
  Vec3 key_omega = Vec3::Zero();
  GaitMode cycle = GaitMode::DS;

  Vec6 key_state() const {
    Vec6 x;
    x << key_angles.vector(), key_omega;
    return x;
  }
};

struct GaitEdge {
  int id = 0;
  int from = 0;
  int to = 0;
  Scalar t_i = 0;          // transit time (s)
  Scalar base_weight = 0;
  bool switching = false;  // crosses between the two principal cycles
  GaitMode cycle = GaitMode::DS;  // cycle of the destination node
};

struct GaitGraph {
  std::vector<GaitNode> nodes;
  std::vector<GaitEdge> edges;
  std::vector<std::vector<int>> out_edges;  // node id -> edge ids
  GaitParams params;

  const GaitNode& node(int id) const { return nodes[id]; }
  const GaitEdge& edge(int id) const { return edges[id]; }
  int node_id(const std::string& name) const;
};

/// Two 4-node principal cycles (inner QS, outer DS) plus the switching edges
/// between them. Throws InvalidParams on degenerate geometry or timing.
GaitGraph build_graph(const GaitParams& params);

struct PathCost {
  Scalar J_s = 0;
  Scalar J_t = 0;
  Scalar J_dst = 0;
  Scalar J_path = 0;
};

struct GaitPath {
  std::vector<int> edge_ids;  // always 4
  std::vector<int> node_ids;  // always 5
  GaitMode mode = GaitMode::DS;  // cycle of the last support node reached
  PathCost cost;
};

/// Cost of a 4-edge path under the current disturbance flag.
/// Throws WrongPathLength for any other length.
PathCost path_cost(const GaitGraph& graph, const std::vector<int>& edge_ids,
                   bool disturbance, const GaitWeights& weights);

/// Change-based disturbance detection against the previous sample, pose and
/// per-arm force channels joined with OR; thresholds are inclusive.
struct DisturbanceDetector {
  Vec3 psi_thr = Vec3(0.05, 0.05, 0.05);  // per-axis Euler thresholds (rad)
  Scalar f_thr = 3.0;                     // per-arm force threshold (N)
  bool per_axis = true;                   // false: vector-norm test
  Scalar delta_ds = 10.0;
  Scalar delta_qs = 1.0;

  bool primed = false;
  Vec3 psi_prev = Vec3::Zero();
  std::array<Vec3, 2> f_prev{Vec3::Zero(), Vec3::Zero()};

  /// Compares against the stored previous samples, then replaces them.
  /// Returns false on the priming call.
  bool update(const Vec3& psi_cur, const Vec3& f1_cur, const Vec3& f2_cur);
};

/// Lowest-cost admissible 4-edge path from the given node. Candidates are
/// enumerated exhaustively; ties break by mode priority (QS first), then by
/// the lexicographic node-id sequence. restrict_mode limits candidates to one
/// principal cycle (switching disabled). Throws NoAdmissiblePath.
GaitPath select_mode(const GaitGraph& graph, int node_id, bool disturbance,
                     const GaitWeights& weights,
                     std::optional<GaitMode> restrict_mode = std::nullopt);

/// One point of the object reference along an edge, with the support
/// annotations the closed loop needs.
struct ReferenceSample {
  Scalar tau = 0;  // time within the edge (s)
  EulerAngles angles;
  Vec3 omega = Vec3::Zero();
  SupportPhase phase = SupportPhase::QS;  // planned support at this instant
  VertexId pivot = VertexId::FrontRight;  // rotation center (current or upcoming)
  bool touchdown_window = false;
  Mat3 gravity_projection = Mat3::Identity();  // feedforward seen by the MPC
  GaitMode mode = GaitMode::DS;

  Vec6 state_vector() const {
    Vec6 x;
    x << angles.vector(), omega;
    return x;
  }
};

/// Continuous-time reference along one edge: smooth-step interpolation of the
/// key poses with omega consistent with the Euler-rate map, a hold segment
/// while the gravity feedforward ramps in at the start of a lift edge, and a
/// touchdown dwell at the end of a landing edge.
ReferenceSample evaluate_edge(const GaitGraph& graph, int edge_id, Scalar tau);

struct ReferenceTrajectory {
  std::vector<ReferenceSample> samples;  // at multiples of T, endpoints included
  std::vector<Scalar> sample_times;      // global time of each sample
  std::vector<int> edge_of_sample;       // path-local edge index per sample
  Scalar T = 0;
  Scalar total_time = 0;
};

/// Sampled reference over a whole path at period T; edge endpoints land
/// exactly on the key poses. Throws SingularConfiguration only if a key pose
/// pitch reaches the rate-map singularity.
ReferenceTrajectory reference_trajectory(const GaitGraph& graph, const GaitPath& path,
                                         Scalar T);

}  // namespace pivot
