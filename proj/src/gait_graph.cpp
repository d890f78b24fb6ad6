#include "pivot/gait_graph.hpp"

#include <algorithm>
#include <cmath>

#include "pivot/errors.hpp"

namespace pivot {

Scalar GaitParams::yaw_step() const { return std::asin(step_length / edge_width); }

int GaitGraph::node_id(const std::string& name) const {
  for (const GaitNode& n : nodes)
    if (n.name == name) return n.id;
  throw InvalidParams("unknown graph node: " + name);
}

GaitGraph build_graph(const GaitParams& p) {
  if (p.step_length <= 0 || p.edge_width <= 0 || p.step_length >= p.edge_width)
    throw InvalidParams("build_graph: step length must be in (0, edge_width)");
  if (p.ds_roll_peak <= 0 || p.qs_roll_peak <= 0 || p.ds_pitch <= 0 ||
      p.qs_pitch_peak <= 0)
    throw InvalidParams("build_graph: key-pose angles must be positive");
  if (p.ds_edge_time <= 0 || p.qs_edge_time <= 0 || p.switch_edge_time <= 0)
    throw InvalidParams("build_graph: edge times must be positive");
  if (p.dwell_frac < 0 || p.dwell_frac >= 1 || p.window_frac <= 0 || p.window_frac >= 1)
    throw InvalidParams("build_graph: fractions must lie in (0, 1)");

  const Scalar dyaw = p.yaw_step();
  const Scalar half = dyaw / 2;

  GaitGraph g;
  g.params = p;
  auto add_node = [&g](const std::string& name, SupportPhase phase, Scalar roll,
                       Scalar pitch, Scalar yaw, GaitMode cycle) {
    GaitNode n;
    n.id = static_cast<int>(g.nodes.size());
    n.name = name;
    n.phase = phase;
    n.key_angles = EulerAngles(roll, pitch, yaw);
    n.cycle = cycle;
    g.nodes.push_back(n);
    return n.id;
  };

  // Outer (DS) cycle: the box keeps its pitch and rolls between the front
  // vertices; inner (QS) cycle: the box returns flat between steps.
  const int ds_a = add_node("DS_A", SupportPhase::DS, 0, p.ds_pitch, 0, GaitMode::DS);
  const int ss_r_ds = add_node("SS_R_ds", SupportPhase::SS_right, p.ds_roll_peak,
                               p.ds_pitch, -half, GaitMode::DS);
  const int ds_b = add_node("DS_B", SupportPhase::DS, 0, p.ds_pitch, -dyaw, GaitMode::DS);
  const int ss_l_ds = add_node("SS_L_ds", SupportPhase::SS_left, -p.ds_roll_peak,
                               p.ds_pitch, -half, GaitMode::DS);
  const int qs_a = add_node("QS_A", SupportPhase::QS, 0, 0, 0, GaitMode::QS);
  const int ss_r_qs = add_node("SS_R_qs", SupportPhase::SS_right, p.qs_roll_peak,
                               p.qs_pitch_peak, -half, GaitMode::QS);
  const int qs_b = add_node("QS_B", SupportPhase::QS, 0, 0, -dyaw, GaitMode::QS);
  const int ss_l_qs = add_node("SS_L_qs", SupportPhase::SS_left, -p.qs_roll_peak,
                               p.qs_pitch_peak, -half, GaitMode::QS);

  auto add_edge = [&g](int from, int to, Scalar t, bool switching) {
    GaitEdge e;
    e.id = static_cast<int>(g.edges.size());
    e.from = from;
    e.to = to;
    e.t_i = t;
    e.switching = switching;
    e.cycle = g.nodes[to].cycle;
    g.edges.push_back(e);
  };

  // Principal motions.
  add_edge(ds_a, ss_r_ds, p.ds_edge_time, false);
  add_edge(ss_r_ds, ds_b, p.ds_edge_time, false);
  add_edge(ds_b, ss_l_ds, p.ds_edge_time, false);
  add_edge(ss_l_ds, ds_a, p.ds_edge_time, false);
  add_edge(qs_a, ss_r_qs, p.qs_edge_time, false);
  add_edge(ss_r_qs, qs_b, p.qs_edge_time, false);
  add_edge(qs_b, ss_l_qs, p.qs_edge_time, false);
  add_edge(ss_l_qs, qs_a, p.qs_edge_time, false);
  // Switching motions between the cycles.
  add_edge(ss_r_ds, qs_b, p.switch_edge_time, true);
  add_edge(ss_l_ds, qs_a, p.switch_edge_time, true);
  add_edge(ss_r_qs, ds_b, p.switch_edge_time, true);
  add_edge(ss_l_qs, ds_a, p.switch_edge_time, true);
  add_edge(ds_a, ss_r_qs, p.switch_edge_time, true);
  add_edge(ds_b, ss_l_qs, p.switch_edge_time, true);
  add_edge(qs_a, ss_r_ds, p.switch_edge_time, true);
  add_edge(qs_b, ss_l_ds, p.switch_edge_time, true);

  g.out_edges.assign(g.nodes.size(), {});
  for (const GaitEdge& e : g.edges) g.out_edges[e.from].push_back(e.id);
  return g;
}

PathCost path_cost(const GaitGraph& graph, const std::vector<int>& edge_ids,
                   bool disturbance, const GaitWeights& weights) {
  if (edge_ids.size() != 4)
    throw WrongPathLength("path_cost: a gait path has exactly 4 edges");

  PathCost c;
  GaitMode mode = GaitMode::DS;
  for (int eid : edge_ids) {
    const GaitEdge& e = graph.edge(eid);
    const Vec6 dx = graph.node(e.from).key_state() - graph.node(e.to).key_state();
    c.J_s += dx.squaredNorm();
    c.J_t += e.t_i;
    if (graph.node(e.to).phase == SupportPhase::DS) mode = GaitMode::DS;
    if (graph.node(e.to).phase == SupportPhase::QS) mode = GaitMode::QS;
  }
  if (disturbance)
    c.J_dst = mode == GaitMode::DS ? weights.delta_ds : weights.delta_qs;
  c.J_path = weights.alpha_g * c.J_s + weights.beta_g * c.J_t + weights.gamma_g * c.J_dst;
  return c;
}

bool DisturbanceDetector::update(const Vec3& psi_cur, const Vec3& f1_cur,
                                 const Vec3& f2_cur) {
  bool detected = false;
  if (primed) {
    if (per_axis) {
      detected = ((psi_cur - psi_prev).cwiseAbs().array() >= psi_thr.array()).any();
    } else {
      detected = (psi_cur - psi_prev).norm() >= psi_thr.norm();
    }
    detected = detected || (f1_cur - f_prev[0]).norm() >= f_thr ||
               (f2_cur - f_prev[1]).norm() >= f_thr;
  }
  psi_prev = psi_cur;
  f_prev[0] = f1_cur;
  f_prev[1] = f2_cur;
  primed = true;
  return detected;
}

namespace {

GaitMode path_mode(const GaitGraph& graph, const std::vector<int>& node_ids) {
  GaitMode mode = GaitMode::DS;
  for (int nid : node_ids) {
    const SupportPhase ph = graph.node(nid).phase;
    if (ph == SupportPhase::DS) mode = GaitMode::DS;
    if (ph == SupportPhase::QS) mode = GaitMode::QS;
  }
  return mode;
}

void enumerate_paths(const GaitGraph& graph, int node, int depth,
                     std::vector<int>& edges, std::vector<int>& nodes,
                     std::optional<GaitMode> restrict_mode,
                     std::vector<GaitPath>& out) {
  if (depth == 4) {
    GaitPath p;
    p.edge_ids = edges;
    p.node_ids = nodes;
    p.mode = path_mode(graph, nodes);
    out.push_back(std::move(p));
    return;
  }
  for (int eid : graph.out_edges[node]) {
    const GaitEdge& e = graph.edge(eid);
    if (restrict_mode) {
      if (e.switching || e.cycle != *restrict_mode ||
          graph.node(e.from).cycle != *restrict_mode)
        continue;
    }
    edges.push_back(eid);
    nodes.push_back(e.to);
    enumerate_paths(graph, e.to, depth + 1, edges, nodes, restrict_mode, out);
    edges.pop_back();
    nodes.pop_back();
  }
}

}  // namespace

GaitPath select_mode(const GaitGraph& graph, int node_id, bool disturbance,
                     const GaitWeights& weights,
                     std::optional<GaitMode> restrict_mode) {
  std::vector<GaitPath> candidates;
  std::vector<int> edges, nodes{node_id};
  enumerate_paths(graph, node_id, 0, edges, nodes, restrict_mode, candidates);
  if (candidates.empty())
    throw NoAdmissiblePath("select_mode: no admissible 4-edge path from node " +
                           graph.node(node_id).name);

  for (GaitPath& p : candidates) p.cost = path_cost(graph, p.edge_ids, disturbance, weights);

  auto better = [](const GaitPath& a, const GaitPath& b) {
    if (std::abs(a.cost.J_path - b.cost.J_path) > 1e-12)
      return a.cost.J_path < b.cost.J_path;
    if (a.mode != b.mode) return a.mode == GaitMode::QS;  // QS has priority on ties
    return a.node_ids < b.node_ids;
  };
  return *std::min_element(candidates.begin(), candidates.end(), better);
}

namespace {

Scalar smoothstep(Scalar x) { return x * x * (3 - 2 * x); }
Scalar smoothstep_rate(Scalar x) { return 6 * x * (1 - x); }

}  // namespace

ReferenceSample evaluate_edge(const GaitGraph& graph, int edge_id, Scalar tau) {
  const GaitEdge& e = graph.edge(edge_id);
  const GaitNode& from = graph.node(e.from);
  const GaitNode& to = graph.node(e.to);
  const GaitParams& p = graph.params;
  tau = std::clamp(tau, 0.0, e.t_i);

  const bool lift = to.phase == SupportPhase::SS_left || to.phase == SupportPhase::SS_right;
  // Lift edges hold the start pose while the feedforward ramps in; landing
  // edges end in a dwell at the touchdown pose while it ramps out.
  const Scalar hold = lift ? std::min(p.ramp_time, 0.4 * e.t_i) : 0.0;
  const Scalar dwell = lift ? 0.0 : p.dwell_frac * e.t_i;
  const Scalar move = e.t_i - hold - dwell;

  const GaitNode& ss_node = lift ? to : from;
  const SupportPhase ss_phase = ss_node.phase;
  const VertexId pivot = ss_phase == SupportPhase::SS_left ? VertexId::FrontLeft
                                                           : VertexId::FrontRight;
  const SupportPhase connect_phase = lift ? from.phase : to.phase;

  // In double support the hands still carry the gravity torque about the
  // support edge; everything else (and all of it in quadruple support) is
  // resisted by the ground.
  Mat3 held = Mat3::Zero();
  if (connect_phase == SupportPhase::DS) {
    const GaitNode& connect = lift ? from : to;
    const Vec3 axis = rotation_z(connect.key_angles.psi) * Vec3::UnitY();
    held = axis * axis.transpose();
  }

  ReferenceSample s;
  s.tau = tau;
  s.pivot = pivot;
  s.mode = e.cycle;

  const Vec3 from_v = from.key_angles.vector();
  const Vec3 to_v = to.key_angles.vector();

  Scalar w_ramp = 1.0;  // 1: hands carry the full feedforward (single support)
  if (lift && tau < hold) {
    s.angles = from.key_angles;
    s.omega = Vec3::Zero();
    s.phase = connect_phase;
    w_ramp = hold > 0 ? tau / hold : 1.0;
  } else if (!lift && tau > move) {
    s.angles = to.key_angles;
    s.omega = Vec3::Zero();
    s.phase = connect_phase;
    const Scalar ramp = std::min(p.ramp_time, dwell > 0 ? dwell / 2 : p.ramp_time);
    w_ramp = ramp > 0 ? std::max(0.0, 1.0 - (tau - move) / ramp) : 0.0;
    s.touchdown_window = true;
  } else {
    const Scalar x = move > 0 ? (tau - (lift ? hold : 0.0)) / move : 1.0;
    const Vec3 ang = from_v + smoothstep(x) * (to_v - from_v);
    s.angles = EulerAngles::FromVector(ang);
    const Vec3 ang_rate = smoothstep_rate(x) / move * (to_v - from_v);
    s.omega = euler_rate_matrix(s.angles).inverse() * ang_rate;
    s.phase = ss_phase;
    if (!lift && x >= 1.0 - p.window_frac) s.touchdown_window = true;
  }

  if (s.phase == SupportPhase::DS || s.phase == SupportPhase::QS) {
    Mat3 carried = s.phase == SupportPhase::QS ? Mat3::Zero() : held;
    s.gravity_projection = carried + w_ramp * (Mat3::Identity() - carried);
  } else {
    s.gravity_projection = Mat3::Identity();
  }
  return s;
}

ReferenceTrajectory reference_trajectory(const GaitGraph& graph, const GaitPath& path,
                                         Scalar T) {
  if (T <= 0) throw InvalidParams("reference_trajectory: T must be positive");
  ReferenceTrajectory traj;
  traj.T = T;
  for (int eid : path.edge_ids) traj.total_time += graph.edge(eid).t_i;

  const int n_samples = static_cast<int>(std::round(traj.total_time / T)) + 1;
  std::vector<Scalar> edge_start(path.edge_ids.size());
  Scalar acc = 0;
  for (size_t i = 0; i < path.edge_ids.size(); ++i) {
    edge_start[i] = acc;
    acc += graph.edge(path.edge_ids[i]).t_i;
  }

  for (int k = 0; k < n_samples; ++k) {
    const Scalar t = std::min(k * T, traj.total_time);
    size_t ei = path.edge_ids.size() - 1;
    for (size_t i = 0; i < path.edge_ids.size(); ++i) {
      const Scalar end = edge_start[i] + graph.edge(path.edge_ids[i]).t_i;
      if (t < end - 1e-12 || i == path.edge_ids.size() - 1) {
        ei = i;
        break;
      }
    }
    traj.samples.push_back(evaluate_edge(graph, path.edge_ids[ei], t - edge_start[ei]));
    traj.sample_times.push_back(t);
    traj.edge_of_sample.push_back(static_cast<int>(ei));
  }
  return traj;
}

}  // namespace pivot
