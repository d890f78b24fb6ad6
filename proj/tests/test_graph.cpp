#include <set>

#include "doctest.h"
#include "pivot/errors.hpp"
#include "pivot/gait_graph.hpp"

using namespace pivot;

namespace {

bool is_ss(SupportPhase p) {
  return p == SupportPhase::SS_left || p == SupportPhase::SS_right;
}

// All 4-edge walks from a node, independent of select_mode.
void walk(const GaitGraph& g, int node, int depth, std::vector<int>& nodes,
          std::vector<std::vector<int>>& out) {
  if (depth == 4) {
    out.push_back(nodes);
    return;
  }
  for (int eid : g.out_edges[node]) {
    nodes.push_back(g.edge(eid).to);
    walk(g, g.edge(eid).to, depth + 1, nodes, out);
    nodes.pop_back();
  }
}

}  // namespace

TEST_SUITE_BEGIN("gait_graph");

TEST_CASE("the principal graph has two four-node cycles and switching edges") {
  const GaitGraph g = build_graph(GaitParams{});
  CHECK(g.nodes.size() == 8);

  int ds_cycle_edges = 0, qs_cycle_edges = 0, switching = 0;
  for (const GaitEdge& e : g.edges) {
    if (e.switching)
      ++switching;
    else if (e.cycle == GaitMode::DS)
      ++ds_cycle_edges;
    else
      ++qs_cycle_edges;
  }
  CHECK(ds_cycle_edges == 4);
  CHECK(qs_cycle_edges == 4);
  CHECK(switching > 0);

  // Every node reachable from DS_A.
  std::set<int> seen{g.node_id("DS_A")};
  for (int round = 0; round < 8; ++round)
    for (const GaitEdge& e : g.edges)
      if (seen.count(e.from)) seen.insert(e.to);
  CHECK(seen.size() == g.nodes.size());
}

TEST_CASE("cycle transit times follow the two-step timing table") {
  const GaitGraph g = build_graph(GaitParams{});
  Scalar ds_total = 0, qs_total = 0;
  for (const GaitEdge& e : g.edges) {
    if (e.switching) continue;
    (e.cycle == GaitMode::DS ? ds_total : qs_total) += e.t_i;
  }
  CHECK(ds_total == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(qs_total == doctest::Approx(5.6).epsilon(1e-12));
}

TEST_CASE("degenerate gait parameters are rejected") {
  GaitParams p;
  p.step_length = 0.0;
  CHECK_THROWS_AS(build_graph(p), InvalidParams);
  p = GaitParams{};
  p.qs_edge_time = -1;
  CHECK_THROWS_AS(build_graph(p), InvalidParams);
}

TEST_CASE("path cost components follow the definitions") {
  const GaitGraph g = build_graph(GaitParams{});
  GaitWeights w;
  const GaitPath ds = select_mode(g, g.node_id("DS_A"), false, w, GaitMode::DS);
  const PathCost c = path_cost(g, ds.edge_ids, false, w);

  Scalar j_s = 0, j_t = 0;
  for (int eid : ds.edge_ids) {
    const GaitEdge& e = g.edge(eid);
    j_s += (g.node(e.from).key_state() - g.node(e.to).key_state()).squaredNorm();
    j_t += e.t_i;
  }
  CHECK(c.J_s == doctest::Approx(j_s).epsilon(1e-12));
  CHECK(c.J_t == doctest::Approx(j_t).epsilon(1e-12));
  CHECK(c.J_dst == 0.0);  // exactly zero without a disturbance
  CHECK(c.J_path ==
        doctest::Approx(w.alpha_g * j_s + w.beta_g * j_t).epsilon(1e-12));
}

TEST_CASE("identical consecutive key poses contribute nothing to J_s") {
  GaitGraph g = build_graph(GaitParams{});
  GaitWeights w;
  const GaitPath ds = select_mode(g, g.node_id("DS_A"), false, w, GaitMode::DS);
  const PathCost before = path_cost(g, ds.edge_ids, false, w);
  const GaitEdge& first = g.edge(ds.edge_ids[0]);
  const Scalar first_term =
      (g.node(first.from).key_state() - g.node(first.to).key_state()).squaredNorm();
  g.nodes[first.to].key_angles = g.nodes[first.from].key_angles;  // collapse one edge
  const PathCost after = path_cost(g, ds.edge_ids, false, w);
  CHECK(after.J_s < before.J_s);
  CHECK(before.J_s - after.J_s >= first_term - 1e-12);
}

TEST_CASE("a disturbance penalizes the DS path strictly more than the QS path") {
  const GaitGraph g = build_graph(GaitParams{});
  GaitWeights w;
  const GaitPath ds = select_mode(g, g.node_id("DS_A"), false, w, GaitMode::DS);
  const GaitPath qs = select_mode(g, g.node_id("QS_A"), false, w, GaitMode::QS);

  const PathCost ds0 = path_cost(g, ds.edge_ids, false, w);
  const PathCost ds1 = path_cost(g, ds.edge_ids, true, w);
  const PathCost qs0 = path_cost(g, qs.edge_ids, false, w);
  const PathCost qs1 = path_cost(g, qs.edge_ids, true, w);

  CHECK(ds1.J_path == doctest::Approx(ds0.J_path + w.gamma_g * w.delta_ds));
  CHECK(qs1.J_path == doctest::Approx(qs0.J_path + w.gamma_g * w.delta_qs));
  CHECK(ds1.J_path - ds0.J_path > qs1.J_path - qs0.J_path);
}

TEST_CASE("path cost insists on four edges") {
  const GaitGraph g = build_graph(GaitParams{});
  CHECK_THROWS_AS(path_cost(g, {0, 1}, false, GaitWeights{}), WrongPathLength);
}

TEST_CASE("detector fires on per-axis pose jumps and inclusive force steps") {
  DisturbanceDetector d;
  CHECK(!d.update(Vec3::Zero(), Vec3::Zero(), Vec3::Zero()));  // priming
  CHECK(!d.update(Vec3(0.01, 0.0, 0.0), Vec3::Zero(), Vec3::Zero()));
  CHECK(d.update(Vec3(0.01, 0.1, 0.0), Vec3::Zero(), Vec3::Zero()));  // pitch jump
  // Force step exactly at the threshold is inclusive.
  CHECK(d.update(Vec3(0.01, 0.1, 0.0), Vec3(3.0, 0, 0), Vec3::Zero()));
  CHECK(!d.update(Vec3(0.01, 0.1, 0.0), Vec3(3.0, 0, 0), Vec3::Zero()));
}

TEST_CASE("mode selection prefers speed without disturbance, safety with one") {
  const GaitGraph g = build_graph(GaitParams{});
  GaitWeights w;  // defaults: delta_ds = 10, delta_qs = 1

  const GaitPath calm = select_mode(g, g.node_id("DS_A"), false, w);
  CHECK(calm.mode == GaitMode::DS);

  const GaitPath alarmed = select_mode(g, g.node_id("DS_A"), true, w);
  CHECK(alarmed.mode == GaitMode::QS);

  // Already on the QS cycle with the flag still set: stay there.
  const GaitPath staying = select_mode(g, g.node_id("QS_A"), true, w);
  CHECK(staying.mode == GaitMode::QS);
}

TEST_CASE("mode selection is a pure function of its inputs") {
  const GaitGraph g = build_graph(GaitParams{});
  GaitWeights w;
  const GaitPath a = select_mode(g, g.node_id("DS_B"), true, w);
  for (int i = 0; i < 10; ++i) {
    const GaitPath b = select_mode(g, g.node_id("DS_B"), true, w);
    CHECK(a.edge_ids == b.edge_ids);
    CHECK(a.cost.J_path == b.cost.J_path);
  }
}

TEST_CASE("restricting to the other cycle leaves no admissible path") {
  const GaitGraph g = build_graph(GaitParams{});
  CHECK_THROWS_AS(select_mode(g, g.node_id("QS_A"), false, GaitWeights{}, GaitMode::DS),
                  NoAdmissiblePath);
}

TEST_CASE("every admissible walk alternates support feet") {
  const GaitGraph g = build_graph(GaitParams{});
  for (const GaitNode& start : g.nodes) {
    std::vector<std::vector<int>> walks;
    std::vector<int> nodes{start.id};
    walk(g, start.id, 0, nodes, walks);
    CHECK(!walks.empty());
    for (const auto& seq : walks) {
      SupportPhase last_ss = SupportPhase::QS;  // none yet
      bool have_ss = false;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const SupportPhase a = g.node(seq[i]).phase;
        const SupportPhase b = g.node(seq[i + 1]).phase;
        CHECK(is_ss(a) != is_ss(b));  // SS and connect nodes alternate
        if (is_ss(b)) {
          if (have_ss) CHECK(b != last_ss);  // left and right alternate
          last_ss = b;
          have_ss = true;
        }
      }
    }
  }
}

TEST_CASE("the disturbance flag never lowers a path cost") {
  const GaitGraph g = build_graph(GaitParams{});
  GaitWeights w;
  for (const GaitNode& start : g.nodes) {
    std::vector<std::vector<int>> walks;
    std::vector<int> nodes{start.id};
    walk(g, start.id, 0, nodes, walks);
    // Rebuild edge sequences for costing.
    std::vector<std::vector<int>> edge_walks;
    std::function<void(int, int, std::vector<int>&)> collect =
        [&](int node, int depth, std::vector<int>& edges) {
          if (depth == 4) {
            edge_walks.push_back(edges);
            return;
          }
          for (int eid : g.out_edges[node]) {
            edges.push_back(eid);
            collect(g.edge(eid).to, depth + 1, edges);
            edges.pop_back();
          }
        };
    std::vector<int> edges;
    collect(start.id, 0, edges);
    for (const auto& path : edge_walks) {
      const PathCost calm = path_cost(g, path, false, w);
      const PathCost alarmed = path_cost(g, path, true, w);
      CHECK(alarmed.J_path >= calm.J_path);
    }
  }
}

TEST_CASE("a whole-edge sampling step yields exactly the two key poses") {
  const GaitGraph g = build_graph(GaitParams{});
  GaitPath path;
  path.edge_ids = {0, 1, 2, 3};  // DS principal cycle
  path.node_ids = {0, 1, 2, 3, 0};
  path.mode = GaitMode::DS;

  GaitPath single = path;
  single.edge_ids = {0};
  single.node_ids = {0, 1};
  const Scalar t_i = g.edge(0).t_i;
  const ReferenceTrajectory traj = reference_trajectory(g, single, t_i);
  REQUIRE(traj.samples.size() == 2);
  CHECK((traj.samples.front().angles.vector() - g.node(0).key_angles.vector()).norm() <=
        1e-12);
  CHECK((traj.samples.back().angles.vector() - g.node(1).key_angles.vector()).norm() <=
        1e-12);
}

TEST_CASE("interpolation follows the smooth-step blend on a landing edge") {
  const GaitGraph g = build_graph(GaitParams{});
  const GaitEdge& e = g.edge(1);  // SS_R_ds -> DS_B, a landing edge
  const Scalar move = e.t_i * (1 - g.params.dwell_frac);
  const Scalar tau = 0.4 * move;
  const ReferenceSample s = evaluate_edge(g, e.id, tau);
  const Scalar x = tau / move;
  const Scalar blend = x * x * (3 - 2 * x);
  const Vec3 expected = g.node(e.from).key_angles.vector() +
                        blend * (g.node(e.to).key_angles.vector() -
                                 g.node(e.from).key_angles.vector());
  CHECK((s.angles.vector() - expected).norm() <= 1e-12);
}

TEST_CASE("reference rates are consistent with the Euler-rate map") {
  const GaitGraph g = build_graph(GaitParams{});
  GaitPath path;
  path.edge_ids = {4, 5, 6, 7};  // QS principal cycle
  path.node_ids = {4, 5, 6, 7, 4};
  path.mode = GaitMode::QS;
  const Scalar T = 0.02;
  const ReferenceTrajectory traj = reference_trajectory(g, path, T);
  Scalar worst = 0;
  for (std::size_t k = 1; k + 1 < traj.samples.size(); ++k) {
    if (traj.edge_of_sample[k - 1] != traj.edge_of_sample[k + 1]) continue;
    const Vec3 fd =
        (traj.samples[k + 1].angles.vector() - traj.samples[k - 1].angles.vector()) /
        (2 * T);
    const Mat3 w = euler_rate_matrix(traj.samples[k].angles);
    worst = std::max(worst, (fd - w * traj.samples[k].omega).norm());
  }
  CHECK(worst <= 0.05);  // first order in the sampling period
}

TEST_CASE("landing edges expose a touchdown window and a gravity ramp") {
  const GaitGraph g = build_graph(GaitParams{});
  const GaitEdge& e = g.edge(1);  // SS_R_ds -> DS_B
  const ReferenceSample early = evaluate_edge(g, e.id, 0.1 * e.t_i);
  CHECK(!early.touchdown_window);
  CHECK(early.phase == SupportPhase::SS_right);
  CHECK(early.gravity_projection.isIdentity(1e-12));

  const ReferenceSample late = evaluate_edge(g, e.id, e.t_i);
  CHECK(late.touchdown_window);
  CHECK(late.phase == SupportPhase::DS);
  // Fully ramped out: only the support-edge axis component is left.
  CHECK(late.gravity_projection.norm() <= 1.0 + 1e-9);
}

TEST_SUITE_END();
