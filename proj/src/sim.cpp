#include "pivot/sim.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "pivot/dynamics.hpp"
#include "pivot/errors.hpp"

namespace pivot {

Vec3 impedance_update(const Vec3& v_ref, const Vec3& f_ref, const Vec3& f_measured,
                      const Mat3& d_imp) {
  if (!d_imp.isApprox(d_imp.transpose(), 1e-9))
    throw SingularDamping("impedance_update: damping matrix must be symmetric");
  Eigen::LLT<Mat3> llt(d_imp);
  if (llt.info() != Eigen::Success)
    throw SingularDamping("impedance_update: damping matrix must be positive definite");
  return v_ref + llt.solve(f_measured - f_ref);
}

Vec3 contact_force_model(ContactChannel& channel, const FrictionModel& fm, int contact,
                         const Vec3& f_ref, const Vec3& v_cmd, const Vec3& v_contact,
                         const Vec3& n_in, const ContactConfig& config, Scalar dt) {
  channel.deflection += (v_cmd - v_contact).dot(n_in) * dt;
  if (channel.deflection < -config.separation_tol)
    throw ContactLost("contact_force_model: hand separated beyond tolerance");
  const Vec3 raw = f_ref + config.k_env * channel.deflection * n_in;
  return clamp_to_friction_cone(fm, contact, raw);
}

SupportState phase_transition(const ObjectModel& model, ObjectState& state,
                              const ReferenceSample& annotation,
                              SupportPhase landing_phase, const ContactConfig& config) {
  if (!state.support.is_single_support()) return state.support;
  const auto verts = world_vertices(model, state);
  const int pivot_idx = static_cast<int>(state.support.pivot_vertex());

  std::array<bool, 4> landing{false, false, false, false};
  if (annotation.touchdown_window) {
    if (landing_phase == SupportPhase::DS) {
      landing[static_cast<int>(VertexId::FrontRight)] = true;
      landing[static_cast<int>(VertexId::FrontLeft)] = true;
    } else if (landing_phase == SupportPhase::QS) {
      landing = {true, true, true, true};
    }
  }

  bool touchdown = false;
  for (int i = 0; i < 4; ++i) {
    if (i == pivot_idx) continue;
    const Scalar z = verts[i].z();
    if (landing[i]) {
      if (z <= config.contact_tol) touchdown = true;
    } else if (z < -config.scuff_tol) {
      throw ScuffDetected(std::string("vertex ") + vertex_label(VertexId(i)) +
                          " hit the ground outside a touchdown window");
    }
  }
  if (!touchdown) return state.support;

  // Inelastic landing: snap onto the contact manifold about the pinned pivot
  // and absorb the remaining rate.
  state.angles.phi = 0;
  if (landing_phase == SupportPhase::QS) state.angles.theta = 0;
  state.omega.setZero();
  const Vec3 pivot_body = model.bottom_vertex(state.support.pivot_vertex());
  state.position = state.support.pivot - rotation_from_euler(state.angles) * pivot_body;
  return landing_phase == SupportPhase::QS ? SupportState::quad_support()
                                           : SupportState::double_support();
}

namespace {

// Deterministic splitmix64 stream; identical across platforms and runs.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  Scalar sym() { return 2.0 * ((next() >> 11) * 0x1.0p-53) - 1.0; }
  Vec3 sym3(Scalar scale) {
    const Scalar a = sym(), b = sym(), c = sym();
    return scale * Vec3(a, b, c);
  }
};

Vec3 inward_normal_body(int contact) {
  return contact == 0 ? Vec3(0, -1, 0) : Vec3(0, 1, 0);
}

}  // namespace

SimLog run(const Scenario& sc) {
  const auto wall_start = std::chrono::steady_clock::now();
  SimLog log;
  RunSummary& sum = log.summary;

  GaitGraph graph = build_graph(sc.gait);
  const Scalar T = sc.mpc.T;
  const Scalar dt = T / 10.0;
  Rng rng(sc.seed);
  QpSolver solver;

  int current_node = graph.node_id(sc.initial_node);
  {
    const SupportPhase ph = graph.node(current_node).phase;
    if (ph != SupportPhase::DS && ph != SupportPhase::QS)
      throw InvalidParams("run: initial node must be a DS or QS node");
  }

  // Plant, pinned with the front-right vertex of the initial pose at the origin.
  ObjectModel plant_model = sc.object;
  ObjectState plant;
  plant.angles = graph.node(current_node).key_angles;
  plant.position =
      -plant.rotation() * sc.object.bottom_vertex(VertexId::FrontRight);
  plant.support = graph.node(current_node).phase == SupportPhase::DS
                      ? SupportState::double_support()
                      : SupportState::quad_support();
  bool locked = true;
  std::array<ContactChannel, 2> channels{};
  std::array<Vec3, 2> f_applied{Vec3::Zero(), Vec3::Zero()};

  DisturbanceDetector detector = sc.detector;
  detector.primed = false;

  std::optional<GaitMode> restrict_mode;
  if (!sc.allow_switching) restrict_mode = graph.node(current_node).cycle;
  GaitPath path = select_mode(graph, current_node, false, sc.weights, restrict_mode);
  int cur_edge = path.edge_ids[0];
  GaitMode cur_mode = graph.edge(cur_edge).cycle;
  Scalar edge_start_t = 0;
  int flag_edges = 0;

  Vec3 psi_prev_sensed = Vec3::Zero();
  bool have_prev = false;
  Vec3 omega_hat = Vec3::Zero();

  std::size_t next_event = 0;
  Vec3 push_force = Vec3::Zero();
  Scalar push_until = -1;

  int steps_done = 0;
  int consec_infeasible = 0;
  std::vector<ActiveConstraint> warm;

  std::vector<Scalar> edge_max_err;
  Scalar cur_edge_err = 0;

  Scalar longest_edge = 0;
  for (const GaitEdge& e : graph.edges) longest_edge = std::max(longest_edge, e.t_i);
  const Scalar t_max = (sc.goal_steps * 2 + 4) * longest_edge + 5.0;

  bool done = false;
  Scalar now = 0;
  auto fail = [&](const std::string& reason, const std::string& detail) {
    sum.completed = false;
    sum.reason = reason;
    sum.detail = detail;
    sum.sim_time = now;
    done = true;
  };

  for (int k = 0; !done; ++k) {
    const Scalar t = k * T;
    now = t;
    if (t > t_max) {
      fail("timeout", "exceeded safety horizon");
      break;
    }

    // Node boundaries: advance the walk, re-select the path, splice in the
    // next edge. Only the first edge of the selected path is ever executed.
    while (!done && t >= edge_start_t + graph.edge(cur_edge).t_i - 1e-9) {
      const GaitEdge finished = graph.edge(cur_edge);
      const SupportPhase to_phase = graph.node(finished.to).phase;
      const bool was_lift =
          to_phase == SupportPhase::SS_left || to_phase == SupportPhase::SS_right;
      if (was_lift && locked) {
        fail("fall", "liftoff did not happen within the lift edge");
        break;
      }
      if (!was_lift && !locked) {
        fail("fall", "missed touchdown at the end of a landing edge");
        break;
      }
      current_node = finished.to;
      edge_start_t += finished.t_i;
      edge_max_err.push_back(cur_edge_err);
      cur_edge_err = 0;
      if (flag_edges > 0) --flag_edges;

      if (steps_done >= sc.goal_steps && !was_lift) {
        sum.completed = true;
        sum.reason = "goal_reached";
        sum.sim_time = edge_start_t;
        done = true;
        break;
      }

      path = select_mode(graph, current_node, flag_edges > 0, sc.weights, restrict_mode);
      const GaitEdge& next_edge = graph.edge(path.edge_ids[0]);
      if (next_edge.cycle != cur_mode) {
        sum.switches.push_back({edge_start_t, cur_mode, next_edge.cycle});
        cur_mode = next_edge.cycle;
      }
      cur_edge = next_edge.id;
    }
    if (done) break;

    // Scripted disturbances due within this control period.
    while (next_event < sc.events.size() && sc.events[next_event].time < t + T) {
      const DisturbanceEvent& ev = sc.events[next_event++];
      switch (ev.kind) {
        case DisturbanceEvent::Kind::Payload:
          plant_model = add_payload(plant_model, ev.mass, ev.position);
          break;
        case DisturbanceEvent::Kind::Impulse:
          plant.omega += ev.delta_omega;
          break;
        case DisturbanceEvent::Kind::Push:
          push_force = ev.force;
          push_until = ev.time + ev.duration;
          break;
      }
    }
    if (push_until >= 0 && t >= push_until) {
      push_force.setZero();
      push_until = -1;
    }

    // Sensors.
    const Vec3 psi_sensed = plant.angles.vector() + rng.sym3(sc.noise.pose_rad);
    const Vec3 p_sensed = plant.position + rng.sym3(sc.noise.pos_m);
    std::array<Vec3, 2> f_meas;
    for (int i = 0; i < 2; ++i) f_meas[i] = f_applied[i] + rng.sym3(sc.noise.force_n);

    // Rate estimate: filtered finite difference of the sensed pose.
    if (have_prev) {
      Vec3 omega_raw = omega_hat;
      try {
        const Mat3 w = euler_rate_matrix(EulerAngles::FromVector(psi_sensed));
        omega_raw = w.inverse() * ((psi_sensed - psi_prev_sensed) / T);
      } catch (const SingularConfiguration&) {
      }
      const Scalar a = T / std::max(sc.omega_filter_tau, T);
      omega_hat += a * (omega_raw - omega_hat);
    }
    psi_prev_sensed = psi_sensed;
    have_prev = true;

    const bool flag_now = detector.update(psi_sensed, f_meas[0], f_meas[1]);
    if (flag_now) {
      flag_edges = 4;
      if (sum.first_detection_time < 0) sum.first_detection_time = t;
    }

    const Scalar tau = t - edge_start_t;
    const ReferenceSample ann = evaluate_edge(graph, cur_edge, tau);
    const SupportPhase ss_side = ann.pivot == VertexId::FrontLeft
                                     ? SupportPhase::SS_left
                                     : SupportPhase::SS_right;

    // Controller state from the sensors.
    ObjectState ctl;
    ctl.angles = EulerAngles::FromVector(psi_sensed);
    ctl.omega = omega_hat;
    ctl.position = p_sensed;
    const Mat3 r_ctl = ctl.rotation();
    ctl.support = SupportState::single(
        ss_side, p_sensed + r_ctl * sc.object.bottom_vertex(ann.pivot));

    ControlOutput out;
    try {
      const Vec3 p1 = p_sensed + r_ctl * sc.object.grasp_point(0);
      const Vec3 p2 = p_sensed + r_ctl * sc.object.grasp_point(1);
      const StepMatrices lin =
          linearize(sc.object, ctl, p1, p2, T, ann.gravity_projection);
      const PredictionBundle bundle = stack_prediction(lin, sc.mpc.n_p);
      VecX x_ref(6 * sc.mpc.n_p);
      for (int j = 1; j <= sc.mpc.n_p; ++j)
        x_ref.segment<6>(6 * (j - 1)) =
            evaluate_edge(graph, cur_edge, tau + j * T).state_vector();
      const FrictionModel fm_ctl = make_friction_model(sc.object, ctl, sc.mpc);
      out = assemble_and_solve(sc.object, ctl, x_ref, bundle, sc.mpc, fm_ctl, solver,
                               warm);
      warm = out.active_set;
    } catch (const SingularConfiguration& e) {
      fail("fall", std::string("controller singularity: ") + e.what());
      break;
    }

    if (out.qp_status == QpStatus::Infeasible) {
      if (++consec_infeasible >= 3) {
        fail("infeasible", "three consecutive infeasible control steps");
        break;
      }
    } else {
      consec_infeasible = 0;
    }

    // Impedance layer works on the reaction forces the wrist sensors feel.
    std::array<Vec3, 2> v_cmd;
    for (int i = 0; i < 2; ++i) {
      const Vec3 v_ref = contact_point_velocity(sc.object, ctl, i).velocity;
      v_cmd[i] = impedance_update(v_ref, -out.f_ref[i], -f_meas[i], sc.d_imp);
    }

    // Realized forces for this period (zero-order hold), cone-capped at the
    // state they are applied from.
    const Mat3 r_plant = plant.rotation();
    const FrictionModel fm_plant = make_friction_model(plant_model, plant, sc.mpc);
    std::array<Vec3, 2> v_contact{Vec3::Zero(), Vec3::Zero()};
    if (!locked) {
      for (int i = 0; i < 2; ++i)
        v_contact[i] = plant.omega.cross(plant.position +
                                         r_plant * sc.object.grasp_point(i) -
                                         plant.support.pivot);
    }
    bool contact_failed = false;
    for (int i = 0; i < 2 && !contact_failed; ++i) {
      const Vec3 n_in = r_plant * inward_normal_body(i);
      try {
        f_applied[i] = contact_force_model(channels[i], fm_plant, i, out.f_ref[i],
                                           v_cmd[i], v_contact[i], n_in, sc.contact, T);
      } catch (const ContactLost& e) {
        fail("contact_lost", e.what());
        contact_failed = true;
      }
      sum.max_cone_violation = std::max(
          sum.max_cone_violation, friction_cone_violation(fm_plant, i, f_applied[i]));
    }

    // Log the state the forces are applied from.
    {
      StepRecord rec;
      rec.t = t;
      rec.euler_true = plant.angles.vector();
      rec.omega_true = plant.omega;
      rec.p_b = plant.position;
      rec.euler_sensed = psi_sensed;
      rec.euler_ref = ann.angles.vector();
      rec.omega_ref = ann.omega;
      rec.f_applied = f_applied;
      rec.f_ref = out.f_ref;
      rec.qp_status = out.qp_status;
      rec.qp_iterations = out.qp_iterations;
      rec.qp_residual = out.qp_residual;
      rec.active_node = current_node;
      rec.edge_id = cur_edge;
      rec.path_cost = path.cost;
      rec.detector_flag = flag_edges > 0;
      rec.phase = locked ? plant.support.phase : ss_side;
      log.records.push_back(rec);
    }
    if (done) break;

    cur_edge_err = std::max(
        cur_edge_err,
        (plant.angles.vector() - ann.angles.vector()).cwiseAbs().maxCoeff());

    // Release test: the plan is in single support but the plant still rests
    // on the connect contact; lift only once the net torque raises every
    // grounded swing vertex.
    if (locked &&
        (ann.phase == SupportPhase::SS_left || ann.phase == SupportPhase::SS_right)) {
      const Vec3 p0 =
          plant.position + r_plant * sc.object.bottom_vertex(ann.pivot);
      const Vec3 com = com_world(plant_model, plant);
      Vec3 tau_net = (com - p0).cross(plant_model.mass * plant_model.gravity) +
                     (com - p0).cross(push_force);
      for (int i = 0; i < 2; ++i)
        tau_net += (plant.position + r_plant * sc.object.grasp_point(i) - p0)
                       .cross(f_applied[i]);
      ObjectState trial = plant;
      trial.support = SupportState::single(ss_side, p0);
      const Mat3 iw = world_inertia_about_pivot(plant_model, trial);
      const Vec3 omega_dot = iw.ldlt().solve(tau_net);
      const auto verts = world_vertices(plant_model, plant);
      bool lift = true;
      for (int i = 0; i < 4; ++i) {
        if (i == static_cast<int>(ann.pivot) || !plant.support.active[i]) continue;
        if (omega_dot.cross(verts[i] - p0).z() <= 0) {
          lift = false;
          break;
        }
      }
      if (lift) {
        plant.support = trial.support;
        locked = false;
      }
    }

    // Plant integration at dt = T/10.
    if (!locked) {
      const SupportPhase landing_phase = graph.node(graph.edge(cur_edge).to).phase;
      try {
        for (int s = 0; s < 10; ++s) {
          const Vec3 tau_push =
              push_force.isZero()
                  ? Vec3::Zero()
                  : (com_world(plant_model, plant) - plant.support.pivot)
                        .cross(push_force);
          plant = step_nonlinear(plant_model, plant, f_applied[0], f_applied[1], dt,
                                 tau_push);
          const SupportState after =
              phase_transition(plant_model, plant, ann, landing_phase, sc.contact);
          if (after.phase != plant.support.phase) {
            plant.support = after;
            locked = true;
            for (auto& ch : channels) ch.deflection = 0;
            ++steps_done;
            const auto vw = world_vertices(plant_model, plant);
            for (int i = 0; i < 4; ++i)
              if (after.active[i])
                log.footprints.push_back(
                    {steps_done, static_cast<VertexId>(i), vw[i].x(), vw[i].y()});
            break;
          }
        }
      } catch (const ScuffDetected& e) {
        fail("scuff", e.what());
      } catch (const SingularConfiguration& e) {
        fail("fall", e.what());
      }
      if (!done && plant.support.is_single_support()) {
        const Vec3 pivot_now =
            plant.position +
            plant.rotation() * sc.object.bottom_vertex(plant.support.pivot_vertex());
        sum.max_pivot_drift = std::max(sum.max_pivot_drift,
                                       (pivot_now - plant.support.pivot).norm());
      }
    }
    if (!done && (std::abs(plant.angles.phi) > sc.fall_angle ||
                  std::abs(plant.angles.theta) > sc.fall_angle)) {
      fail("fall", "tilt beyond the recoverable range");
    }
  }

  edge_max_err.push_back(cur_edge_err);
  for (std::size_t i = 1; i < edge_max_err.size(); ++i)
    sum.tracking_error_after_transient =
        std::max(sum.tracking_error_after_transient, edge_max_err[i]);
  for (std::size_t i = edge_max_err.size(); i-- > 0;) {
    if (edge_max_err[i] > 0) {
      sum.tracking_error_last_edge = edge_max_err[i];
      break;
    }
  }

  sum.steps_completed = steps_done;
  if (sum.reason.empty()) {
    sum.completed = false;
    sum.reason = "timeout";
    sum.detail = "loop ended without a terminal condition";
    sum.sim_time = now;
  }
  sum.wall_ms = std::chrono::duration<Scalar, std::milli>(
                    std::chrono::steady_clock::now() - wall_start)
                    .count();
  return log;
}

}  // namespace pivot
