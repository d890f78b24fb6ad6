#include "pivot/scenario_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pivot/errors.hpp"

namespace pivot {

using nlohmann::json;

namespace {

json vec_to_json(const VecX& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec3 vec3_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    throw ParseError(key + ": expected an array of 3 numbers");
  return Vec3(j[0].get<Scalar>(), j[1].get<Scalar>(), j[2].get<Scalar>());
}

Vec6 vec6_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 6)
    throw ParseError(key + ": expected an array of 6 numbers");
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = j[i].get<Scalar>();
  return v;
}

void check_keys(const json& j, const std::string& scope,
                std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ParseError("unknown key '" + scope + it.key() + "'");
  }
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["object"] = {
      {"dimensions", vec_to_json(sc.object.dimensions)},
      {"mass", sc.object.mass},
      {"com_body", vec_to_json(sc.object.com_body)},
      {"gravity", vec_to_json(sc.object.gravity)},
      {"grasp_left", vec_to_json(sc.object.grasp_left)},
      {"grasp_right", vec_to_json(sc.object.grasp_right)},
  };
  j["mpc"] = {
      {"alpha", sc.mpc.alpha},         {"beta", sc.mpc.beta},
      {"n_p", sc.mpc.n_p},             {"T", sc.mpc.T},
      {"k_v", vec_to_json(sc.mpc.k_v)}, {"f_n_max", sc.mpc.f_n_max},
      {"mu", sc.mpc.mu},               {"hand_radius", sc.mpc.hand_radius},
  };
  j["gait"] = {
      {"step_length", sc.gait.step_length},
      {"ds_roll_peak", sc.gait.ds_roll_peak},
      {"qs_roll_peak", sc.gait.qs_roll_peak},
      {"ds_pitch", sc.gait.ds_pitch},
      {"qs_pitch_peak", sc.gait.qs_pitch_peak},
      {"ds_edge_time", sc.gait.ds_edge_time},
      {"qs_edge_time", sc.gait.qs_edge_time},
      {"switch_edge_time", sc.gait.switch_edge_time},
      {"dwell_frac", sc.gait.dwell_frac},
      {"ramp_time", sc.gait.ramp_time},
      {"window_frac", sc.gait.window_frac},
  };
  j["weights"] = {
      {"alpha_g", sc.weights.alpha_g}, {"beta_g", sc.weights.beta_g},
      {"gamma_g", sc.weights.gamma_g}, {"delta_ds", sc.weights.delta_ds},
      {"delta_qs", sc.weights.delta_qs},
  };
  j["detector"] = {
      {"psi_thr", vec_to_json(sc.detector.psi_thr)},
      {"f_thr", sc.detector.f_thr},
      {"per_axis", sc.detector.per_axis},
  };
  j["allow_switching"] = sc.allow_switching;
  j["initial_node"] = sc.initial_node;
  j["goal_steps"] = sc.goal_steps;
  j["events"] = json::array();
  for (const DisturbanceEvent& ev : sc.events) {
    json e;
    e["time"] = ev.time;
    switch (ev.kind) {
      case DisturbanceEvent::Kind::Payload:
        e["kind"] = "payload";
        e["mass"] = ev.mass;
        e["position"] = vec_to_json(ev.position);
        break;
      case DisturbanceEvent::Kind::Impulse:
        e["kind"] = "impulse";
        e["delta_omega"] = vec_to_json(ev.delta_omega);
        break;
      case DisturbanceEvent::Kind::Push:
        e["kind"] = "push";
        e["force"] = vec_to_json(ev.force);
        e["duration"] = ev.duration;
        break;
    }
    j["events"].push_back(e);
  }
  j["noise"] = {
      {"pose_rad", sc.noise.pose_rad},
      {"pos_m", sc.noise.pos_m},
      {"force_n", sc.noise.force_n},
  };
  j["impedance"] = {{"d_imp", vec_to_json(sc.d_imp.diagonal())}};
  j["contact"] = {
      {"k_env", sc.contact.k_env},
      {"contact_tol", sc.contact.contact_tol},
      {"scuff_tol", sc.contact.scuff_tol},
      {"separation_tol", sc.contact.separation_tol},
  };
  j["omega_filter_tau"] = sc.omega_filter_tau;
  j["fall_angle"] = sc.fall_angle;
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario sc = make_default_scenario();
  check_keys(j, "",
             {"name", "seed", "object", "mpc", "gait", "weights", "detector",
              "allow_switching", "initial_node", "goal_steps", "events", "noise",
              "impedance", "contact", "omega_filter_tau", "fall_angle"});

  if (j.contains("name")) sc.name = j["name"].get<std::string>();
  if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("object")) {
    const json& o = j["object"];
    check_keys(o, "object.",
               {"dimensions", "mass", "com_body", "gravity", "grasp_left",
                "grasp_right"});
    Vec3 dims = sc.object.dimensions;
    Scalar mass = sc.object.mass;
    if (o.contains("dimensions")) dims = vec3_from_json(o["dimensions"], "object.dimensions");
    if (o.contains("mass")) mass = o["mass"].get<Scalar>();
    if (mass <= 0 || (dims.array() <= 0).any())
      throw ValidationError("invalid scenario",
                            {"object.mass and object.dimensions must be positive"});
    sc.object = make_box(mass, dims);
    if (o.contains("com_body"))
      sc.object.com_body = vec3_from_json(o["com_body"], "object.com_body");
    if (o.contains("gravity"))
      sc.object.gravity = vec3_from_json(o["gravity"], "object.gravity");
    if (o.contains("grasp_left"))
      sc.object.grasp_left = vec3_from_json(o["grasp_left"], "object.grasp_left");
    if (o.contains("grasp_right"))
      sc.object.grasp_right = vec3_from_json(o["grasp_right"], "object.grasp_right");
  }

  if (j.contains("mpc")) {
    const json& m = j["mpc"];
    check_keys(m, "mpc.",
               {"alpha", "beta", "n_p", "T", "k_v", "f_n_max", "mu", "hand_radius"});
    if (m.contains("alpha")) sc.mpc.alpha = m["alpha"].get<Scalar>();
    if (m.contains("beta")) sc.mpc.beta = m["beta"].get<Scalar>();
    if (m.contains("n_p")) sc.mpc.n_p = m["n_p"].get<int>();
    if (m.contains("T")) sc.mpc.T = m["T"].get<Scalar>();
    if (m.contains("k_v")) sc.mpc.k_v = vec6_from_json(m["k_v"], "mpc.k_v");
    if (m.contains("f_n_max")) sc.mpc.f_n_max = m["f_n_max"].get<Scalar>();
    if (m.contains("mu")) sc.mpc.mu = m["mu"].get<Scalar>();
    if (m.contains("hand_radius")) sc.mpc.hand_radius = m["hand_radius"].get<Scalar>();
  }

  if (j.contains("gait")) {
    const json& g = j["gait"];
    check_keys(g, "gait.",
               {"step_length", "ds_roll_peak", "qs_roll_peak", "ds_pitch",
                "qs_pitch_peak", "ds_edge_time", "qs_edge_time", "switch_edge_time",
                "dwell_frac", "ramp_time", "window_frac"});
    auto rd = [&g](const char* k, Scalar& out) {
      if (g.contains(k)) out = g[k].get<Scalar>();
    };
    rd("step_length", sc.gait.step_length);
    rd("ds_roll_peak", sc.gait.ds_roll_peak);
    rd("qs_roll_peak", sc.gait.qs_roll_peak);
    rd("ds_pitch", sc.gait.ds_pitch);
    rd("qs_pitch_peak", sc.gait.qs_pitch_peak);
    rd("ds_edge_time", sc.gait.ds_edge_time);
    rd("qs_edge_time", sc.gait.qs_edge_time);
    rd("switch_edge_time", sc.gait.switch_edge_time);
    rd("dwell_frac", sc.gait.dwell_frac);
    rd("ramp_time", sc.gait.ramp_time);
    rd("window_frac", sc.gait.window_frac);
  }
  sc.gait.edge_width = sc.object.dimensions.y();

  if (j.contains("weights")) {
    const json& w = j["weights"];
    check_keys(w, "weights.", {"alpha_g", "beta_g", "gamma_g", "delta_ds", "delta_qs"});
    if (w.contains("alpha_g")) sc.weights.alpha_g = w["alpha_g"].get<Scalar>();
    if (w.contains("beta_g")) sc.weights.beta_g = w["beta_g"].get<Scalar>();
    if (w.contains("gamma_g")) sc.weights.gamma_g = w["gamma_g"].get<Scalar>();
    if (w.contains("delta_ds")) sc.weights.delta_ds = w["delta_ds"].get<Scalar>();
    if (w.contains("delta_qs")) sc.weights.delta_qs = w["delta_qs"].get<Scalar>();
  }

  if (j.contains("detector")) {
    const json& d = j["detector"];
    check_keys(d, "detector.", {"psi_thr", "f_thr", "per_axis"});
    if (d.contains("psi_thr"))
      sc.detector.psi_thr = vec3_from_json(d["psi_thr"], "detector.psi_thr");
    if (d.contains("f_thr")) sc.detector.f_thr = d["f_thr"].get<Scalar>();
    if (d.contains("per_axis")) sc.detector.per_axis = d["per_axis"].get<bool>();
  }
  sc.detector.delta_ds = sc.weights.delta_ds;
  sc.detector.delta_qs = sc.weights.delta_qs;

  if (j.contains("allow_switching")) sc.allow_switching = j["allow_switching"].get<bool>();
  if (j.contains("initial_node")) sc.initial_node = j["initial_node"].get<std::string>();
  if (j.contains("goal_steps")) sc.goal_steps = j["goal_steps"].get<int>();

  if (j.contains("events")) {
    sc.events.clear();
    for (const json& e : j["events"]) {
      check_keys(e, "events[].",
                 {"time", "kind", "mass", "position", "delta_omega", "force",
                  "duration"});
      DisturbanceEvent ev;
      if (!e.contains("time") || !e.contains("kind"))
        throw ParseError("events[]: 'time' and 'kind' are required");
      ev.time = e["time"].get<Scalar>();
      const std::string kind = e["kind"].get<std::string>();
      if (kind == "payload") {
        ev.kind = DisturbanceEvent::Kind::Payload;
        if (e.contains("mass")) ev.mass = e["mass"].get<Scalar>();
        if (e.contains("position"))
          ev.position = vec3_from_json(e["position"], "events[].position");
      } else if (kind == "impulse") {
        ev.kind = DisturbanceEvent::Kind::Impulse;
        if (e.contains("delta_omega"))
          ev.delta_omega = vec3_from_json(e["delta_omega"], "events[].delta_omega");
      } else if (kind == "push") {
        ev.kind = DisturbanceEvent::Kind::Push;
        if (e.contains("force")) ev.force = vec3_from_json(e["force"], "events[].force");
        if (e.contains("duration")) ev.duration = e["duration"].get<Scalar>();
      } else {
        throw ParseError("events[].kind: unknown kind '" + kind + "'");
      }
      sc.events.push_back(ev);
    }
  }

  if (j.contains("noise")) {
    const json& n = j["noise"];
    check_keys(n, "noise.", {"pose_rad", "pos_m", "force_n"});
    if (n.contains("pose_rad")) sc.noise.pose_rad = n["pose_rad"].get<Scalar>();
    if (n.contains("pos_m")) sc.noise.pos_m = n["pos_m"].get<Scalar>();
    if (n.contains("force_n")) sc.noise.force_n = n["force_n"].get<Scalar>();
  }

  if (j.contains("impedance")) {
    const json& im = j["impedance"];
    check_keys(im, "impedance.", {"d_imp"});
    if (im.contains("d_imp")) {
      const json& d = im["d_imp"];
      if (d.is_number()) {
        sc.d_imp = d.get<Scalar>() * Mat3::Identity();
      } else {
        sc.d_imp = vec3_from_json(d, "impedance.d_imp").asDiagonal();
      }
    }
  }

  if (j.contains("contact")) {
    const json& c = j["contact"];
    check_keys(c, "contact.", {"k_env", "contact_tol", "scuff_tol", "separation_tol"});
    if (c.contains("k_env")) sc.contact.k_env = c["k_env"].get<Scalar>();
    if (c.contains("contact_tol")) sc.contact.contact_tol = c["contact_tol"].get<Scalar>();
    if (c.contains("scuff_tol")) sc.contact.scuff_tol = c["scuff_tol"].get<Scalar>();
    if (c.contains("separation_tol"))
      sc.contact.separation_tol = c["separation_tol"].get<Scalar>();
  }

  if (j.contains("omega_filter_tau"))
    sc.omega_filter_tau = j["omega_filter_tau"].get<Scalar>();
  if (j.contains("fall_angle")) sc.fall_angle = j["fall_angle"].get<Scalar>();
  return sc;
}

void apply_override(json& j, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ParseError("override '" + spec + "': expected key=value");
  const std::string key = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);

  json* node = &j;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ParseError("override '" + spec + "': empty key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]))
      throw ParseError("override '" + key + "': unknown config key '" + parts[i] + "'");
    node = &(*node)[parts[i]];
  }
  if (!node->contains(parts.back()))
    throw ParseError("override '" + key + "': unknown config key '" + parts.back() + "'");
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // bare strings allowed
  (*node)[parts.back()] = parsed;
}

}  // namespace

Scenario make_default_scenario() {
  Scenario sc;
  sc.object = make_box(1.4, Vec3(0.6, 0.4, 0.2));
  sc.gait.edge_width = sc.object.dimensions.y();
  return sc;
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return scenario_from_json(j);
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::string serialize_scenario(const Scenario& sc) {
  return scenario_to_json(sc).dump(2) + "\n";
}

void validate_scenario(const Scenario& sc) {
  std::vector<std::string> issues;
  auto req = [&issues](bool ok, const std::string& msg) {
    if (!ok) issues.push_back(msg);
  };

  req(sc.object.mass > 0, "object.mass must be > 0");
  req((sc.object.dimensions.array() > 0).all(), "object.dimensions must be > 0");
  {
    const Mat3 sym = 0.5 * (sc.object.inertia + sc.object.inertia.transpose());
    req(sc.object.inertia.isApprox(sym, 1e-9), "object inertia must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat3> es(sym);
    req(es.eigenvalues().minCoeff() > 0, "object inertia must be positive definite");
  }
  {
    const Vec3 h = sc.object.dimensions / 2;
    auto on_surface = [&h](const Vec3& p) {
      const Vec3 a = p.cwiseAbs();
      if ((a.array() > h.array() + 1e-9).any()) return false;
      return std::abs(a.x() - h.x()) < 1e-9 || std::abs(a.y() - h.y()) < 1e-9 ||
             std::abs(a.z() - h.z()) < 1e-9;
    };
    req(on_surface(sc.object.grasp_left), "object.grasp_left must lie on the surface");
    req(on_surface(sc.object.grasp_right), "object.grasp_right must lie on the surface");
  }

  req(sc.mpc.alpha > 0, "mpc.alpha must be > 0");
  req(sc.mpc.beta > 0, "mpc.beta must be > 0");
  req(sc.mpc.n_p >= 1, "mpc.n_p must be >= 1");
  req(sc.mpc.T > 0, "mpc.T must be > 0");
  req(sc.mpc.mu > 0, "mpc.mu must be > 0");
  req(sc.mpc.f_n_max > 0, "mpc.f_n_max must be > 0");
  req(sc.mpc.hand_radius > 0, "mpc.hand_radius must be > 0");

  try {
    GaitGraph g = build_graph(sc.gait);
    bool found = false;
    for (const GaitNode& n : g.nodes)
      if (n.name == sc.initial_node)
        found = n.phase == SupportPhase::DS || n.phase == SupportPhase::QS;
    req(found, "initial_node must name a DS or QS graph node");
  } catch (const InvalidParams& e) {
    issues.push_back(std::string("gait: ") + e.what());
  }

  req(sc.weights.delta_ds > sc.weights.delta_qs,
      "weights.delta_ds must exceed weights.delta_qs");
  req(sc.weights.alpha_g >= 0 && sc.weights.beta_g >= 0 && sc.weights.gamma_g >= 0,
      "graph weights must be nonnegative");
  req((sc.detector.psi_thr.array() > 0).all(), "detector.psi_thr must be > 0");
  req(sc.detector.f_thr > 0, "detector.f_thr must be > 0");
  req(sc.goal_steps >= 1, "goal_steps must be >= 1");

  Scalar prev_t = -1;
  for (std::size_t i = 0; i < sc.events.size(); ++i) {
    const DisturbanceEvent& ev = sc.events[i];
    const std::string tag = "events[" + std::to_string(i) + "]";
    req(ev.time >= prev_t, tag + ": events must be time-ordered");
    prev_t = ev.time;
    if (ev.kind == DisturbanceEvent::Kind::Payload)
      req(ev.mass >= 0, tag + ": payload mass must be >= 0");
    if (ev.kind == DisturbanceEvent::Kind::Push)
      req(ev.duration > 0, tag + ": push duration must be > 0");
  }

  req(sc.noise.pose_rad >= 0 && sc.noise.pos_m >= 0 && sc.noise.force_n >= 0,
      "noise levels must be >= 0");
  {
    Eigen::LLT<Mat3> llt(sc.d_imp);
    req(sc.d_imp.isApprox(sc.d_imp.transpose(), 1e-9) && llt.info() == Eigen::Success,
        "impedance.d_imp must be symmetric positive definite");
  }
  req(sc.contact.k_env > 0, "contact.k_env must be > 0");
  req(sc.contact.contact_tol > 0, "contact.contact_tol must be > 0");
  req(sc.contact.scuff_tol > 0, "contact.scuff_tol must be > 0");
  req(sc.contact.separation_tol > 0, "contact.separation_tol must be > 0");
  req(sc.omega_filter_tau >= 0, "omega_filter_tau must be >= 0");
  req(sc.fall_angle > 0, "fall_angle must be > 0");

  if (!issues.empty())
    throw ValidationError("scenario validation failed (" +
                              std::to_string(issues.size()) + " issue(s))",
                          issues);
}

Scenario load_scenario(const RunManifest& manifest) {
  std::ifstream in(manifest.scenario_path);
  if (!in) throw ParseError("cannot open scenario file: " + manifest.scenario_path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(manifest.scenario_path + ": " + e.what());
  }
  // Overrides act on the effective (default-filled) document so every
  // documented key is addressable.
  json effective = scenario_to_json(scenario_from_json(j));
  for (const std::string& ov : manifest.overrides) apply_override(effective, ov);
  Scenario sc = scenario_from_json(effective);
  if (manifest.seed) sc.seed = *manifest.seed;
  validate_scenario(sc);
  return sc;
}

namespace {

void append_num(std::string& out, Scalar v, bool comma = true) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
  if (comma) out += ',';
}

}  // namespace

std::string log_csv(const SimLog& log) {
  std::string out =
      "t,phi,theta,psi,wx,wy,wz,px,py,pz,"
      "phi_sensed,theta_sensed,psi_sensed,"
      "phi_ref,theta_ref,psi_ref,wx_ref,wy_ref,wz_ref,"
      "f1x,f1y,f1z,f2x,f2y,f2z,"
      "f1x_ref,f1y_ref,f1z_ref,f2x_ref,f2y_ref,f2z_ref,"
      "qp_status,qp_iterations,qp_residual,"
      "node,edge,J_s,J_t,J_dst,J_path,detector_flag,phase\n";
  for (const StepRecord& r : log.records) {
    append_num(out, r.t);
    for (int i = 0; i < 3; ++i) append_num(out, r.euler_true[i]);
    for (int i = 0; i < 3; ++i) append_num(out, r.omega_true[i]);
    for (int i = 0; i < 3; ++i) append_num(out, r.p_b[i]);
    for (int i = 0; i < 3; ++i) append_num(out, r.euler_sensed[i]);
    for (int i = 0; i < 3; ++i) append_num(out, r.euler_ref[i]);
    for (int i = 0; i < 3; ++i) append_num(out, r.omega_ref[i]);
    for (int h = 0; h < 2; ++h)
      for (int i = 0; i < 3; ++i) append_num(out, r.f_applied[h][i]);
    for (int h = 0; h < 2; ++h)
      for (int i = 0; i < 3; ++i) append_num(out, r.f_ref[h][i]);
    out += qp_status_label(r.qp_status);
    out += ',';
    out += std::to_string(r.qp_iterations);
    out += ',';
    append_num(out, r.qp_residual);
    out += std::to_string(r.active_node);
    out += ',';
    out += std::to_string(r.edge_id);
    out += ',';
    append_num(out, r.path_cost.J_s);
    append_num(out, r.path_cost.J_t);
    append_num(out, r.path_cost.J_dst);
    append_num(out, r.path_cost.J_path);
    out += r.detector_flag ? "1" : "0";
    out += ',';
    out += phase_label(r.phase);
    out += '\n';
  }
  return out;
}

std::string footprints_csv(const SimLog& log) {
  std::string out = "step,vertex,x,y\n";
  for (const FootprintRecord& f : log.footprints) {
    out += std::to_string(f.step_index);
    out += ',';
    out += vertex_label(f.vertex);
    out += ',';
    append_num(out, f.x);
    append_num(out, f.y, false);
    out += '\n';
  }
  return out;
}

std::string summary_json(const SimLog& log) {
  const RunSummary& s = log.summary;
  json j;
  j["completed"] = s.completed;
  j["reason"] = s.reason;
  j["detail"] = s.detail;
  j["steps_completed"] = s.steps_completed;
  j["sim_time"] = s.sim_time;
  j["switches"] = json::array();
  for (const SwitchEvent& sw : s.switches)
    j["switches"].push_back({{"t", sw.t},
                             {"from", gait_mode_label(sw.from)},
                             {"to", gait_mode_label(sw.to)}});
  j["first_detection_time"] = s.first_detection_time;
  j["max_pivot_drift"] = s.max_pivot_drift;
  j["max_cone_violation"] = s.max_cone_violation;
  j["tracking_error_after_transient"] = s.tracking_error_after_transient;
  j["tracking_error_last_edge"] = s.tracking_error_last_edge;
  return j.dump(2) + "\n";
}

void write_run_artifacts(const SimLog& log, const Scenario& sc,
                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&out_dir](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (fs::path(out_dir) / name).string());
    f << content;
  };
  write("log.csv", log_csv(log));
  write("footprints.csv", footprints_csv(log));
  write("summary.json", summary_json(log));
  write("effective_config.json", serialize_scenario(sc));
}

}  // namespace pivot
