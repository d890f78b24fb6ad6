#include "pivot/model.hpp"

#include "pivot/errors.hpp"

namespace pivot {

SupportState SupportState::single(SupportPhase p, const Vec3& pivot_world) {
  SupportState s;
  s.phase = p;
  s.active = {false, false, false, false};
  const VertexId pv =
      p == SupportPhase::SS_left ? VertexId::FrontLeft : VertexId::FrontRight;
  s.active[static_cast<int>(pv)] = true;
  s.pivot = pivot_world;
  return s;
}

SupportState SupportState::double_support() {
  SupportState s;
  s.phase = SupportPhase::DS;
  s.active = {true, true, false, false};  // front edge
  return s;
}

SupportState SupportState::quad_support() {
  SupportState s;
  s.phase = SupportPhase::QS;
  s.active = {true, true, true, true};
  return s;
}

Mat3 box_inertia(Scalar mass, const Vec3& dimensions) {
  if (mass <= 0.0) throw NonPositiveInput("box_inertia: mass must be > 0");
  if ((dimensions.array() <= 0.0).any())
    throw NonPositiveInput("box_inertia: all dimensions must be > 0");
  const Scalar dx2 = dimensions.x() * dimensions.x();
  const Scalar dy2 = dimensions.y() * dimensions.y();
  const Scalar dz2 = dimensions.z() * dimensions.z();
  Mat3 inertia = Mat3::Zero();
  inertia(0, 0) = mass / 12.0 * (dy2 + dz2);
  inertia(1, 1) = mass / 12.0 * (dx2 + dz2);
  inertia(2, 2) = mass / 12.0 * (dx2 + dy2);
  return inertia;
}

ObjectModel make_box(Scalar mass, const Vec3& dimensions) {
  ObjectModel m;
  m.dimensions = dimensions;
  m.mass = mass;
  m.inertia = box_inertia(mass, dimensions);
  m.com_body = Vec3::Zero();
  const Scalar hx = dimensions.x() / 2, hy = dimensions.y() / 2, hz = dimensions.z() / 2;
  m.bottom_vertices[static_cast<int>(VertexId::FrontRight)] = Vec3(hx, -hy, -hz);
  m.bottom_vertices[static_cast<int>(VertexId::FrontLeft)] = Vec3(hx, hy, -hz);
  m.bottom_vertices[static_cast<int>(VertexId::RearRight)] = Vec3(-hx, -hy, -hz);
  m.bottom_vertices[static_cast<int>(VertexId::RearLeft)] = Vec3(-hx, hy, -hz);
  m.grasp_left = Vec3(0, hy, 0);
  m.grasp_right = Vec3(0, -hy, 0);
  return m;
}

std::array<Vec3, 4> world_vertices(const ObjectModel& model, const ObjectState& state) {
  const Mat3 r = state.rotation();
  std::array<Vec3, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = state.position + r * model.bottom_vertices[i];
  return out;
}

Vec3 com_world(const ObjectModel& model, const ObjectState& state) {
  return state.position + state.rotation() * model.com_body;
}

namespace {

// m * (|d|^2 I - d d^T), the parallel-axis shift for a point mass.
Mat3 parallel_axis(Scalar mass, const Vec3& d) {
  return mass * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
}

}  // namespace

ObjectModel add_payload(const ObjectModel& model, Scalar payload_mass,
                        const Vec3& payload_pos_body) {
  if (payload_mass < 0.0) throw NegativeMass("add_payload: payload mass must be >= 0");
  if (payload_mass == 0.0) return model;

  ObjectModel out = model;
  out.mass = model.mass + payload_mass;
  out.com_body =
      (model.mass * model.com_body + payload_mass * payload_pos_body) / out.mass;
  out.inertia = model.inertia + parallel_axis(model.mass, model.com_body - out.com_body) +
                parallel_axis(payload_mass, payload_pos_body - out.com_body);
  return out;
}

}  // namespace pivot
