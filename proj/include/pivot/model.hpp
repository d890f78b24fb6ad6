#pragma once

#include <array>
#include <string>

#include "pivot/geom.hpp"
#include "pivot/types.hpp"

namespace pivot {

/// Bottom-face vertex labels. Front = walking direction (+x),
/// right = -y, left = +y.
enum class VertexId { FrontRight = 0, FrontLeft = 1, RearRight = 2, RearLeft = 3 };

inline const char* vertex_label(VertexId v) {
  switch (v) {
    case VertexId::FrontRight: return "FR";
    case VertexId::FrontLeft: return "FL";
    case VertexId::RearRight: return "RR";
    case VertexId::RearLeft: return "RL";
  }
  return "?";
}

/// The manipulated box: geometry, mass properties, contact vertices and the
/// two side grasp points, all in the body frame with the origin at the
/// geometric center.
struct ObjectModel {
  Vec3 dimensions = Vec3(0.6, 0.4, 0.2);  // x, y, z (m)
  Scalar mass = 1.4;                      // kg
  Mat3 inertia = Mat3::Identity();        // about com_body, body axes (kg m^2)
  Vec3 com_body = Vec3::Zero();
  std::array<Vec3, 4> bottom_vertices{};  // indexed by VertexId
  Vec3 grasp_left = Vec3::Zero();         // p_BP1, on the +y face
  Vec3 grasp_right = Vec3::Zero();        // p_BP2, on the -y face
  Vec3 gravity = Vec3(0, 0, -9.81);       // m/s^2

  const Vec3& bottom_vertex(VertexId v) const {
    return bottom_vertices[static_cast<int>(v)];
  }
  const Vec3& grasp_point(int i) const { return i == 0 ? grasp_left : grasp_right; }
};

enum class SupportPhase { SS_left, SS_right, DS, QS };

inline const char* phase_label(SupportPhase p) {
  switch (p) {
    case SupportPhase::SS_left: return "SS_L";
    case SupportPhase::SS_right: return "SS_R";
    case SupportPhase::DS: return "DS";
    case SupportPhase::QS: return "QS";
  }
  return "?";
}

/// Which vertices carry the object and, in single support, the world-frame
/// anchor the pivot vertex is pinned to.
struct SupportState {
  SupportPhase phase = SupportPhase::QS;
  std::array<bool, 4> active{true, true, true, true};  // indexed by VertexId
  Vec3 pivot = Vec3::Zero();  // world anchor of the rotation center (SS)

  bool is_single_support() const {
    return phase == SupportPhase::SS_left || phase == SupportPhase::SS_right;
  }
  /// The vertex used as rotation center in SS.
  VertexId pivot_vertex() const {
    return phase == SupportPhase::SS_left ? VertexId::FrontLeft
                                          : VertexId::FrontRight;
  }
  int active_count() const {
    int n = 0;
    for (bool a : active) n += a ? 1 : 0;
    return n;
  }

  static SupportState single(SupportPhase p, const Vec3& pivot_world);
  static SupportState double_support();
  static SupportState quad_support();
};

/// Full object state. The 6-vector fed to the controller is
/// x = [phi, theta, psi, omega_x, omega_y, omega_z] with omega the
/// world-frame angular velocity.
struct ObjectState {
  EulerAngles angles;
  Vec3 omega = Vec3::Zero();
  Vec3 position = Vec3::Zero();  // p_B, world (m)
  SupportState support;

  Mat3 rotation() const { return rotation_from_euler(angles); }
  Vec6 state_vector() const {
    Vec6 x;
    x << angles.vector(), omega;
    return x;
  }
};

/// Diagonal cuboid inertia about the CoG in body axes.
/// Throws NonPositiveInput for non-positive mass or dimensions.
Mat3 box_inertia(Scalar mass, const Vec3& dimensions);

/// Box model with uniform density defaults: CoG at the geometric center,
/// bottom vertices from the dimensions, grasp points at the centers of the
/// two long side faces (y = +-dim_y/2).
ObjectModel make_box(Scalar mass, const Vec3& dimensions);

/// Bottom vertices in the world frame, labels preserved by index.
std::array<Vec3, 4> world_vertices(const ObjectModel& model, const ObjectState& state);

/// World-frame CoG position.
Vec3 com_world(const ObjectModel& model, const ObjectState& state);

/// Combined model after rigidly attaching a point mass at payload_pos_body:
/// mass-weighted CoG shift and parallel-axis inertia about the new CoG.
/// Geometry (dimensions, vertices, grasp points) is unchanged.
/// Throws NegativeMass.
ObjectModel add_payload(const ObjectModel& model, Scalar payload_mass,
                        const Vec3& payload_pos_body);

}  // namespace pivot
