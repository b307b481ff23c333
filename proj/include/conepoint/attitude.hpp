// Rigid-body attitude kinematics/dynamics and the reduced-attitude
// (single boresight) pointing error.
//
// Quaternions are Hamilton, stored vector part first [x, y, z, w], and map
// inertial to body: v_b = q* ⊗ v_i ⊗ q, with q̇ = ½ q ⊗ [ω, 0]. Under this
// pairing a fixed inertial direction seen from the body evolves as
// ṙ_b = r_b × ω, which is what the pointing-error rate below assumes.
#pragma once

#include <Eigen/Dense>

namespace conepoint {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kUnitTolerance = 1e-9;

struct Quaternion {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 1.0;

  static Quaternion pure(const Vec3& v) { return {v.x(), v.y(), v.z(), 0.0}; }

  Vec3 vec() const { return {x, y, z}; }
  double norm() const;
  Quaternion conjugate() const { return {-x, -y, -z, w}; }

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

// Quaternion whose norm is 1 to within kUnitTolerance.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;
  // Normalizes; throws InvalidInput for a (near) zero quaternion.
  explicit UnitQuaternion(const Quaternion& q);
  UnitQuaternion(double x, double y, double z, double w) : UnitQuaternion(Quaternion{x, y, z, w}) {}

  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);

  double x() const { return q_.x; }
  double y() const { return q_.y; }
  double z() const { return q_.z; }
  double w() const { return q_.w; }
  const Quaternion& raw() const { return q_; }

  // Attitude matrix A(q): v_body = A(q) v_inertial.
  Mat3 attitude_matrix() const;

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

 private:
  Quaternion q_{};
};

struct BodyState {
  UnitQuaternion attitude;
  Vec3 omega = Vec3::Zero();  // rad/s, body frame
};

// Inertia (kg m^2), per-axis torque bound (N m) and disturbance bound D_m (N m).
class SpacecraftParams {
 public:
  // Throws InvalidParameter unless inertia is symmetric (1e-12) and positive
  // definite, torque_limit > 0 and disturbance_bound >= 0.
  SpacecraftParams(const Mat3& inertia, double torque_limit, double disturbance_bound);

  const Mat3& inertia() const { return inertia_; }
  const Mat3& inertia_inverse() const { return inertia_inverse_; }
  double torque_limit() const { return torque_limit_; }
  double disturbance_bound() const { return disturbance_bound_; }

 private:
  Mat3 inertia_;
  Mat3 inertia_inverse_;
  double torque_limit_;
  double disturbance_bound_;
};

Mat3 skew(const Vec3& v);

// A(q) v for a unit v; throws InvalidInput if |v| differs from 1 by > 1e-9.
Vec3 rotate_to_body(const UnitQuaternion& q, const Vec3& v_inertial);
Vec3 rotate_to_inertial(const UnitQuaternion& q, const Vec3& v_body);

// x_e = 1 - B·r, clamped to [0, 2].
double pointing_error(const Vec3& boresight, const Vec3& goal_body);

// ẋ_e = -Bᵀ (r × ω).
double reduced_error_rate(const Vec3& boresight, const Vec3& goal_body, const Vec3& omega);

// q̇ = ½ q ⊗ [ω, 0].
Quaternion attitude_kinematics_rhs(const UnitQuaternion& q, const Vec3& omega);

// ω̇ = J⁻¹(−ω × Jω + u + d).
Vec3 dynamics_rhs(const BodyState& state, const Vec3& torque, const Vec3& disturbance,
                  const SpacecraftParams& params);

// One RK4 step of the rigid body under constant torque + disturbance,
// renormalizing the attitude afterwards.
BodyState propagate_rigid_body(const BodyState& state, const Vec3& torque, const Vec3& disturbance,
                               const SpacecraftParams& params, double dt);

// Angle between two unit vectors, radians; robust near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace conepoint
