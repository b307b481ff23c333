#include "conepoint/attitude.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include "conepoint/errors.hpp"

namespace conepoint {

double Quaternion::norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {
      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
      a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
  };
}

UnitQuaternion::UnitQuaternion(const Quaternion& q) {
  const double n = q.norm();
  if (!(n > 1e-12) || !std::isfinite(n)) {
    throw InvalidInput("cannot normalize a zero or non-finite quaternion");
  }
  q_ = {q.x / n, q.y / n, q.z / n, q.w / n};
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw InvalidInput("rotation axis must be non-zero");
  const Vec3 a = axis / n * std::sin(0.5 * angle);
  return UnitQuaternion(a.x(), a.y(), a.z(), std::cos(0.5 * angle));
}

Mat3 UnitQuaternion::attitude_matrix() const {
  const double x = q_.x, y = q_.y, z = q_.z, w = q_.w;
  // Transpose of the active rotation matrix of q.
  Mat3 a;
  a << 1 - 2 * (y * y + z * z), 2 * (x * y + z * w), 2 * (x * z - y * w),
      2 * (x * y - z * w), 1 - 2 * (x * x + z * z), 2 * (y * z + x * w),
      2 * (x * z + y * w), 2 * (y * z - x * w), 1 - 2 * (x * x + y * y);
  return a;
}

SpacecraftParams::SpacecraftParams(const Mat3& inertia, double torque_limit,
                                   double disturbance_bound)
    : inertia_(inertia), torque_limit_(torque_limit), disturbance_bound_(disturbance_bound) {
  if (!inertia.allFinite()) throw InvalidParameter("inertia must be finite");
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidParameter("inertia must be symmetric");
  }
  Eigen::LLT<Mat3> llt(inertia);
  if (llt.info() != Eigen::Success) {
    throw InvalidParameter("inertia must be positive definite");
  }
  inertia_inverse_ = llt.solve(Mat3::Identity());
  if (!(torque_limit > 0.0)) throw InvalidParameter("torque_limit must be > 0");
  if (!(disturbance_bound >= 0.0)) throw InvalidParameter("disturbance_bound must be >= 0");
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 rotate_to_body(const UnitQuaternion& q, const Vec3& v_inertial) {
  if (std::abs(v_inertial.norm() - 1.0) > kUnitTolerance) {
    throw InvalidInput("rotate_to_body expects a unit vector");
  }
  return q.attitude_matrix() * v_inertial;
}

Vec3 rotate_to_inertial(const UnitQuaternion& q, const Vec3& v_body) {
  return q.attitude_matrix().transpose() * v_body;
}

double pointing_error(const Vec3& boresight, const Vec3& goal_body) {
  const double xe = 1.0 - boresight.dot(goal_body);
  return std::clamp(xe, 0.0, 2.0);
}

double reduced_error_rate(const Vec3& boresight, const Vec3& goal_body, const Vec3& omega) {
  return -boresight.dot(goal_body.cross(omega));
}

Quaternion attitude_kinematics_rhs(const UnitQuaternion& q, const Vec3& omega) {
  const Quaternion p = q.raw() * Quaternion::pure(omega);
  return {0.5 * p.x, 0.5 * p.y, 0.5 * p.z, 0.5 * p.w};
}

Vec3 dynamics_rhs(const BodyState& state, const Vec3& torque, const Vec3& disturbance,
                  const SpacecraftParams& params) {
  const Vec3& w = state.omega;
  return params.inertia_inverse() * (-w.cross(params.inertia() * w) + torque + disturbance);
}

BodyState propagate_rigid_body(const BodyState& state, const Vec3& torque, const Vec3& disturbance,
                               const SpacecraftParams& params, double dt) {
  using State = Eigen::Matrix<double, 7, 1>;
  auto rhs = [&](const State& s) {
    BodyState b{UnitQuaternion(s(0), s(1), s(2), s(3)), s.tail<3>()};
    const Quaternion qd = attitude_kinematics_rhs(b.attitude, b.omega);
    State out;
    out << qd.x, qd.y, qd.z, qd.w, dynamics_rhs(b, torque, disturbance, params);
    return out;
  };
  const auto& q = state.attitude;
  State s;
  s << q.x(), q.y(), q.z(), q.w(), state.omega;
  const State k1 = rhs(s);
  const State k2 = rhs(s + 0.5 * dt * k1);
  const State k3 = rhs(s + 0.5 * dt * k2);
  const State k4 = rhs(s + dt * k3);
  const State next = s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return {UnitQuaternion(next(0), next(1), next(2), next(3)), next.tail<3>()};
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace conepoint
