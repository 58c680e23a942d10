#include "airsig/quaternion.hpp"

#include "airsig/error.hpp"

#include <algorithm>
#include <cmath>

namespace airsig {

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return identity();
  const Vec3 u = axis / n;
  const double s = std::sin(angle / 2.0);
  return {std::cos(angle / 2.0), u.x() * s, u.y() * s, u.z() * s};
}

Quaternion Quaternion::from_euler(double roll, double pitch, double yaw) {
  const Quaternion qx{std::cos(roll / 2), std::sin(roll / 2), 0, 0};
  const Quaternion qy{std::cos(pitch / 2), 0, std::sin(pitch / 2), 0};
  const Quaternion qz{std::cos(yaw / 2), 0, 0, std::sin(yaw / 2)};
  return q_multiply(q_multiply(qz, qy), qx);
}

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  return {w / n, x / n, y / n, z / n};
}

Quaternion q_multiply(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

Vec3 q_rotate(const Quaternion& q, const Vec3& v) {
  if (std::abs(q.norm() - 1.0) > 1e-6) {
    fail(ErrorCode::NonUnitQuaternion, "rotation requires a unit quaternion, norm = " +
                                           std::to_string(q.norm()));
  }
  // v + 2w (u x v) + 2 u x (u x v), equal to the vector part of q [0,v] q*.
  const Vec3 u = q.vec();
  const Vec3 t = 2.0 * u.cross(v);
  return v + q.w * t + u.cross(t);
}

double angular_distance(const Quaternion& a, const Quaternion& b) {
  const Quaternion d = q_multiply(a.conjugate(), b);
  return 2.0 * std::atan2(d.vec().norm(), std::abs(d.w));
}

double roll_of(const Quaternion& q) {
  return std::atan2(2.0 * (q.w * q.x + q.y * q.z), 1.0 - 2.0 * (q.x * q.x + q.y * q.y));
}

double pitch_of(const Quaternion& q) {
  return std::asin(std::clamp(2.0 * (q.w * q.y - q.z * q.x), -1.0, 1.0));
}

double yaw_of(const Quaternion& q) {
  return std::atan2(2.0 * (q.w * q.z + q.x * q.y), 1.0 - 2.0 * (q.y * q.y + q.z * q.z));
}

Quaternion integrate_gyro(const Quaternion& q, const Vec3& omega, double dt,
                          GyroIntegrator method) {
  if (method == GyroIntegrator::Exponential) {
    const double rate = omega.norm();
    if (rate * dt < 1e-15) return q;
    return q_multiply(q, Quaternion::from_axis_angle(omega, rate * dt)).normalized();
  }
  const Quaternion q_dot = q_multiply(q, {0.0, omega.x(), omega.y(), omega.z()}) * 0.5;
  return (q + q_dot * dt).normalized();
}

Quaternion nlerp(const Quaternion& a, const Quaternion& b, double t) {
  const Quaternion b_near = a.dot(b) < 0.0 ? -b : b;
  return (a * (1.0 - t) + b_near * t).normalized();
}

void enforce_sign_continuity(std::vector<Quaternion>& quaternions) {
  for (std::size_t i = 1; i < quaternions.size(); ++i) {
    if (quaternions[i - 1].dot(quaternions[i]) < 0.0) quaternions[i] = -quaternions[i];
  }
}

}  // namespace airsig
