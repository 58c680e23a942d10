#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <vector>

namespace airsig {

using Vec3 = Eigen::Vector3d;

/// Attitude quaternion (w, x, y, z). Used as the body-to-world rotation:
/// rotate(q, v) = q v q* takes a body-frame vector into the world frame.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion identity() { return {}; }
  static Quaternion from_axis_angle(const Vec3& axis, double angle);
  /// Z-Y-X (yaw, pitch, roll) composition: Rz(yaw) * Ry(pitch) * Rx(roll).
  static Quaternion from_euler(double roll, double pitch, double yaw);

  double norm() const;
  Quaternion normalized() const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  Vec3 vec() const { return {x, y, z}; }
  double dot(const Quaternion& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }

  Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
  Quaternion operator-() const { return {-w, -x, -y, -z}; }

  bool operator==(const Quaternion&) const = default;
};

/// Hamilton product p (x) q.
Quaternion q_multiply(const Quaternion& p, const Quaternion& q);

/// q v q*. Throws NonUnitQuaternion when |‖q‖ - 1| > 1e-6.
Vec3 q_rotate(const Quaternion& q, const Vec3& v);

/// Rotation angle between two attitudes in radians, in [0, pi].
double angular_distance(const Quaternion& a, const Quaternion& b);

/// Roll (about x) and pitch (about y) of the Z-Y-X decomposition, radians.
double roll_of(const Quaternion& q);
double pitch_of(const Quaternion& q);
double yaw_of(const Quaternion& q);

enum class GyroIntegrator { FirstOrder, Exponential };

/// One step of q' = 1/2 q (x) [0, omega] with omega in rad/s (body frame).
/// FirstOrder: normalize(q + dt * q'); Exponential: q (x) exp(omega dt / 2).
Quaternion integrate_gyro(const Quaternion& q, const Vec3& omega, double dt,
                          GyroIntegrator method = GyroIntegrator::FirstOrder);

/// Normalized linear interpolation along the shorter arc.
Quaternion nlerp(const Quaternion& a, const Quaternion& b, double t);

struct OrientationSeries {
  std::vector<double> timestamps;
  std::vector<Quaternion> quaternions;

  std::size_t size() const { return quaternions.size(); }
  bool operator==(const OrientationSeries&) const = default;
};

/// Flips signs in place so that consecutive quaternions have dot >= 0.
void enforce_sign_continuity(std::vector<Quaternion>& quaternions);

}  // namespace airsig
