#include "helpers.hpp"

#include "airsig/quaternion.hpp"
#include "airsig/trajectory.hpp"

#include <numbers>

using namespace airsig;
using testing::require_error;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

bool same_rotation(const Quaternion& a, const Quaternion& b, double tol) {
  return angular_distance(a, b) < tol;
}

Quaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Quaternion{n(rng), n(rng), n(rng), n(rng)}.normalized();
}

}  // namespace

TEST_SUITE("quaternion") {

TEST_CASE("Hamilton product identities") {
  std::mt19937_64 rng(1);
  const Quaternion q = random_unit(rng);
  CHECK(q_multiply(Quaternion::identity(), q) == q);
  const Quaternion e = q_multiply(q, q.conjugate());
  CHECK(e.w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.vec().norm() < 1e-15);

  const Quaternion z90 = Quaternion::from_axis_angle({0, 0, 1}, kPi / 2);
  const Quaternion z180 = q_multiply(z90, z90);
  CHECK(same_rotation(z180, Quaternion::from_axis_angle({0, 0, 1}, kPi), 1e-12));

  // i j = k
  const Quaternion k = q_multiply({0, 1, 0, 0}, {0, 0, 1, 0});
  CHECK(k == Quaternion{0, 0, 0, 1});
}

TEST_CASE("rotation of vectors") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec3 v(0.3, -1.2, 2.0);
  CHECK((q_rotate(Quaternion::identity(), v) - v).norm() == 0.0);
  const Vec3 y = q_rotate(Quaternion::from_axis_angle({0, 0, 1}, kPi / 2), {1, 0, 0});
  CHECK((y - Vec3(0, 1, 0)).norm() < 1e-12);

  for (int i = 0; i < 200; ++i) {
    const Quaternion q = random_unit(rng);
    const Vec3 w(n(rng), n(rng), n(rng));
    CHECK(std::abs(q_rotate(q, w).norm() - w.norm()) < 1e-9);
    // Agrees with Eigen's rotation matrix for the same (w, x, y, z).
    const Eigen::Quaterniond eq(q.w, q.x, q.y, q.z);
    CHECK((q_rotate(q, w) - eq.toRotationMatrix() * w).norm() < 1e-12);
  }
  require_error(ErrorCode::NonUnitQuaternion, [&] { q_rotate({1.1, 0, 0, 0}, v); });
}

TEST_CASE("Euler composition round trip") {
  const Quaternion q = Quaternion::from_euler(0.2, -0.4, 1.1);
  CHECK(roll_of(q) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(pitch_of(q) == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(yaw_of(q) == doctest::Approx(1.1).epsilon(1e-12));
  const Quaternion zyx = q_multiply(q_multiply(Quaternion::from_axis_angle({0, 0, 1}, 1.1),
                                               Quaternion::from_axis_angle({0, 1, 0}, -0.4)),
                                    Quaternion::from_axis_angle({1, 0, 0}, 0.2));
  CHECK(same_rotation(q, zyx, 1e-12));
}

TEST_CASE("gyro integration") {
  const Quaternion q0 = Quaternion::from_euler(0.1, 0.2, 0.3);
  CHECK(integrate_gyro(q0, Vec3::Zero(), 0.01) == q0);

  for (auto method : {GyroIntegrator::FirstOrder, GyroIntegrator::Exponential}) {
    Quaternion q = Quaternion::identity();
    for (int i = 0; i < 1000; ++i) {
      q = integrate_gyro(q, {0, 0, kPi / 2}, 0.001, method);
      CHECK(std::abs(q.norm() - 1.0) < 1e-9);
    }
    CHECK(angular_distance(q, Quaternion::from_axis_angle({0, 0, 1}, kPi / 2)) < 0.1 * kDeg);
  }
}

TEST_CASE("nlerp and sign continuity") {
  const Quaternion a = Quaternion::from_axis_angle({1, 0, 0}, 0.2);
  const Quaternion b = Quaternion::from_axis_angle({1, 0, 0}, 0.6);
  CHECK(same_rotation(nlerp(a, b, 0.5), Quaternion::from_axis_angle({1, 0, 0}, 0.4), 1e-12));
  CHECK(same_rotation(nlerp(a, -b, 0.5), Quaternion::from_axis_angle({1, 0, 0}, 0.4), 1e-12));

  std::vector<Quaternion> qs{a, -b, b, -a};
  enforce_sign_continuity(qs);
  for (std::size_t k = 1; k < qs.size(); ++k) CHECK(qs[k - 1].dot(qs[k]) >= 0.0);
}

TEST_CASE("Madgwick with beta 0 is plain gyro integration") {
  const Quaternion q0 = Quaternion::from_euler(0.3, -0.1, 0.5);
  const Vec3 omega(0.4, -0.2, 0.9);
  const Vec3 accel(1.0, 2.0, 9.0);
  CHECK(madgwick_update(q0, accel, omega, 0.01, 0.0) == integrate_gyro(q0, omega, 0.01));
}

TEST_CASE("Madgwick converges to the static tilt") {
  for (double roll : {-30.0, -12.0, 0.0, 17.0, 30.0}) {
    for (double pitch : {-30.0, 8.0, 30.0}) {
      if (std::hypot(roll, pitch) > 30.0) continue;
      Quaternion q = Quaternion::from_euler(roll * kDeg, pitch * kDeg, 0.4);
      for (int i = 0; i < 500; ++i) q = madgwick_update(q, {0, 0, 9.81}, Vec3::Zero(), 0.01, 0.1);
      CHECK(std::abs(roll_of(q)) < 1.0 * kDeg);
      CHECK(std::abs(pitch_of(q)) < 1.0 * kDeg);
    }
  }
}

TEST_CASE("Madgwick tracks a slow rotation without drift growth") {
  // Device turning at 0.2 rad/s about a tilted axis; accelerometer reports
  // gravity in the body frame. The tilt error must stay bounded.
  const Vec3 omega = Vec3(0.3, 0.2, 1.0).normalized() * 0.2;
  Quaternion truth = Quaternion::from_euler(0.2, 0.1, 0.0);
  Quaternion est = attitude_from_gravity(q_rotate(truth.conjugate(), {0, 0, 9.81}));
  double early = 0.0;
  double late = 0.0;
  const double dt = 0.01;
  for (int i = 1; i <= 1000; ++i) {
    truth = integrate_gyro(truth, omega, dt, GyroIntegrator::Exponential);
    const Vec3 accel = q_rotate(truth.conjugate(), {0, 0, 9.81});
    est = madgwick_update(est, accel, omega, dt, 0.1);
    const Vec3 up_truth = q_rotate(truth.conjugate(), {0, 0, 1});
    const Vec3 up_est = q_rotate(est.conjugate(), {0, 0, 1});
    const double tilt_err = std::acos(std::clamp(up_truth.dot(up_est), -1.0, 1.0));
    if (i <= 500) early = std::max(early, tilt_err);
    else late = std::max(late, tilt_err);
  }
  CHECK(early < 2.0 * kDeg);
  CHECK(late < 2.0 * kDeg);
  CHECK(late <= early + 0.1 * kDeg);
}

TEST_CASE("initial attitude from gravity has zero yaw") {
  const Quaternion truth = Quaternion::from_euler(0.25, -0.35, 0.0);
  const Quaternion q = attitude_from_gravity(q_rotate(truth.conjugate(), {0, 0, 9.80665}));
  CHECK(same_rotation(q, truth, 1e-12));
  CHECK(yaw_of(q) == doctest::Approx(0.0).epsilon(1e-12));
}

}  // TEST_SUITE
