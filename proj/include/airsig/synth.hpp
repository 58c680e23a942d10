#pragma once

#include "airsig/quaternion.hpp"
#include "airsig/sample.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace airsig {

/// Per-device sensor imperfections.
struct NoiseModel {
  double accel_sigma = 0.05;      // m/s^2, white, per sample
  double gyro_sigma = 0.01;       // rad/s, white, per sample
  double gyro_bias_sigma = 0.002; // rad/s, constant per recording
  double jitter_fraction = 0.10;  // sigma of each sampling interval, relative to nominal
  double nominal_rate_hz = 100.0;

  static NoiseModel none() { return {0.0, 0.0, 0.0, 0.0, 100.0}; }
};

/// Sinusoidal wrist rotation term: amplitude (rad), cycles per gesture, phase.
struct Wobble {
  double amplitude = 0.0;
  double cycles = 1.0;
  double phase = 0.0;
};

/// Device attitude during a gesture, as Z-Y-X Euler angles. Each angle is
/// base + envelope(tau) * sum(wobbles), with envelope = sin^2(pi tau) over the
/// normalized gesture time tau, so the device is still outside the gesture.
struct OrientationProfile {
  double base_roll = 0.0;
  double base_pitch = 0.0;
  double base_yaw = 0.0;
  std::array<Wobble, 2> roll{};
  std::array<Wobble, 2> pitch{};
  std::array<Wobble, 2> yaw{};
};

/// Intra-user variability applied per session and per attempt.
struct Variability {
  double session_point_jitter = 0.03;  // fraction of the gesture extent along each axis
  double attempt_point_jitter = 0.03;
  double session_duration_sigma = 0.06;  // log-normal
  double attempt_duration_sigma = 0.04;
  double session_angle_sigma = 0.05;  // rad, base attitude
  double attempt_angle_sigma = 0.02;
  double wobble_amplitude_sigma = 0.10;  // relative
  double wobble_phase_sigma = 0.15;      // rad
  double attempt_warp = 0.08;  // max |epsilon| of the per-attempt time warp
};

struct SynthUserTemplate {
  std::string user_id;
  std::uint64_t seed = 0;
  std::vector<Vec3> control_points;  // uniform cubic B-spline, world frame, m
  double duration_s = 2.5;
  OrientationProfile orientation;
  NoiseModel noise;
  Variability variability;
  std::string device_model = "synthetic";
  double lead_in_s = 0.6;
  double tail_s = 0.6;
};

/// Randomized template with 8-16 control points and a 1.5-4 s gesture.
SynthUserTemplate make_template(const std::string& user_id, std::uint64_t seed);

/// Kinematic state of a generated gesture at one instant.
struct MotionState {
  Vec3 position;
  Vec3 velocity;
  Vec3 acceleration;
  Quaternion orientation;
  Vec3 angular_velocity;  // body frame
};

/// A fully specified gesture: realized control points, timing and attitude.
/// Evaluation is analytic so every sensor channel has exact ground truth.
struct GestureModel {
  std::vector<Vec3> control_points;
  double start_s = 0.6;
  double duration_s = 2.5;
  double warp = 0.0;  // time-warp epsilon, |warp| < 1
  OrientationProfile orientation;

  MotionState at(double t) const;
};

/// Forward model for one recording: world acceleration a and attitude q give
/// accel = R(q)^T (a + g z), linear accel = R(q)^T a, gyro = body angular
/// velocity, sampled on a jittered grid with still periods before and after
/// the gesture. Deterministic in (template, session, attempt, rng_seed).
SignatureSample generate_sample(const SynthUserTemplate& tmpl, int session, int attempt,
                                std::uint64_t rng_seed);

/// Skilled forgery of the template's signature: similar shape, perturbed
/// timing, independently drawn attitude profile. Labelled SkilledForgery,
/// session 4.
SignatureSample generate_forgery(const SynthUserTemplate& tmpl, std::uint64_t rng_seed,
                                 int attempt = 0);

/// Render a gesture model into a sample (used by both generators and tests).
SignatureSample render_sample(const GestureModel& gesture, const NoiseModel& noise,
                              double total_s, std::uint64_t noise_seed);

struct PopulationSpec {
  int users = 20;
  int sessions = 4;
  int attempts = 2;
  int forgeries_per_user = 4;
  std::uint64_t seed = 1;
  /// Overrides every template's noise model when set.
  std::optional<NoiseModel> noise;
};

std::vector<SynthUserTemplate> make_templates(const PopulationSpec& spec);

}  // namespace airsig
