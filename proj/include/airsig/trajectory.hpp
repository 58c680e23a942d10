#pragma once

#include "airsig/quaternion.hpp"
#include "airsig/sample.hpp"
#include "airsig/trace.hpp"

#include <optional>
#include <vector>

namespace airsig {

inline constexpr double kStandardGravity = 9.80665;

enum class OrientationSource { Madgwick, GroundTruth };

/// Rule mapping the dominant frequency of a drift-prone signal to the
/// high-pass cutoff: clamp(fraction * f_dom, min_hz, max_hz), where f_dom is
/// searched above min_search_hz.
struct CutoffRule {
  double fraction = 0.3;
  double min_hz = 0.1;
  double max_hz = 1.0;
  double min_search_hz = 0.05;
  /// Remove the least-squares line (not just the mean) before the FFT so a
  /// drift ramp does not masquerade as the dominant component.
  bool detrend = true;
};

struct ReconstructConfig {
  double beta = 0.1;
  double gravity = kStandardGravity;
  OrientationSource orientation = OrientationSource::Madgwick;
  GyroIntegrator integrator = GyroIntegrator::FirstOrder;
  CutoffRule cutoff;
  /// Fixed cutoffs (Hz) that bypass the spectral rule.
  std::optional<double> velocity_cutoff_hz;
  std::optional<double> position_cutoff_hz;
  bool zero_phase = true;
};

struct Trajectory3D {
  std::vector<double> timestamps;
  Series3 position;      // m
  Series3 velocity;      // m/s
  Series3 accel_global;  // m/s^2, gravity removed
  double velocity_cutoff_hz = 0.0;
  double position_cutoff_hz = 0.0;
};

/// Madgwick IMU step: gyro propagation plus beta times the normalized gradient
/// of the gravity-alignment objective. With ‖accel‖ < 1e-6 it is a gyro-only
/// step; with beta = 0 it equals first-order integrate_gyro.
Quaternion madgwick_update(const Quaternion& state, const Vec3& accel, const Vec3& gyro, double dt,
                           double beta, GyroIntegrator integrator = GyroIntegrator::FirstOrder);

/// Attitude with zero yaw whose gravity direction matches the accelerometer.
Quaternion attitude_from_gravity(const Vec3& accel);

/// Initial attitude from the first accelerometer sample, Madgwick updates
/// thereafter, sign continuity enforced. Requires accelerometer and gyroscope
/// traces on a common grid.
OrientationSeries estimate_orientation(const SignatureSample& sample, double beta = 0.1,
                                       GyroIntegrator integrator = GyroIntegrator::FirstOrder);

/// Rotate body-frame accelerometer samples into the world frame and remove
/// (0, 0, g).
Series3 to_global_accel(const SignatureSample& sample, const OrientationSeries& orientation,
                        double gravity = kStandardGravity);
Series3 to_global_accel(const Series3& body_accel, const std::vector<Quaternion>& orientation,
                        double gravity = kStandardGravity);

/// Cumulative trapezoidal integral with a zero initial value.
Series3 integrate_trapezoid(const Series3& series, double dt);

struct Kinematics {
  Series3 velocity;
  Series3 position;
};

/// velocity = integral of accel, position = integral of velocity; both start at 0.
Kinematics integrate_motion(const Series3& accel_global, double dt);

/// Dominant frequency (Hz) of the per-sample vector norm after removing its
/// mean (or its least-squares line when detrend is set).
double dominant_frequency(const Series3& series, double rate_hz, double min_search_hz = 0.05,
                          bool detrend = false);

/// clamp(fraction * dominant_frequency, min_hz, max_hz). Needs at least 16 rows.
double select_cutoff(const Series3& series, double rate_hz, const CutoffRule& rule = {});

/// First-order Butterworth high-pass (bilinear transform, prewarped), run
/// forward then backward per axis when zero_phase is set. The filter state is
/// initialised so that a constant input produces zero output.
Series3 highpass(const Series3& series, double cutoff_hz, double rate_hz, bool zero_phase = true);

struct DriftFilterResult {
  Series3 velocity;
  Series3 position;
  double velocity_cutoff_hz = 0.0;
  double position_cutoff_hz = 0.0;
};

/// The drift-suppression stage shared by reconstruction and by reference
/// construction: highpass(velocity) -> shift so v[0] = 0 -> integrate ->
/// highpass(position) -> shift so r[0] = 0. Cutoffs come from the spectral
/// rule unless fixed in the config.
DriftFilterResult drift_filter(const Series3& raw_velocity, double rate_hz,
                               const ReconstructConfig& config);

/// Full pipeline on a resampled, movement-cropped sample in physical units.
Trajectory3D reconstruct(const SignatureSample& sample, const ReconstructConfig& config = {});

/// Reference trajectory for a synthetic sample: its ground-truth velocity run
/// through drift_filter with the given cutoffs.
Series3 filtered_ground_truth(const SignatureSample& sample, double rate_hz,
                              double velocity_cutoff_hz, double position_cutoff_hz,
                              bool zero_phase = true);

/// Projection onto the two leading principal axes of the position cloud. The
/// first axis is oriented to correlate positively with time. Throws
/// DegenerateGeometry for collinear or coincident clouds.
Series2 project_to_plane(const Series3& position);
Series2 project_to_plane(const Trajectory3D& trajectory);

}  // namespace airsig
