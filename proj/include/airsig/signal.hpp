#pragma once

#include "airsig/sample.hpp"
#include "airsig/trace.hpp"

#include <cstddef>

namespace airsig {

/// Which preprocessing chain to run. Verification z-scores and smooths every
/// axis; reconstruction keeps raw physical units because it integrates them.
enum class PreprocessProfile { Verify, Reconstruct };

struct PreprocessConfig {
  double target_hz = 100.0;
  double tau = 0.225;
  double win_s = 0.20;
  double hop_s = 0.10;
  int smooth_window = 5;
  int pad_length = 1000;
  PreprocessProfile profile = PreprocessProfile::Verify;
  /// Reconstruct profile only: the movement window is widened by this much on
  /// both sides so integration starts from the still phase before the stroke.
  double reconstruct_margin_s = 0.5;
};

/// Linear interpolation onto a uniform grid t_first + k / target_hz that
/// spans [t_first, t_last].
SensorTrace resample(const SensorTrace& trace, double target_hz = 100.0);

/// Linear interpolation onto the grid t0 + k / rate_hz, k < count. Grid points
/// outside the trace are clamped to the end samples.
SensorTrace resample_onto(const SensorTrace& trace, double t0, double rate_hz, std::size_t count);

/// Per-axis (x - mean) / std with the population standard deviation. Axes with
/// std below 1e-12 become all zeros.
SensorTrace zscore_normalize(const SensorTrace& trace);

/// Centered moving average. Near the ends the window is truncated to the
/// samples that exist (no zero padding), so [0,0,5,0,0] with window 5 gives
/// [5/3, 5/4, 1, 5/4, 5/3].
SensorTrace moving_average(const SensorTrace& trace, int window = 5);

/// Energy-threshold movement activity detection on a uniformly sampled trace.
/// Window energy is the mean squared sample norm; a window is active when its
/// energy exceeds tau times the mean energy over all windows. Returns the
/// index range from the first to the last active window, or the full range
/// when nothing is active.
SegmentBounds detect_movement(const SensorTrace& linear_accel, double tau = 0.225,
                              double win_s = 0.20, double hop_s = 0.10);

/// Copy of rows [bounds.start_index, bounds.end_index).
SensorTrace crop(const SensorTrace& trace, const SegmentBounds& bounds);

/// Zero-pad or truncate at the tail to exactly `length` rows. Padded rows
/// continue the timestamp grid at the trace's mean sampling interval.
SensorTrace pad_or_truncate(const SensorTrace& trace, int length = 1000);

/// resample -> movement crop (bounds from the linear accelerometer, applied to
/// every sensor) -> z-score -> moving average. The Reconstruct profile widens
/// the crop by reconstruct_margin_s and stops there, so accelerations keep
/// their units and bandwidth. All traces
/// share one output grid. Ground truth, when present, is carried onto the
/// same grid and window.
SignatureSample preprocess(const SignatureSample& sample, const PreprocessConfig& config);

}  // namespace airsig
