#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace airsig {

/// N x 3 sample matrix, one row per time step.
using Series3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;
/// N x 2 planar series (projections, handwritten references).
using Series2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;

enum class SensorKind { Accelerometer, LinearAccelerometer, Gyroscope };

inline constexpr SensorKind kAllSensors[] = {
    SensorKind::Accelerometer, SensorKind::LinearAccelerometer, SensorKind::Gyroscope};

/// Short names used in file names and on the command line: acc, linacc, gyro.
std::string_view short_name(SensorKind kind);
std::optional<SensorKind> parse_sensor(std::string_view name);

/// Timestamped 3-axis series from one sensor. Construction validates that the
/// timestamps are strictly increasing and all values are finite; a trace that
/// exists is therefore always well formed.
class SensorTrace {
 public:
  SensorTrace(SensorKind kind, std::vector<double> timestamps, Series3 samples);

  SensorKind kind() const noexcept { return kind_; }
  const std::vector<double>& timestamps() const noexcept { return timestamps_; }
  const Series3& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return timestamps_.size(); }
  double duration() const noexcept {
    return timestamps_.empty() ? 0.0 : timestamps_.back() - timestamps_.front();
  }
  /// Mean sampling rate, (N - 1) / duration.
  double rate_hz() const;

  bool operator==(const SensorTrace& other) const;

 private:
  SensorKind kind_;
  std::vector<double> timestamps_;
  Series3 samples_;
};

/// Half-open sample range [start_index, end_index).
struct SegmentBounds {
  std::size_t start_index = 0;
  std::size_t end_index = 0;

  std::size_t length() const noexcept { return end_index - start_index; }
  bool operator==(const SegmentBounds&) const = default;
};

}  // namespace airsig
