#pragma once

#include "airsig/quaternion.hpp"
#include "airsig/trace.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace airsig {

enum class Label { Genuine, SkilledForgery, RandomImpostorRef };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

/// Analytic kinematics of a synthetic recording, sampled on the same grid as
/// its sensor traces. Real recordings have none.
struct GroundTruth {
  std::vector<double> timestamps;
  Series3 position;  // world frame, m
  Series3 velocity;  // world frame, m/s
  OrientationSeries orientation;
  SegmentBounds gesture_bounds;

  bool operator==(const GroundTruth& other) const;
};

struct SignatureSample {
  std::string user_id;
  int session = 1;
  int attempt = 0;
  std::string device_model;
  Label label = Label::Genuine;
  std::map<SensorKind, SensorTrace> traces;
  std::optional<GroundTruth> ground_truth;
  /// Optional 2D handwritten-style reference polyline for alignment experiments.
  std::optional<Series2> reference_2d;

  bool has(SensorKind kind) const { return traces.count(kind) != 0; }
  /// Throws MissingSensor when absent.
  const SensorTrace& trace(SensorKind kind) const;

  bool operator==(const SignatureSample& other) const;
};

/// Stable identifier, e.g. "u003_s2_a1_genuine".
std::string sample_id(const SignatureSample& sample);

/// Session range, non-empty traces, overlapping time spans. Throws on violation.
void validate(const SignatureSample& sample);

}  // namespace airsig
