#include "airsig/sample.hpp"

#include "airsig/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace airsig {

std::string_view short_name(SensorKind kind) {
  switch (kind) {
    case SensorKind::Accelerometer: return "acc";
    case SensorKind::LinearAccelerometer: return "linacc";
    case SensorKind::Gyroscope: return "gyro";
  }
  return "?";
}

std::optional<SensorKind> parse_sensor(std::string_view name) {
  for (SensorKind kind : kAllSensors) {
    if (short_name(kind) == name) return kind;
  }
  return std::nullopt;
}

SensorTrace::SensorTrace(SensorKind kind, std::vector<double> timestamps, Series3 samples)
    : kind_(kind), timestamps_(std::move(timestamps)), samples_(std::move(samples)) {
  if (static_cast<Eigen::Index>(timestamps_.size()) != samples_.rows()) {
    std::ostringstream msg;
    msg << short_name(kind_) << " trace has " << timestamps_.size() << " timestamps but "
        << samples_.rows() << " rows";
    fail(ErrorCode::MalformedTrace, msg.str());
  }
  for (std::size_t i = 0; i < timestamps_.size(); ++i) {
    if (!std::isfinite(timestamps_[i])) {
      fail(ErrorCode::MalformedTrace, "non-finite timestamp at row " + std::to_string(i));
    }
    if (i > 0 && !(timestamps_[i] > timestamps_[i - 1])) {
      fail(ErrorCode::MalformedTrace,
           std::string(short_name(kind_)) + " timestamps not strictly increasing at row " +
               std::to_string(i));
    }
  }
  if (!samples_.allFinite()) {
    fail(ErrorCode::MalformedTrace, std::string(short_name(kind_)) + " trace has non-finite values");
  }
}

double SensorTrace::rate_hz() const {
  if (timestamps_.size() < 2) fail(ErrorCode::InsufficientData, "rate needs at least 2 samples");
  return static_cast<double>(timestamps_.size() - 1) / duration();
}

bool SensorTrace::operator==(const SensorTrace& other) const {
  return kind_ == other.kind_ && timestamps_ == other.timestamps_ &&
         samples_.rows() == other.samples_.rows() && samples_ == other.samples_;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Genuine: return "genuine";
    case Label::SkilledForgery: return "skilled_forgery";
    case Label::RandomImpostorRef: return "random_impostor_ref";
  }
  return "?";
}

std::optional<Label> parse_label(std::string_view text) {
  for (Label l : {Label::Genuine, Label::SkilledForgery, Label::RandomImpostorRef}) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

bool GroundTruth::operator==(const GroundTruth& other) const {
  return timestamps == other.timestamps && position.rows() == other.position.rows() &&
         position == other.position && velocity.rows() == other.velocity.rows() &&
         velocity == other.velocity && orientation == other.orientation &&
         gesture_bounds == other.gesture_bounds;
}

const SensorTrace& SignatureSample::trace(SensorKind kind) const {
  auto it = traces.find(kind);
  if (it == traces.end()) {
    fail(ErrorCode::MissingSensor,
         sample_id(*this) + " has no " + std::string(short_name(kind)) + " trace");
  }
  return it->second;
}

bool SignatureSample::operator==(const SignatureSample& other) const {
  if (user_id != other.user_id || session != other.session || attempt != other.attempt ||
      device_model != other.device_model || label != other.label || traces != other.traces ||
      ground_truth != other.ground_truth) {
    return false;
  }
  if (reference_2d.has_value() != other.reference_2d.has_value()) return false;
  if (reference_2d) {
    return reference_2d->rows() == other.reference_2d->rows() &&
           *reference_2d == *other.reference_2d;
  }
  return true;
}

std::string sample_id(const SignatureSample& sample) {
  std::ostringstream id;
  id << sample.user_id << "_s" << sample.session << "_a" << sample.attempt << '_'
     << to_string(sample.label);
  return id.str();
}

void validate(const SignatureSample& sample) {
  const std::string id = sample_id(sample);
  if (sample.session < 1 || sample.session > 4) {
    fail(ErrorCode::InvalidArgument, id + ": session must be in 1..4");
  }
  if (sample.traces.empty()) fail(ErrorCode::InvalidArgument, id + ": no traces");
  double lo = -INFINITY;
  double hi = INFINITY;
  for (const auto& [kind, trace] : sample.traces) {
    if (trace.size() == 0) fail(ErrorCode::InsufficientData, id + ": empty trace");
    lo = std::max(lo, trace.timestamps().front());
    hi = std::min(hi, trace.timestamps().back());
  }
  if (!(lo <= hi)) fail(ErrorCode::InvalidArgument, id + ": traces do not overlap in time");
}

}  // namespace airsig
