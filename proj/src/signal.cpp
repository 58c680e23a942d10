#include "airsig/signal.hpp"

#include "airsig/error.hpp"

#include <algorithm>
#include <cmath>

namespace airsig {
namespace {

std::size_t grid_count(double span, double rate_hz) {
  return static_cast<std::size_t>(std::floor(span * rate_hz + 1e-9)) + 1;
}

// Linear interpolation of the rows of `values` (sampled at `ts`) at `grid`.
template <typename Matrix>
Matrix interpolate_rows(const std::vector<double>& ts, const Matrix& values,
                        const std::vector<double>& grid) {
  Matrix out(static_cast<Eigen::Index>(grid.size()), values.cols());
  const std::size_t n = ts.size();
  std::size_t j = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const auto row = static_cast<Eigen::Index>(k);
    if (t <= ts.front()) {
      out.row(row) = values.row(0);
      continue;
    }
    if (t >= ts.back()) {
      out.row(row) = values.row(static_cast<Eigen::Index>(n - 1));
      continue;
    }
    while (j + 1 < n && ts[j + 1] <= t) ++j;
    const auto r = static_cast<Eigen::Index>(j);
    const double w = (t - ts[j]) / (ts[j + 1] - ts[j]);
    out.row(row) = values.row(r) + w * (values.row(r + 1) - values.row(r));
  }
  return out;
}

std::vector<double> make_grid(double t0, double rate_hz, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = t0 + static_cast<double>(k) / rate_hz;
  return grid;
}

std::vector<double> slice(const std::vector<double>& v, const SegmentBounds& b) {
  return {v.begin() + static_cast<std::ptrdiff_t>(b.start_index),
          v.begin() + static_cast<std::ptrdiff_t>(b.end_index)};
}

GroundTruth carry_ground_truth(const GroundTruth& gt, const std::vector<double>& grid,
                               const SegmentBounds& crop_bounds) {
  GroundTruth out;
  const Series3 position = interpolate_rows(gt.timestamps, gt.position, grid);
  const Series3 velocity = interpolate_rows(gt.timestamps, gt.velocity, grid);

  std::vector<Quaternion> quats(grid.size());
  const auto& ts = gt.timestamps;
  const auto& qs = gt.orientation.quaternions;
  std::size_t j = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    if (t <= ts.front()) {
      quats[k] = qs.front();
    } else if (t >= ts.back()) {
      quats[k] = qs.back();
    } else {
      while (j + 1 < ts.size() && ts[j + 1] <= t) ++j;
      quats[k] = nlerp(qs[j], qs[j + 1], (t - ts[j]) / (ts[j + 1] - ts[j]));
    }
  }
  enforce_sign_continuity(quats);

  const auto start = static_cast<Eigen::Index>(crop_bounds.start_index);
  const auto len = static_cast<Eigen::Index>(crop_bounds.length());
  out.timestamps = slice(grid, crop_bounds);
  out.position = position.middleRows(start, len);
  out.velocity = velocity.middleRows(start, len);
  out.orientation.timestamps = out.timestamps;
  out.orientation.quaternions.assign(quats.begin() + start, quats.begin() + start + len);

  // Re-express the gesture window on the new grid, clamped to the crop.
  const double g_start = gt.timestamps[gt.gesture_bounds.start_index];
  const double g_end = gt.timestamps[std::max<std::size_t>(gt.gesture_bounds.end_index, 1) - 1];
  const auto& nt = out.timestamps;
  const auto first = std::lower_bound(nt.begin(), nt.end(), g_start);
  const auto last = std::upper_bound(nt.begin(), nt.end(), g_end);
  out.gesture_bounds.start_index = static_cast<std::size_t>(first - nt.begin());
  out.gesture_bounds.end_index = static_cast<std::size_t>(last - nt.begin());
  if (out.gesture_bounds.end_index <= out.gesture_bounds.start_index) {
    out.gesture_bounds = {0, nt.size()};
  }
  return out;
}

}  // namespace

SensorTrace resample_onto(const SensorTrace& trace, double t0, double rate_hz, std::size_t count) {
  if (trace.size() < 2) fail(ErrorCode::InsufficientData, "resampling needs at least 2 samples");
  if (!(rate_hz > 0.0)) fail(ErrorCode::InvalidArgument, "target rate must be positive");
  const auto grid = make_grid(t0, rate_hz, count);
  return SensorTrace(trace.kind(), grid, interpolate_rows(trace.timestamps(), trace.samples(), grid));
}

SensorTrace resample(const SensorTrace& trace, double target_hz) {
  if (trace.size() < 2) fail(ErrorCode::InsufficientData, "resampling needs at least 2 samples");
  if (!(target_hz > 0.0)) fail(ErrorCode::InvalidArgument, "target rate must be positive");
  return resample_onto(trace, trace.timestamps().front(), target_hz,
                       grid_count(trace.duration(), target_hz));
}

SensorTrace zscore_normalize(const SensorTrace& trace) {
  const auto n = static_cast<Eigen::Index>(trace.size());
  if (n < 2) fail(ErrorCode::InsufficientData, "z-score needs at least 2 samples");
  Series3 out(n, 3);
  for (int axis = 0; axis < 3; ++axis) {
    const auto col = trace.samples().col(axis);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd < 1e-12) {
      out.col(axis).setZero();
    } else {
      out.col(axis) = (col.array() - mean) / sd;
    }
  }
  return SensorTrace(trace.kind(), trace.timestamps(), std::move(out));
}

SensorTrace moving_average(const SensorTrace& trace, int window) {
  const auto n = static_cast<Eigen::Index>(trace.size());
  if (window < 1 || window % 2 == 0 || window > n) {
    fail(ErrorCode::InvalidWindow, "moving-average window " + std::to_string(window) +
                                       " must be odd and within 1.." + std::to_string(n));
  }
  const Eigen::Index half = window / 2;
  const Series3& x = trace.samples();
  Series3 out(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - half);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + half);
    for (int axis = 0; axis < 3; ++axis) {
      double sum = 0.0;
      for (Eigen::Index k = lo; k <= hi; ++k) sum += x(k, axis);
      out(i, axis) = sum / static_cast<double>(hi - lo + 1);
    }
  }
  return SensorTrace(trace.kind(), trace.timestamps(), std::move(out));
}

SegmentBounds detect_movement(const SensorTrace& linear_accel, double tau, double win_s,
                              double hop_s) {
  if (!(hop_s > 0.0) || !(win_s > hop_s)) {
    fail(ErrorCode::InvalidArgument, "movement detection needs win_s > hop_s > 0");
  }
  const std::size_t n = linear_accel.size();
  if (n < 2) fail(ErrorCode::InsufficientData, "movement detection needs at least 2 samples");
  const double rate = linear_accel.rate_hz();
  const auto win = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(win_s * rate)));
  const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hop_s * rate)));
  if (n < win) {
    fail(ErrorCode::InsufficientData, "trace of " + std::to_string(n) +
                                          " samples is shorter than one window of " +
                                          std::to_string(win));
  }

  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + win <= n; s += hop) starts.push_back(s);
  if (starts.back() + win < n) starts.push_back(n - win);

  const Eigen::VectorXd sq = linear_accel.samples().rowwise().squaredNorm();
  std::vector<double> energy(starts.size());
  double mean_energy = 0.0;
  for (std::size_t w = 0; w < starts.size(); ++w) {
    energy[w] = sq.segment(static_cast<Eigen::Index>(starts[w]), static_cast<Eigen::Index>(win))
                    .mean();
    mean_energy += energy[w];
  }
  mean_energy /= static_cast<double>(starts.size());

  const double threshold = tau * mean_energy;
  std::optional<std::size_t> first;
  std::size_t last = 0;
  for (std::size_t w = 0; w < starts.size(); ++w) {
    if (energy[w] > threshold) {
      if (!first) first = w;
      last = w;
    }
  }
  if (!first) return {0, n};
  return {starts[*first], starts[last] + win};
}

SensorTrace crop(const SensorTrace& trace, const SegmentBounds& bounds) {
  if (!(bounds.start_index < bounds.end_index) || bounds.end_index > trace.size()) {
    fail(ErrorCode::InvalidArgument, "crop bounds outside the trace");
  }
  return SensorTrace(trace.kind(), slice(trace.timestamps(), bounds),
                     trace.samples().middleRows(static_cast<Eigen::Index>(bounds.start_index),
                                                static_cast<Eigen::Index>(bounds.length())));
}

SensorTrace pad_or_truncate(const SensorTrace& trace, int length) {
  if (length <= 0) fail(ErrorCode::InvalidLength, "length must be positive");
  const auto len = static_cast<std::size_t>(length);
  const std::size_t n = trace.size();
  if (n >= len) {
    return crop(trace, {0, len});
  }
  const double dt = n >= 2 ? trace.duration() / static_cast<double>(n - 1) : 0.01;
  const double t_last = n > 0 ? trace.timestamps().back() : -dt;
  std::vector<double> ts = trace.timestamps();
  ts.reserve(len);
  for (std::size_t k = 1; ts.size() < len; ++k) ts.push_back(t_last + static_cast<double>(k) * dt);
  Series3 out = Series3::Zero(static_cast<Eigen::Index>(len), 3);
  out.topRows(static_cast<Eigen::Index>(n)) = trace.samples();
  return SensorTrace(trace.kind(), std::move(ts), std::move(out));
}

SignatureSample preprocess(const SignatureSample& sample, const PreprocessConfig& config) {
  if (!sample.has(SensorKind::LinearAccelerometer)) {
    fail(ErrorCode::MissingSensor,
         sample_id(sample) + " has no linear accelerometer trace for movement detection");
  }
  if (!(config.target_hz > 0.0)) fail(ErrorCode::InvalidArgument, "target_hz must be positive");

  double lo = -INFINITY;
  double hi = INFINITY;
  for (const auto& [kind, trace] : sample.traces) {
    if (trace.size() < 2) {
      fail(ErrorCode::InsufficientData, sample_id(sample) + ": trace with fewer than 2 samples");
    }
    lo = std::max(lo, trace.timestamps().front());
    hi = std::min(hi, trace.timestamps().back());
  }
  if (!(hi > lo)) fail(ErrorCode::InsufficientData, sample_id(sample) + ": traces do not overlap");
  const std::size_t count = grid_count(hi - lo, config.target_hz);

  SignatureSample out = sample;
  out.traces.clear();
  std::map<SensorKind, SensorTrace> resampled;
  for (const auto& [kind, trace] : sample.traces) {
    resampled.emplace(kind, resample_onto(trace, lo, config.target_hz, count));
  }

  SegmentBounds bounds = detect_movement(resampled.at(SensorKind::LinearAccelerometer), config.tau,
                                         config.win_s, config.hop_s);
  if (config.profile == PreprocessProfile::Reconstruct && config.reconstruct_margin_s > 0.0) {
    const auto margin = static_cast<std::size_t>(std::llround(config.reconstruct_margin_s * config.target_hz));
    bounds.start_index = bounds.start_index > margin ? bounds.start_index - margin : 0;
    bounds.end_index = std::min(count, bounds.end_index + margin);
  }

  for (const auto& [kind, trace] : resampled) {
    SensorTrace t = crop(trace, bounds);
    if (config.profile == PreprocessProfile::Verify) {
      t = zscore_normalize(t);
      if (config.smooth_window > 1) t = moving_average(t, config.smooth_window);
    }
    out.traces.emplace(kind, std::move(t));
  }

  if (sample.ground_truth) {
    out.ground_truth = carry_ground_truth(*sample.ground_truth,
                                          make_grid(lo, config.target_hz, count), bounds);
  }
  return out;
}

}  // namespace airsig
