#include "helpers.hpp"
#include "oracles.hpp"

#include "airsig/signal.hpp"
#include "airsig/synth.hpp"

#include <numbers>

using namespace airsig;
using testing::make_trace;
using testing::require_error;

namespace {

SensorTrace column(std::vector<double> values) {
  Series3 x = Series3::Zero(static_cast<Eigen::Index>(values.size()), 3);
  for (std::size_t i = 0; i < values.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = values[i];
  return {SensorKind::Accelerometer, oracle::uniform_grid(values.size(), 100.0), std::move(x)};
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("trace construction rejects non-increasing timestamps and non-finite values") {
  Series3 x = Series3::Zero(3, 3);
  require_error(ErrorCode::MalformedTrace, [&] { SensorTrace(SensorKind::Gyroscope, {0.0, 0.02, 0.01}, x); });
  x(1, 2) = std::nan("");
  require_error(ErrorCode::MalformedTrace, [&] { SensorTrace(SensorKind::Gyroscope, {0.0, 0.01, 0.02}, x); });
}

TEST_CASE("moving average matches the shrinking-window definition") {
  const SensorTrace out = moving_average(column({0, 0, 5, 0, 0}), 5);
  const std::vector<double> expected{5.0 / 3, 5.0 / 4, 1.0, 5.0 / 4, 5.0 / 3};
  for (int i = 0; i < 5; ++i) CHECK(out.samples()(i, 0) == doctest::Approx(expected[i]).epsilon(1e-15));
}

TEST_CASE("moving average preserves constants, window 1 and sign flips") {
  std::mt19937_64 rng(3);
  const SensorTrace noise = testing::random_trace(SensorKind::Accelerometer, 50, rng);
  const SensorTrace constant =
      make_trace(SensorKind::Accelerometer, 40, 100.0, [](double) { return Eigen::RowVector3d(2.5, -1.0, 0.0); });

  CHECK(moving_average(constant, 7).samples() == constant.samples());
  CHECK(moving_average(noise, 1).samples() == noise.samples());

  const SensorTrace flipped(noise.kind(), noise.timestamps(), -noise.samples());
  CHECK(moving_average(flipped, 5).samples() == -moving_average(noise, 5).samples());
}

TEST_CASE("moving average rejects even or oversized windows") {
  const SensorTrace t = column({1, 2, 3});
  require_error(ErrorCode::InvalidWindow, [&] { moving_average(t, 4); });
  require_error(ErrorCode::InvalidWindow, [&] { moving_average(t, 5); });
  require_error(ErrorCode::InvalidWindow, [&] { moving_average(t, 0); });
}

TEST_CASE("z-score gives zero mean and unit population std") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const SensorTrace t = testing::random_trace(SensorKind::Gyroscope, 10 + trial * 7, rng, 3.0 + trial);
    const Series3 z = zscore_normalize(t).samples();
    for (int axis = 0; axis < 3; ++axis) {
      const double mean = z.col(axis).mean();
      const double sd = std::sqrt((z.col(axis).array() - mean).square().mean());
      CHECK(std::abs(mean) < 1e-9);
      CHECK(std::abs(sd - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("z-score maps a flat axis to zeros") {
  const SensorTrace t = make_trace(SensorKind::Accelerometer, 30, 100.0,
                                   [](double s) { return Eigen::RowVector3d(std::sin(10 * s), 9.81, 0.0); });
  const Series3 z = zscore_normalize(t).samples();
  CHECK(z.col(1).isZero(0.0));
  CHECK(z.col(2).isZero(0.0));
  CHECK(z.col(0).squaredNorm() > 1.0);
}

TEST_CASE("resampling a jittered sine stays within 1% of the analytic signal") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> jitter(0.0, 0.1);
  std::vector<double> t{0.0};
  while (t.back() < 3.0) t.push_back(t.back() + 0.01 * (1.0 + jitter(rng)));
  const double f = 1.5;
  Series3 x(static_cast<Eigen::Index>(t.size()), 3);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double w = 2 * std::numbers::pi * f * t[i];
    x.row(static_cast<Eigen::Index>(i)) << std::sin(w), std::cos(w), 2 * std::sin(w);
  }
  const SensorTrace out = resample(SensorTrace(SensorKind::Accelerometer, t, x), 100.0);
  CHECK(out.rate_hz() == doctest::Approx(100.0).epsilon(1e-9));
  double worst = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = 2 * std::numbers::pi * f * out.timestamps()[i];
    worst = std::max(worst, std::abs(out.samples()(static_cast<Eigen::Index>(i), 0) - std::sin(w)));
    worst = std::max(worst, std::abs(out.samples()(static_cast<Eigen::Index>(i), 1) - std::cos(w)));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("resampling is exact on piecewise-linear signals") {
  // Breakpoints at the source samples, so linear interpolation reproduces it.
  const std::vector<double> t{0.0, 0.013, 0.021, 0.035, 0.040, 0.058, 0.071};
  const std::vector<double> v{1.0, -2.0, 0.5, 0.5, 3.0, 1.0, -1.0};
  Series3 x(7, 3);
  for (int i = 0; i < 7; ++i) x.row(i) << v[static_cast<std::size_t>(i)], 2 * v[static_cast<std::size_t>(i)], 0.0;
  const SensorTrace out = resample(SensorTrace(SensorKind::Gyroscope, t, x), 1000.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double tk = out.timestamps()[k];
    std::size_t seg = 0;
    while (seg + 2 < t.size() && t[seg + 1] < tk) ++seg;
    const double a = (tk - t[seg]) / (t[seg + 1] - t[seg]);
    const double expected = v[seg] + a * (v[seg + 1] - v[seg]);
    CHECK(std::abs(out.samples()(static_cast<Eigen::Index>(k), 0) - expected) <= 1e-12);
  }
}

TEST_CASE("movement detection localizes a burst within one hop") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> quiet(0.0, 0.01);
  std::normal_distribution<double> loud(0.0, 1.0);
  const SensorTrace t = make_trace(SensorKind::LinearAccelerometer, 400, 100.0, [&](double s) {
    auto& d = (s >= 1.5 && s < 2.5) ? loud : quiet;
    return Eigen::RowVector3d(d(rng), d(rng), d(rng));
  });
  const SegmentBounds b = detect_movement(t);
  // One hop of window geometry plus one sample of index rounding.
  const double tol = 0.1 + 0.01 + 1e-9;
  CHECK(std::abs(t.timestamps()[b.start_index] - 1.5) <= tol);
  CHECK(std::abs(t.timestamps()[b.end_index - 1] - 2.5) <= tol);
}

TEST_CASE("movement detection falls back to the full range") {
  const SensorTrace zeros =
      make_trace(SensorKind::LinearAccelerometer, 300, 100.0, [](double) { return Eigen::RowVector3d::Zero(); });
  CHECK(detect_movement(zeros) == SegmentBounds{0, 300});
  const SensorTrace flat =
      make_trace(SensorKind::LinearAccelerometer, 300, 100.0, [](double) { return Eigen::RowVector3d(1, 1, 1); });
  CHECK(detect_movement(flat) == SegmentBounds{0, 300});
}

TEST_CASE("movement detection is scale invariant") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  const SensorTrace t = make_trace(SensorKind::LinearAccelerometer, 500, 100.0, [&](double s) {
    const double a = s > 1.2 && s < 3.1 ? 1.0 : 0.05;
    return Eigen::RowVector3d(a * n(rng), a * n(rng), a * n(rng));
  });
  const SensorTrace scaled(t.kind(), t.timestamps(), 37.0 * t.samples());
  CHECK(detect_movement(t) == detect_movement(scaled));
}

TEST_CASE("movement detection needs at least one window") {
  const SensorTrace t = column({1, 2, 3, 4, 5});
  require_error(ErrorCode::InsufficientData, [&] { detect_movement(SensorTrace(SensorKind::LinearAccelerometer, t.timestamps(), t.samples())); });
}

TEST_CASE("pad_or_truncate") {
  std::mt19937_64 rng(2);
  const SensorTrace t600 = testing::random_trace(SensorKind::Accelerometer, 600, rng);
  const SensorTrace p = pad_or_truncate(t600, 1000);
  REQUIRE(p.size() == 1000);
  CHECK(p.samples().topRows(600) == t600.samples());
  CHECK(p.samples().bottomRows(400).isZero(0.0));

  const SensorTrace t1000 = testing::random_trace(SensorKind::Accelerometer, 1000, rng);
  CHECK(pad_or_truncate(t1000, 1000) == t1000);

  const SensorTrace t1500 = testing::random_trace(SensorKind::Accelerometer, 1500, rng);
  CHECK(pad_or_truncate(t1500, 1000).samples() == t1500.samples().topRows(1000));

  require_error(ErrorCode::InvalidLength, [&] { pad_or_truncate(t600, 0); });
}

TEST_CASE("preprocess is deterministic and requires the linear accelerometer") {
  const SynthUserTemplate tmpl = make_template("u000", 4);
  const SignatureSample s = generate_sample(tmpl, 2, 1, 9);
  CHECK(preprocess(s, {}) == preprocess(s, {}));

  SignatureSample missing = s;
  missing.traces.erase(SensorKind::LinearAccelerometer);
  require_error(ErrorCode::MissingSensor, [&] { preprocess(missing, {}); });
}

TEST_CASE("verify profile normalizes, reconstruct profile keeps physical units") {
  const SynthUserTemplate tmpl = make_template("u001", 12);
  const SignatureSample s = generate_sample(tmpl, 3, 0, 2);
  PreprocessConfig verify;
  PreprocessConfig rec;
  rec.profile = PreprocessProfile::Reconstruct;

  const SignatureSample v = preprocess(s, verify);
  const SignatureSample r = preprocess(s, rec);
  // Raw accelerometer carries gravity; a z-scored one has zero mean.
  const Eigen::RowVector3d mean_raw = r.trace(SensorKind::Accelerometer).samples().colwise().mean();
  CHECK(mean_raw.norm() > 5.0);
  CHECK(std::abs(v.trace(SensorKind::Accelerometer).samples().col(2).mean()) < 0.05);

  // The reconstruct crop is wider by the configured margin on each side.
  CHECK(r.trace(SensorKind::Accelerometer).size() > v.trace(SensorKind::Accelerometer).size());
  for (const auto& [kind, trace] : r.traces) {
    CHECK(trace.timestamps() == r.trace(SensorKind::Accelerometer).timestamps());
  }
  REQUIRE(r.ground_truth);
  CHECK(r.ground_truth->timestamps == r.trace(SensorKind::Accelerometer).timestamps());
}

TEST_CASE("cropped duration follows the true gesture duration") {
  // Noise-free synthetic population: the movement crop should track the
  // generated gesture to within two hops for the large majority of samples.
  PopulationSpec spec;
  int inside = 0;
  int total = 0;
  for (SynthUserTemplate tmpl : make_templates(spec)) {
    tmpl.noise = NoiseModel::none();
    for (int session = 1; session <= 4; ++session) {
      const SignatureSample s = generate_sample(tmpl, session, 0, 1);
      const GroundTruth& gt = *s.ground_truth;
      const double truth = gt.timestamps[gt.gesture_bounds.end_index - 1] -
                           gt.timestamps[gt.gesture_bounds.start_index];
      const double cropped = preprocess(s, {}).trace(SensorKind::Accelerometer).duration();
      inside += std::abs(truth - cropped) <= 0.2 ? 1 : 0;
      ++total;
    }
  }
  MESSAGE(inside, " of ", total, " crops within 2 hops of the gesture duration");
  CHECK(inside >= 0.9 * total);
}

}  // TEST_SUITE
