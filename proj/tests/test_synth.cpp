#include "helpers.hpp"
#include "oracles.hpp"

#include "airsig/batch.hpp"
#include "airsig/dtw.hpp"
#include "airsig/synth.hpp"
#include "airsig/trajectory.hpp"

#include <numbers>
#include <set>

using namespace airsig;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Ground-truth positions inside the gesture.
Series3 gesture_rows(const SignatureSample& s) {
  const GroundTruth& gt = *s.ground_truth;
  return gt.position.middleRows(static_cast<Eigen::Index>(gt.gesture_bounds.start_index),
                                static_cast<Eigen::Index>(gt.gesture_bounds.length()));
}

// Worst per-axis correlation of two paths after DTW alignment. Forgers do not
// reproduce the timing, so shapes are compared along the warping path.
double aligned_correlation(const Series3& a, const Series3& b) {
  const DtwResult r = dtw_distance(a, b);
  const auto n = static_cast<Eigen::Index>(r.warping_path.size());
  Series3 pa(n, 3), pb(n, 3);
  for (Eigen::Index k = 0; k < n; ++k) {
    pa.row(k) = a.row(static_cast<Eigen::Index>(r.warping_path[static_cast<std::size_t>(k)].first));
    pb.row(k) = b.row(static_cast<Eigen::Index>(r.warping_path[static_cast<std::size_t>(k)].second));
  }
  double worst = 1.0;
  for (int axis = 0; axis < 3; ++axis) worst = std::min(worst, oracle::pearson(pa.col(axis), pb.col(axis)));
  return worst;
}

std::vector<Quaternion> gesture_attitude(const SignatureSample& s, std::size_t n = 200) {
  const GroundTruth& gt = *s.ground_truth;
  std::vector<Quaternion> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * static_cast<double>(gt.gesture_bounds.length() - 1) /
                     static_cast<double>(n - 1);
    out.push_back(gt.orientation.quaternions[gt.gesture_bounds.start_index + static_cast<std::size_t>(x)]);
  }
  return out;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("templates stay inside the documented family") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SynthUserTemplate t = make_template("u" + std::to_string(seed), seed);
    CHECK(t.control_points.size() >= 8);
    CHECK(t.control_points.size() <= 16);
    CHECK(t.duration_s >= 1.5);
    CHECK(t.duration_s <= 4.0);
  }
}

TEST_CASE("generation is a pure function of its inputs") {
  const SynthUserTemplate t = make_template("u003", 3);
  CHECK(generate_sample(t, 2, 1, 9) == generate_sample(t, 2, 1, 9));
  CHECK(!(generate_sample(t, 2, 1, 9) == generate_sample(t, 2, 0, 9)));
  CHECK(!(generate_sample(t, 2, 1, 9) == generate_sample(t, 2, 1, 10)));
  CHECK(generate_forgery(t, 4, 1) == generate_forgery(t, 4, 1));
  CHECK(make_template("u003", 3).control_points == t.control_points);
}

TEST_CASE("level planar motion decomposes into gravity plus in-plane dynamics") {
  GestureModel g;
  for (int i = 0; i < 10; ++i) g.control_points.emplace_back(0.05 * i, 0.1 * std::sin(i), 1.2);
  g.duration_s = 2.0;
  const SignatureSample s = render_sample(g, NoiseModel::none(), 3.2, 1);
  const SensorTrace& acc = s.trace(SensorKind::Accelerometer);
  const SensorTrace& lin = s.trace(SensorKind::LinearAccelerometer);
  for (std::size_t k = 0; k < acc.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    const Vec3 a = g.at(acc.timestamps()[k]).acceleration;
    CHECK(acc.samples()(r, 2) == doctest::Approx(kStandardGravity).epsilon(1e-12));
    CHECK(std::abs(acc.samples()(r, 0) - a.x()) < 1e-12);
    CHECK(std::abs(lin.samples()(r, 1) - a.y()) < 1e-12);
    CHECK(std::abs(lin.samples()(r, 2)) < 1e-12);
  }
  CHECK(lin.samples().col(0).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("integrating the gyroscope reproduces the attitude") {
  SynthUserTemplate t = make_template("u010", 10);
  t.noise = NoiseModel::none();
  const SignatureSample s = generate_sample(t, 3, 1, 2);
  const SensorTrace& gyro = s.trace(SensorKind::Gyroscope);
  const auto& truth = s.ground_truth->orientation.quaternions;
  Quaternion q = truth.front();
  double worst = 0.0;
  for (std::size_t k = 1; k < gyro.size(); ++k) {
    const Vec3 w0 = gyro.samples().row(static_cast<Eigen::Index>(k - 1)).transpose();
    const Vec3 w1 = gyro.samples().row(static_cast<Eigen::Index>(k)).transpose();
    q = integrate_gyro(q, 0.5 * (w0 + w1), gyro.timestamps()[k] - gyro.timestamps()[k - 1],
                       GyroIntegrator::Exponential);
    worst = std::max(worst, angular_distance(q, truth[k]));
  }
  CHECK(worst < 0.5 * kDeg);
}

TEST_CASE("noise model perturbs the sampling grid and the signals") {
  const SynthUserTemplate t = make_template("u011", 11);
  SynthUserTemplate clean = t;
  clean.noise = NoiseModel::none();
  const SignatureSample noisy = generate_sample(t, 1, 0, 5);
  const SignatureSample quiet = generate_sample(clean, 1, 0, 5);
  const auto& ts = noisy.trace(SensorKind::Accelerometer).timestamps();
  double min_dt = 1.0;
  double max_dt = 0.0;
  for (std::size_t k = 1; k < ts.size(); ++k) {
    min_dt = std::min(min_dt, ts[k] - ts[k - 1]);
    max_dt = std::max(max_dt, ts[k] - ts[k - 1]);
  }
  CHECK(max_dt - min_dt > 0.002);
  const auto& qs = quiet.trace(SensorKind::Accelerometer).timestamps();
  for (std::size_t k = 1; k < qs.size(); ++k) CHECK(qs[k] - qs[k - 1] == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("forgeries copy the shape but not the wrist") {
  PopulationSpec spec;
  double worst_corr = 1.0;
  double smallest_angle = 1e9;
  for (const SynthUserTemplate& t : make_templates(spec)) {
    const SignatureSample genuine = generate_sample(t, 4, 0, spec.seed);
    const SignatureSample forgery = generate_forgery(t, spec.seed, 0);
    CHECK(forgery.label == Label::SkilledForgery);
    CHECK(forgery.session == 4);
    CHECK(forgery.user_id == t.user_id);

    worst_corr = std::min(worst_corr, aligned_correlation(gesture_rows(genuine), gesture_rows(forgery)));
    const auto qa = gesture_attitude(genuine);
    const auto qb = gesture_attitude(forgery);
    double mean = 0.0;
    for (std::size_t i = 0; i < qa.size(); ++i) mean += angular_distance(qa[i], qb[i]) / static_cast<double>(qa.size());
    smallest_angle = std::min(smallest_angle, mean);
  }
  MESSAGE("worst per-axis position correlation ", worst_corr, ", smallest mean attitude gap ",
          smallest_angle / kDeg, " deg");
  CHECK(worst_corr > 0.8);
  CHECK(smallest_angle > 10.0 * kDeg);
}

TEST_CASE("population layout") {
  PopulationSpec spec;
  spec.users = 3;
  spec.seed = 7;
  const auto pop = batch::generate_population(spec);
  CHECK(pop.size() == 3u * (4 * 2 + 4));
  std::set<std::string> ids;
  for (const auto& s : pop) {
    CHECK(s.session >= 1);
    CHECK(s.session <= 4);
    ids.insert(sample_id(s));
  }
  CHECK(ids.size() == pop.size());
  CHECK(pop == batch::generate_population(spec));
  CHECK(pop == batch::generate_population(spec, batch::Execution::Serial));

  spec.users = 0;
  testing::require_error(ErrorCode::InvalidArgument, [&] { batch::generate_population(spec); });
}

}  // TEST_SUITE
