#include "helpers.hpp"
#include "oracles.hpp"

#include "airsig/dtw.hpp"

#include <cmath>

using namespace airsig;
using testing::require_error;

namespace {

Eigen::MatrixXd random_series(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  }
  return m;
}

double path_cost(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                 const std::vector<std::pair<std::size_t, std::size_t>>& path) {
  double sum = 0.0;
  for (const auto& [i, j] : path) {
    sum += oracle::frame_distance(a, b, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return sum;
}

SignatureSample single_frame_sample(const std::map<SensorKind, double>& offsets) {
  SignatureSample s;
  s.user_id = "u000";
  for (const auto& [kind, x] : offsets) {
    Series3 v(1, 3);
    v << x, 0.0, 0.0;
    s.traces.emplace(kind, SensorTrace(kind, {0.0}, v));
  }
  return s;
}

}  // namespace

TEST_SUITE("dtw") {

TEST_CASE("DP distance equals the brute-force minimum over all monotone paths") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> len(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd a = random_series(rng, len(rng), 3);
    const Eigen::MatrixXd b = random_series(rng, len(rng), 3);
    const oracle::PathCost expected = oracle::brute_force_dtw(a, b);
    const DtwResult got = dtw_distance(a, b);
    CHECK(got.distance == expected.distance);
    CHECK(dtw_cost(a, b).distance == expected.distance);
    CHECK(path_cost(a, b, got.warping_path) == doctest::Approx(got.distance).epsilon(1e-12));
  }
}

TEST_CASE("warping path is monotone, connected and anchored") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd a = random_series(rng, 3 + trial % 17, 3);
    const Eigen::MatrixXd b = random_series(rng, 2 + trial % 11, 3);
    const DtwResult r = dtw_distance(a, b);
    REQUIRE(!r.warping_path.empty());
    CHECK(r.warping_path.front() == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(r.warping_path.back() ==
          std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(a.rows() - 1),
                                              static_cast<std::size_t>(b.rows() - 1)});
    CHECK(r.path_length == r.warping_path.size());
    CHECK(dtw_cost(a, b).path_length == r.path_length);
    for (std::size_t k = 1; k < r.warping_path.size(); ++k) {
      const auto di = r.warping_path[k].first - r.warping_path[k - 1].first;
      const auto dj = r.warping_path[k].second - r.warping_path[k - 1].second;
      CHECK(di <= 1);
      CHECK(dj <= 1);
      CHECK(di + dj >= 1);
    }
  }
}

TEST_CASE("symmetry and identity on random cases") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::MatrixXd a = random_series(rng, len(rng), 3);
    const Eigen::MatrixXd b = random_series(rng, len(rng), 3);
    const DtwCost ab = dtw_cost(a, b);
    const DtwCost ba = dtw_cost(b, a);
    CHECK(ab.distance == doctest::Approx(ba.distance).epsilon(1e-12));
    CHECK(dtw_cost(a, a).distance == 0.0);
    CHECK(ab.distance >= 0.0);
  }
}

TEST_CASE("identical series align on the diagonal") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd a = random_series(rng, 12, 3);
  const DtwResult r = dtw_distance(a, a);
  CHECK(r.distance == 0.0);
  CHECK(r.path_length == 12);
  for (std::size_t k = 0; k < r.warping_path.size(); ++k) {
    CHECK(r.warping_path[k] == std::pair<std::size_t, std::size_t>{k, k});
  }
}

TEST_CASE("two-by-three example from path enumeration") {
  Eigen::MatrixXd a(2, 1);
  a << 0, 1;
  Eigen::MatrixXd b(3, 1);
  b << 0, 1, 1;
  const DtwResult r = dtw_distance(a, b);
  CHECK(r.distance == 0.0);
  CHECK(r.path_length == 3);
  CHECK(oracle::brute_force_dtw(a, b).distance == 0.0);
}

TEST_CASE("distance is zero only for sequences identical under the local cost") {
  Eigen::MatrixXd a(3, 3);
  a << 0, 0, 0, 1, 1, 1, 2, 2, 2;
  Eigen::MatrixXd b = a;
  b(1, 2) += 1e-6;
  CHECK(dtw_cost(a, b).distance > 0.0);
}

TEST_CASE("band constraint never lowers the cost and is inactive when wide") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd a = random_series(rng, 20 + trial, 3);
    const Eigen::MatrixXd b = random_series(rng, 15 + 2 * trial, 3);
    const double free = dtw_cost(a, b).distance;
    CHECK(dtw_cost(a, b, 3).distance >= free);
    CHECK(dtw_cost(a, b, 1000).distance == free);
    CHECK(dtw_distance(a, b, 3).distance == dtw_cost(a, b, 3).distance);
  }
}

TEST_CASE("empty sequences are rejected") {
  const Eigen::MatrixXd empty(0, 3);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 3);
  require_error(ErrorCode::EmptySequence, [&] { dtw_distance(empty, one); });
  require_error(ErrorCode::EmptySequence, [&] { dtw_cost(one, empty); });
}

TEST_CASE("score mapping") {
  CHECK(score_from_cost({0.0, 5}) == 0.0);
  CHECK(score_from_cost({4.0, 4}) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(score_from_cost({30.0, 1}) < 1.0);
  double previous = -1.0;
  for (double d = 0.0; d < 30.0; d += 0.25) {
    const double s = score_from_cost({d, 7});
    CHECK(s > previous);
    CHECK(s < 1.0);
    previous = s;
  }
}

TEST_CASE("per-axis mode averages independent one-dimensional alignments") {
  std::mt19937_64 rng(42);
  const Eigen::MatrixXd a = random_series(rng, 9, 3);
  const Eigen::MatrixXd b = random_series(rng, 6, 3);
  DtwOptions options;
  options.mode = DtwMode::PerAxis;
  double expected = 0.0;
  for (int c = 0; c < 3; ++c) {
    const oracle::PathCost pc = oracle::brute_force_dtw(a.col(c), b.col(c));
    const DtwCost cost = dtw_cost(a.col(c), b.col(c));
    CHECK(cost.distance == pc.distance);
    expected += score_from_cost(cost) / 3.0;
  }
  CHECK(dtw_score(a, b, options).value == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("score_pair fusion") {
  // One-frame traces: d is the frame distance and K = 1, so the score is
  // 1 - exp(-d) and offsets can be chosen to hit exact per-sensor scores.
  const auto offset = [](double score) { return -std::log(1.0 - score); };
  const SignatureSample probe = single_frame_sample(
      {{SensorKind::Accelerometer, 0.0}, {SensorKind::LinearAccelerometer, 0.0}, {SensorKind::Gyroscope, 0.0}});
  const SignatureSample reference = single_frame_sample({{SensorKind::Accelerometer, offset(0.2)},
                                                         {SensorKind::LinearAccelerometer, offset(0.4)},
                                                         {SensorKind::Gyroscope, offset(0.6)}});
  const SensorSet all{SensorKind::Accelerometer, SensorKind::LinearAccelerometer, SensorKind::Gyroscope};
  const MatchScore s = score_pair(probe, reference, all);
  CHECK(s.per_sensor.at(SensorKind::Accelerometer) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(s.per_sensor.at(SensorKind::Gyroscope) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(s.value == doctest::Approx(0.4).epsilon(1e-12));

  const MatchScore single = score_pair(probe, reference, {SensorKind::Gyroscope});
  CHECK(single.value == single.per_sensor.at(SensorKind::Gyroscope));

  const MatchScore weighted = score_pair(probe, reference, all, {}, {1.0, 0.0, 3.0});
  CHECK(weighted.value == doctest::Approx((0.2 + 3 * 0.6) / 4).epsilon(1e-12));

  const MatchScore self = score_pair(probe, probe, all);
  CHECK(self.value == 0.0);
  for (const auto& [kind, v] : self.per_sensor) CHECK(v == 0.0);

  SignatureSample no_gyro = probe;
  no_gyro.traces.erase(SensorKind::Gyroscope);
  require_error(ErrorCode::MissingSensor, [&] { score_pair(no_gyro, reference, all); });
}

TEST_CASE("verify averages pair scores over the enrollment set") {
  const auto offset = [](double score) { return -std::log(1.0 - score); };
  const SignatureSample probe = single_frame_sample({{SensorKind::Accelerometer, 0.0}});
  std::vector<SignatureSample> enrollment;
  for (double s : {0.1, 0.2, 0.3, 0.4}) {
    enrollment.push_back(single_frame_sample({{SensorKind::Accelerometer, offset(s)}}));
  }
  const SensorSet acc{SensorKind::Accelerometer};
  const MatchScore m = verify(enrollment, probe, acc);
  CHECK(m.value == doctest::Approx(0.25).epsilon(1e-12));
  double worst = 0.0;
  for (const auto& ref : enrollment) worst = std::max(worst, score_pair(probe, ref, acc).value);
  CHECK(m.value <= worst);

  CHECK(verify({probe}, probe, acc).value == 0.0);
  const std::vector<SignatureSample> copies(4, enrollment[2]);
  CHECK(verify(copies, probe, acc).value == doctest::Approx(score_pair(probe, enrollment[2], acc).value).epsilon(1e-15));
  require_error(ErrorCode::EmptyEnrollment, [&] { verify({}, probe, acc); });
}

}  // TEST_SUITE
