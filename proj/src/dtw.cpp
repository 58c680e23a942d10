#include "airsig/dtw.hpp"

#include "airsig/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace airsig {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using ConstRef = Eigen::Ref<const Eigen::MatrixXd>;

double local_cost(const ConstRef& a, Eigen::Index i, const ConstRef& b, Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double d = a(i, c) - b(j, c);
    sum += d * d;
  }
  return std::sqrt(sum);
}

void check_inputs(const ConstRef& a, const ConstRef& b) {
  if (a.rows() == 0 || b.rows() == 0) fail(ErrorCode::EmptySequence, "DTW on an empty sequence");
  if (a.cols() != b.cols()) {
    fail(ErrorCode::DimensionMismatch, "DTW frames of different dimension");
  }
}

// Sakoe-Chiba membership around the length-scaled diagonal. The radius is
// widened to the diagonal slope so the admissible region stays connected.
struct Band {
  bool enabled = false;
  double slope = 1.0;
  double radius = 0.0;

  Band(int band, Eigen::Index n, Eigen::Index m) {
    if (band < 0) return;
    enabled = true;
    slope = n > 1 ? static_cast<double>(m - 1) / static_cast<double>(n - 1) : 0.0;
    const double steep = std::max(slope, slope > 0.0 ? 1.0 / slope : 1.0);
    radius = std::max(static_cast<double>(band), steep);
  }

  bool admits(Eigen::Index i, Eigen::Index j) const {
    return !enabled || std::abs(static_cast<double>(j) - slope * static_cast<double>(i)) <= radius;
  }
};

enum Step : unsigned char { kStart, kDiag, kUp, kLeft };

}  // namespace

DtwResult dtw_distance(const ConstRef& a, const ConstRef& b, int band) {
  check_inputs(a, b);
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  const Band region(band, n, m);

  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, m, kInf);
  Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic> len(n, m);
  std::vector<unsigned char> step(static_cast<std::size_t>(n * m), kStart);
  auto at = [m](Eigen::Index i, Eigen::Index j) { return static_cast<std::size_t>(i * m + j); };

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!region.admits(i, j)) continue;
      const double c = local_cost(a, i, b, j);
      if (i == 0 && j == 0) {
        cost(0, 0) = c;
        len(0, 0) = 1;
        continue;
      }
      double best = kInf;
      Step from = kStart;
      std::size_t best_len = 0;
      if (i > 0 && j > 0 && cost(i - 1, j - 1) < best) {
        best = cost(i - 1, j - 1);
        best_len = len(i - 1, j - 1);
        from = kDiag;
      }
      if (i > 0 && cost(i - 1, j) < best) {
        best = cost(i - 1, j);
        best_len = len(i - 1, j);
        from = kUp;
      }
      if (j > 0 && cost(i, j - 1) < best) {
        best = cost(i, j - 1);
        best_len = len(i, j - 1);
        from = kLeft;
      }
      if (from == kStart) continue;
      cost(i, j) = c + best;
      len(i, j) = best_len + 1;
      step[at(i, j)] = from;
    }
  }

  DtwResult result;
  result.distance = cost(n - 1, m - 1);
  result.path_length = len(n - 1, m - 1);
  result.warping_path.reserve(result.path_length);
  Eigen::Index i = n - 1;
  Eigen::Index j = m - 1;
  while (true) {
    result.warping_path.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    const unsigned char s = step[at(i, j)];
    if (s == kStart) break;
    if (s == kDiag) {
      --i;
      --j;
    } else if (s == kUp) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(result.warping_path.begin(), result.warping_path.end());
  return result;
}

DtwCost dtw_cost(const ConstRef& a, const ConstRef& b, int band) {
  check_inputs(a, b);
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  const Band region(band, n, m);

  std::vector<double> prev(static_cast<std::size_t>(m), kInf);
  std::vector<double> curr(static_cast<std::size_t>(m), kInf);
  std::vector<std::size_t> prev_len(static_cast<std::size_t>(m), 0);
  std::vector<std::size_t> curr_len(static_cast<std::size_t>(m), 0);

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      curr[uj] = kInf;
      curr_len[uj] = 0;
      if (!region.admits(i, j)) continue;
      const double c = local_cost(a, i, b, j);
      if (i == 0 && j == 0) {
        curr[0] = c;
        curr_len[0] = 1;
        continue;
      }
      double best = kInf;
      std::size_t best_len = 0;
      if (i > 0 && j > 0 && prev[uj - 1] < best) {
        best = prev[uj - 1];
        best_len = prev_len[uj - 1];
      }
      if (i > 0 && prev[uj] < best) {
        best = prev[uj];
        best_len = prev_len[uj];
      }
      if (j > 0 && curr[uj - 1] < best) {
        best = curr[uj - 1];
        best_len = curr_len[uj - 1];
      }
      if (best == kInf) continue;
      curr[uj] = c + best;
      curr_len[uj] = best_len + 1;
    }
    std::swap(prev, curr);
    std::swap(prev_len, curr_len);
  }
  const auto last = static_cast<std::size_t>(m - 1);
  return {prev[last], prev_len[last]};
}

double score_from_cost(const DtwCost& cost) {
  return -std::expm1(-cost.distance / static_cast<double>(cost.path_length));
}

MatchScore dtw_score(const ConstRef& a, const ConstRef& b, const DtwOptions& options) {
  MatchScore score;
  if (options.mode == DtwMode::Multivariate) {
    score.value = score_from_cost(dtw_cost(a, b, options.band));
    return score;
  }
  check_inputs(a, b);
  double sum = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    sum += score_from_cost(dtw_cost(a.col(c), b.col(c), options.band));
  }
  score.value = sum / static_cast<double>(a.cols());
  return score;
}

double fuse(const std::map<SensorKind, double>& per_sensor, const SensorWeights& weights) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& [kind, value] : per_sensor) {
    const double w = weights[static_cast<std::size_t>(kind)];
    num += w * value;
    den += w;
  }
  if (!(den > 0.0)) fail(ErrorCode::InvalidArgument, "fusion weights sum to zero");
  return num / den;
}

MatchScore score_pair(const SignatureSample& probe, const SignatureSample& reference,
                      const SensorSet& sensors, const DtwOptions& options,
                      const SensorWeights& weights) {
  if (sensors.empty()) fail(ErrorCode::InvalidArgument, "empty sensor set");
  MatchScore score;
  for (SensorKind kind : sensors) {
    score.per_sensor[kind] =
        dtw_score(probe.trace(kind).samples(), reference.trace(kind).samples(), options).value;
  }
  score.value = fuse(score.per_sensor, weights);
  return score;
}

MatchScore average_scores(const std::vector<MatchScore>& scores) {
  if (scores.empty()) fail(ErrorCode::EmptyEnrollment, "no scores to average");
  MatchScore mean;
  for (const auto& s : scores) {
    mean.value += s.value;
    for (const auto& [kind, v] : s.per_sensor) mean.per_sensor[kind] += v;
  }
  const double n = static_cast<double>(scores.size());
  mean.value /= n;
  for (auto& [kind, v] : mean.per_sensor) v /= n;
  return mean;
}

MatchScore verify(const std::vector<SignatureSample>& enrollment, const SignatureSample& probe,
                  const SensorSet& sensors, const DtwOptions& options,
                  const SensorWeights& weights) {
  if (enrollment.empty()) fail(ErrorCode::EmptyEnrollment, "verification needs enrollment samples");
  std::vector<MatchScore> scores;
  scores.reserve(enrollment.size());
  for (const auto& ref : enrollment) scores.push_back(score_pair(probe, ref, sensors, options, weights));
  return average_scores(scores);
}

}  // namespace airsig
