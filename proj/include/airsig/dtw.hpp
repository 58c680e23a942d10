#pragma once

#include "airsig/sample.hpp"
#include "airsig/trace.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace airsig {

struct DtwResult {
  double distance = 0.0;
  std::size_t path_length = 0;
  std::vector<std::pair<std::size_t, std::size_t>> warping_path;
};

enum class DtwMode {
  /// One alignment over 3-D frames with Euclidean local cost.
  Multivariate,
  /// Independent 1-D alignment per axis; scores averaged over the axes.
  PerAxis,
};

struct DtwOptions {
  /// Sakoe-Chiba radius in samples around the (length-scaled) diagonal.
  /// Negative disables the constraint.
  int band = -1;
  DtwMode mode = DtwMode::Multivariate;
};

struct MatchScore {
  double value = 0.0;
  std::map<SensorKind, double> per_sensor;
};

using SensorSet = std::set<SensorKind>;

/// Fusion weights indexed by SensorKind. Missing sensors in a set are skipped.
using SensorWeights = std::array<double, 3>;
inline constexpr SensorWeights kEqualWeights{1.0, 1.0, 1.0};

/// Accumulated cost and cell count of the optimal path without storing it.
struct DtwCost {
  double distance = 0.0;
  std::size_t path_length = 0;
};

/// Classic DTW with steps (1,0), (0,1), (1,1), unit weights and per-frame
/// Euclidean local cost. Among equal-cost predecessors the diagonal is
/// preferred, then (i-1, j), then (i, j-1); path_length counts path cells.
DtwResult dtw_distance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                       const Eigen::Ref<const Eigen::MatrixXd>& b, int band = -1);

/// Same recurrence and tie rule as dtw_distance in O(M) memory.
DtwCost dtw_cost(const Eigen::Ref<const Eigen::MatrixXd>& a,
                 const Eigen::Ref<const Eigen::MatrixXd>& b, int band = -1);

/// 1 - exp(-d / K).
double score_from_cost(const DtwCost& cost);

MatchScore dtw_score(const Eigen::Ref<const Eigen::MatrixXd>& a,
                     const Eigen::Ref<const Eigen::MatrixXd>& b, const DtwOptions& options = {});

/// Per-sensor DTW scores fused by weighted mean.
MatchScore score_pair(const SignatureSample& probe, const SignatureSample& reference,
                      const SensorSet& sensors, const DtwOptions& options = {},
                      const SensorWeights& weights = kEqualWeights);

/// Weighted mean of per-sensor scores; sensors absent from `per_sensor` are ignored.
double fuse(const std::map<SensorKind, double>& per_sensor, const SensorWeights& weights);

/// Mean of score_pair over the enrollment set (1vs1 for one reference, 4vs1 for four).
MatchScore verify(const std::vector<SignatureSample>& enrollment, const SignatureSample& probe,
                  const SensorSet& sensors, const DtwOptions& options = {},
                  const SensorWeights& weights = kEqualWeights);

/// Mean of already computed pair scores, per sensor and fused.
MatchScore average_scores(const std::vector<MatchScore>& scores);

}  // namespace airsig
