#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's algorithms; each oracle is the slowest obvious definition.

#include "airsig/eval.hpp"
#include "airsig/trace.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

struct PathCost {
  double distance = std::numeric_limits<double>::infinity();
  std::size_t cells = 0;
};

inline double frame_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::Index i,
                             Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) sum += (a(i, c) - b(j, c)) * (a(i, c) - b(j, c));
  return std::sqrt(sum);
}

// Enumerates every monotone path from (0,0) to (N-1,M-1) with unit steps and
// keeps the cheapest. Exponential, so only for N, M <= 6 or so.
inline void enumerate(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::Index i,
                      Eigen::Index j, double acc, std::size_t cells, PathCost& best) {
  acc += frame_distance(a, b, i, j);
  ++cells;
  if (i == a.rows() - 1 && j == b.rows() - 1) {
    if (acc < best.distance) best = {acc, cells};
    return;
  }
  if (i + 1 < a.rows() && j + 1 < b.rows()) enumerate(a, b, i + 1, j + 1, acc, cells, best);
  if (i + 1 < a.rows()) enumerate(a, b, i + 1, j, acc, cells, best);
  if (j + 1 < b.rows()) enumerate(a, b, i, j + 1, acc, cells, best);
}

inline PathCost brute_force_dtw(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  PathCost best;
  enumerate(a, b, 0, 0, 0.0, 0, best);
  return best;
}

struct Eer {
  double eer = 0.0;
  double threshold = 0.0;
};

// Tries every candidate threshold and counts FAR/FRR directly.
inline Eer exhaustive_eer(const std::vector<double>& genuine, const std::vector<double>& impostor) {
  std::vector<double> candidates{-std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::infinity()};
  candidates.insert(candidates.end(), genuine.begin(), genuine.end());
  candidates.insert(candidates.end(), impostor.begin(), impostor.end());
  std::sort(candidates.begin(), candidates.end());
  Eer best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (double t : candidates) {
    std::size_t accepted = 0;
    for (double s : impostor) accepted += s <= t ? 1 : 0;
    std::size_t rejected = 0;
    for (double s : genuine) rejected += s > t ? 1 : 0;
    const double far = static_cast<double>(accepted) / static_cast<double>(impostor.size());
    const double frr = static_cast<double>(rejected) / static_cast<double>(genuine.size());
    const double gap = std::abs(far - frr);
    if (gap < best_gap) {
      best_gap = gap;
      best = {(far + frr) / 2.0, t};
    }
  }
  return best;
}

// |X_k| of a real sequence by the defining sum.
inline std::vector<double> dft_magnitude(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * i) /
                                        static_cast<double>(n));
    }
    mag[k] = std::abs(sum);
  }
  return mag;
}

inline double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd x = a.array() - a.mean();
  const Eigen::VectorXd y = b.array() - b.mean();
  return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

// Position error relative to the bounding-box diagonal of the reference.
inline double relative_rmse(const airsig::Series3& estimate, const airsig::Series3& reference) {
  const double extent = (reference.colwise().maxCoeff() - reference.colwise().minCoeff()).norm();
  const double rmse = std::sqrt((estimate - reference).rowwise().squaredNorm().mean());
  return rmse / extent;
}

inline std::vector<double> uniform_grid(std::size_t n, double rate_hz, double t0 = 0.0) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t0 + static_cast<double>(i) / rate_hz;
  return t;
}

}  // namespace oracle
