#include "airsig/trajectory.hpp"

#include "airsig/error.hpp"

#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

namespace airsig {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> magnitude_spectrum(std::vector<double> signal) {
  const int n = static_cast<int>(signal.size());
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, signal.data(), reinterpret_cast<fftw_complex*>(spectrum.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> mag(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) mag[k] = std::abs(spectrum[k]);
  return mag;
}

void highpass_pass(Eigen::Ref<Eigen::VectorXd> x, double b0, double a1, bool reverse) {
  const Eigen::Index n = x.size();
  if (n == 0) return;
  auto idx = [&](Eigen::Index k) { return reverse ? n - 1 - k : k; };
  double x_prev = x(idx(0));
  double y_prev = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double xk = x(idx(k));
    const double y = b0 * (xk - x_prev) - a1 * y_prev;
    x_prev = xk;
    y_prev = y;
    x(idx(k)) = y;
  }
}

double uniform_rate(const std::vector<double>& timestamps) {
  if (timestamps.size() < 2) fail(ErrorCode::InsufficientData, "need at least 2 samples");
  return static_cast<double>(timestamps.size() - 1) / (timestamps.back() - timestamps.front());
}

}  // namespace

Quaternion madgwick_update(const Quaternion& state, const Vec3& accel, const Vec3& gyro, double dt,
                           double beta, GyroIntegrator integrator) {
  const Quaternion& q = state;
  Quaternion q_dot = q_multiply(q, {0.0, gyro.x(), gyro.y(), gyro.z()}) * 0.5;

  Quaternion correction{0.0, 0.0, 0.0, 0.0};
  const double a_norm = accel.norm();
  if (beta > 0.0 && a_norm >= 1e-6) {
    const Vec3 a = accel / a_norm;
    // Objective: world "up" seen in the body frame, q* (0,0,1) q, minus the
    // measured direction. Gradient = J^T f.
    const double f1 = 2.0 * (q.x * q.z - q.w * q.y) - a.x();
    const double f2 = 2.0 * (q.w * q.x + q.y * q.z) - a.y();
    const double f3 = 1.0 - 2.0 * (q.x * q.x + q.y * q.y) - a.z();
    Quaternion s{-2.0 * q.y * f1 + 2.0 * q.x * f2,
                 2.0 * q.z * f1 + 2.0 * q.w * f2 - 4.0 * q.x * f3,
                 -2.0 * q.w * f1 + 2.0 * q.z * f2 - 4.0 * q.y * f3,
                 2.0 * q.x * f1 + 2.0 * q.y * f2};
    // The step is normalized, so a gradient made of rounding error alone would
    // still move the estimate by beta * dt. Below this floor the residual is
    // treated as zero and the filter sits still at equilibrium.
    const double s_norm = s.norm();
    if (s_norm > 1e-12) correction = s * (beta / s_norm);
  }

  if (integrator == GyroIntegrator::Exponential) {
    const Quaternion propagated = integrate_gyro(q, gyro, dt, GyroIntegrator::Exponential);
    if (correction == Quaternion{0.0, 0.0, 0.0, 0.0}) return propagated;
    return (propagated - correction * dt).normalized();
  }
  if (!(correction == Quaternion{0.0, 0.0, 0.0, 0.0})) q_dot = q_dot - correction;
  return (q + q_dot * dt).normalized();
}

Quaternion attitude_from_gravity(const Vec3& accel) {
  if (accel.norm() < 1e-6) return Quaternion::identity();
  const double roll = std::atan2(accel.y(), accel.z());
  const double pitch = std::atan2(-accel.x(), std::hypot(accel.y(), accel.z()));
  return Quaternion::from_euler(roll, pitch, 0.0);
}

OrientationSeries estimate_orientation(const SignatureSample& sample, double beta,
                                       GyroIntegrator integrator) {
  const SensorTrace& acc = sample.trace(SensorKind::Accelerometer);
  const SensorTrace& gyro = sample.trace(SensorKind::Gyroscope);
  if (acc.size() != gyro.size()) {
    fail(ErrorCode::LengthMismatch, "accelerometer and gyroscope are not on a common grid");
  }
  OrientationSeries out;
  out.timestamps = acc.timestamps();
  const std::size_t n = acc.size();
  if (n == 0) return out;
  out.quaternions.resize(n);
  out.quaternions[0] = attitude_from_gravity(acc.samples().row(0).transpose());
  const auto& ts = acc.timestamps();
  for (std::size_t k = 1; k < n; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    out.quaternions[k] =
        madgwick_update(out.quaternions[k - 1], acc.samples().row(row).transpose(),
                        gyro.samples().row(row).transpose(), ts[k] - ts[k - 1], beta, integrator);
  }
  enforce_sign_continuity(out.quaternions);
  return out;
}

Series3 to_global_accel(const Series3& body_accel, const std::vector<Quaternion>& orientation,
                        double gravity) {
  if (static_cast<std::size_t>(body_accel.rows()) != orientation.size()) {
    fail(ErrorCode::LengthMismatch, "accelerometer has " + std::to_string(body_accel.rows()) +
                                        " rows but orientation has " +
                                        std::to_string(orientation.size()));
  }
  Series3 out(body_accel.rows(), 3);
  const Vec3 g(0.0, 0.0, gravity);
  for (Eigen::Index k = 0; k < body_accel.rows(); ++k) {
    out.row(k) = (q_rotate(orientation[static_cast<std::size_t>(k)], body_accel.row(k).transpose()) - g)
                     .transpose();
  }
  return out;
}

Series3 to_global_accel(const SignatureSample& sample, const OrientationSeries& orientation,
                        double gravity) {
  return to_global_accel(sample.trace(SensorKind::Accelerometer).samples(), orientation.quaternions,
                         gravity);
}

Series3 integrate_trapezoid(const Series3& series, double dt) {
  Series3 out(series.rows(), 3);
  if (series.rows() == 0) return out;
  out.row(0).setZero();
  for (Eigen::Index k = 1; k < series.rows(); ++k) {
    out.row(k) = out.row(k - 1) + 0.5 * dt * (series.row(k) + series.row(k - 1));
  }
  return out;
}

Kinematics integrate_motion(const Series3& accel_global, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  Kinematics k;
  k.velocity = integrate_trapezoid(accel_global, dt);
  k.position = integrate_trapezoid(k.velocity, dt);
  return k;
}

double dominant_frequency(const Series3& series, double rate_hz, double min_search_hz,
                          bool detrend) {
  const Eigen::Index n = series.rows();
  if (n < 4) fail(ErrorCode::InsufficientData, "spectrum needs more samples");
  Eigen::VectorXd x = series.rowwise().norm();
  if (detrend) {
    // Least-squares line over the sample index.
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    const double t_mean = t.mean();
    const double x_mean = x.mean();
    const double slope = ((t.array() - t_mean) * (x.array() - x_mean)).sum() /
                         (t.array() - t_mean).square().sum();
    x = x.array() - x_mean - slope * (t.array() - t_mean);
  } else {
    x.array() -= x.mean();
  }
  const auto mag = magnitude_spectrum(std::vector<double>(x.data(), x.data() + n));
  const double bin_hz = rate_hz / static_cast<double>(n);
  std::size_t best = 0;
  for (std::size_t k = 1; k < mag.size(); ++k) {
    if (static_cast<double>(k) * bin_hz <= min_search_hz) continue;
    if (best == 0 || mag[k] > mag[best]) best = k;
  }
  if (best == 0) fail(ErrorCode::InsufficientData, "no frequency bin above the search floor");
  return static_cast<double>(best) * bin_hz;
}

double select_cutoff(const Series3& series, double rate_hz, const CutoffRule& rule) {
  if (series.rows() < 16) fail(ErrorCode::InsufficientData, "cutoff selection needs >= 16 samples");
  const double f_dom = dominant_frequency(series, rate_hz, rule.min_search_hz, rule.detrend);
  return std::clamp(rule.fraction * f_dom, rule.min_hz, rule.max_hz);
}

Series3 highpass(const Series3& series, double cutoff_hz, double rate_hz, bool zero_phase) {
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < rate_hz / 2.0)) {
    fail(ErrorCode::InvalidCutoff, "cutoff " + std::to_string(cutoff_hz) +
                                       " Hz outside (0, " + std::to_string(rate_hz / 2.0) + ")");
  }
  const double k = std::tan(M_PI * cutoff_hz / rate_hz);
  const double b0 = 1.0 / (1.0 + k);
  const double a1 = (k - 1.0) / (k + 1.0);
  Series3 out = series;
  for (int axis = 0; axis < 3; ++axis) {
    highpass_pass(out.col(axis), b0, a1, false);
    if (zero_phase) highpass_pass(out.col(axis), b0, a1, true);
  }
  return out;
}

DriftFilterResult drift_filter(const Series3& raw_velocity, double rate_hz,
                               const ReconstructConfig& config) {
  DriftFilterResult out;
  out.velocity_cutoff_hz =
      config.velocity_cutoff_hz.value_or(0.0) > 0.0
          ? *config.velocity_cutoff_hz
          : select_cutoff(raw_velocity, rate_hz, config.cutoff);
  out.velocity = highpass(raw_velocity, out.velocity_cutoff_hz, rate_hz, config.zero_phase);
  out.velocity.rowwise() -= out.velocity.row(0).eval();

  const Series3 position = integrate_trapezoid(out.velocity, 1.0 / rate_hz);
  out.position_cutoff_hz = config.position_cutoff_hz.value_or(0.0) > 0.0
                               ? *config.position_cutoff_hz
                               : select_cutoff(position, rate_hz, config.cutoff);
  out.position = highpass(position, out.position_cutoff_hz, rate_hz, config.zero_phase);
  out.position.rowwise() -= out.position.row(0).eval();
  return out;
}

Trajectory3D reconstruct(const SignatureSample& sample, const ReconstructConfig& config) {
  const SensorTrace& acc = sample.trace(SensorKind::Accelerometer);
  sample.trace(SensorKind::Gyroscope);
  const double rate = uniform_rate(acc.timestamps());

  std::vector<Quaternion> attitude;
  if (config.orientation == OrientationSource::GroundTruth) {
    if (!sample.ground_truth) {
      fail(ErrorCode::MissingGroundTruth, sample_id(sample) + " has no ground-truth orientation");
    }
    attitude = sample.ground_truth->orientation.quaternions;
  } else {
    attitude = estimate_orientation(sample, config.beta, config.integrator).quaternions;
  }

  Trajectory3D traj;
  traj.timestamps = acc.timestamps();
  traj.accel_global = to_global_accel(acc.samples(), attitude, config.gravity);
  const Series3 raw_velocity = integrate_trapezoid(traj.accel_global, 1.0 / rate);
  DriftFilterResult filtered = drift_filter(raw_velocity, rate, config);
  traj.velocity = std::move(filtered.velocity);
  traj.position = std::move(filtered.position);
  traj.velocity_cutoff_hz = filtered.velocity_cutoff_hz;
  traj.position_cutoff_hz = filtered.position_cutoff_hz;
  return traj;
}

Series3 filtered_ground_truth(const SignatureSample& sample, double rate_hz,
                              double velocity_cutoff_hz, double position_cutoff_hz,
                              bool zero_phase) {
  if (!sample.ground_truth) {
    fail(ErrorCode::MissingGroundTruth, sample_id(sample) + " has no ground truth");
  }
  ReconstructConfig config;
  config.velocity_cutoff_hz = velocity_cutoff_hz;
  config.position_cutoff_hz = position_cutoff_hz;
  config.zero_phase = zero_phase;
  return drift_filter(sample.ground_truth->velocity, rate_hz, config).position;
}

Series2 project_to_plane(const Series3& position) {
  const Eigen::Index n = position.rows();
  if (n < 3) fail(ErrorCode::DegenerateGeometry, "projection needs at least 3 points");
  const Eigen::RowVector3d centroid = position.colwise().mean();
  const Series3 centered = position.rowwise() - centroid;
  const Eigen::Matrix3d cov = centered.transpose() * centered / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d lambda = eig.eigenvalues();  // ascending
  if (!(lambda(2) > 1e-18) || lambda(1) <= 1e-9 * lambda(2)) {
    fail(ErrorCode::DegenerateGeometry, "position cloud is collinear or coincident");
  }
  Eigen::Matrix<double, 3, 2> axes;
  axes.col(0) = eig.eigenvectors().col(2);
  axes.col(1) = eig.eigenvectors().col(1);
  Series2 projected = centered * axes;

  const Eigen::VectorXd order = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)).array() -
                                static_cast<double>(n - 1) / 2.0;
  for (int c = 0; c < 2; ++c) {
    if (projected.col(c).dot(order) < 0.0) projected.col(c) *= -1.0;
  }
  return projected;
}

Series2 project_to_plane(const Trajectory3D& trajectory) {
  return project_to_plane(trajectory.position);
}

}  // namespace airsig
