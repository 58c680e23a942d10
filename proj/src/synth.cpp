#include "airsig/synth.hpp"

#include "airsig/error.hpp"
#include "airsig/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace airsig {
namespace {

using Rng = std::mt19937_64;

Rng make_rng(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double normal(Rng& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

struct Device {
  const char* model;
  double rate_hz;
  double noise_scale;
};

constexpr std::array<Device, 6> kDevices{{
    {"pixel-6", 100.0, 1.0},
    {"galaxy-s21", 200.0, 0.8},
    {"redmi-note-10", 100.0, 1.5},
    {"moto-g8", 100.0, 2.0},
    {"galaxy-a52", 200.0, 1.2},
    {"oneplus-9", 100.0, 0.9},
}};

NoiseModel device_noise(const Device& d) {
  NoiseModel n;
  n.accel_sigma *= d.noise_scale;
  n.gyro_sigma *= d.noise_scale;
  n.gyro_bias_sigma *= d.noise_scale;
  n.nominal_rate_hz = d.rate_hz;
  return n;
}

// Uniform cubic B-spline with tripled end points, so it starts at the first
// and ends at the last control point. Returns value, d/ds and d2/ds2, s in [0,1].
struct SplinePoint {
  Vec3 p, dp, ddp;
};

SplinePoint eval_spline(const std::vector<Vec3>& cps, double s) {
  std::vector<Vec3> padded;
  padded.reserve(cps.size() + 4);
  padded.push_back(cps.front());
  padded.push_back(cps.front());
  padded.insert(padded.end(), cps.begin(), cps.end());
  padded.push_back(cps.back());
  padded.push_back(cps.back());
  const auto segments = static_cast<double>(padded.size() - 3);
  s = std::clamp(s, 0.0, 1.0);
  const double u = s * segments;
  const auto i = std::min(static_cast<std::size_t>(u), padded.size() - 4);
  const double t = u - static_cast<double>(i);

  const std::array<double, 4> b{(1 - t) * (1 - t) * (1 - t) / 6.0,
                                (3 * t * t * t - 6 * t * t + 4) / 6.0,
                                (-3 * t * t * t + 3 * t * t + 3 * t + 1) / 6.0, t * t * t / 6.0};
  const std::array<double, 4> db{-(1 - t) * (1 - t) / 2.0, 1.5 * t * t - 2 * t,
                                 -1.5 * t * t + t + 0.5, t * t / 2.0};
  const std::array<double, 4> ddb{1 - t, 3 * t - 2, -3 * t + 1, t};

  SplinePoint out{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  for (std::size_t k = 0; k < 4; ++k) {
    out.p += b[k] * padded[i + k];
    out.dp += db[k] * padded[i + k];
    out.ddp += ddb[k] * padded[i + k];
  }
  out.dp *= segments;
  out.ddp *= segments * segments;
  return out;
}

// Angle and its derivative with respect to normalized gesture time.
std::pair<double, double> eval_angle(double base, const std::array<Wobble, 2>& wobbles,
                                     double tau) {
  if (tau <= 0.0 || tau >= 1.0) return {base, 0.0};
  double w = 0.0;
  double dw = 0.0;
  for (const Wobble& wb : wobbles) {
    const double arg = 2.0 * M_PI * wb.cycles * tau + wb.phase;
    w += wb.amplitude * std::sin(arg);
    dw += wb.amplitude * 2.0 * M_PI * wb.cycles * std::cos(arg);
  }
  const double env = std::sin(M_PI * tau) * std::sin(M_PI * tau);
  const double denv = M_PI * std::sin(2.0 * M_PI * tau);
  return {base + env * w, denv * w + env * dw};
}

Quaternion axis_quat(int axis, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  if (axis == 0) return {c, s, 0, 0};
  if (axis == 1) return {c, 0, s, 0};
  return {c, 0, 0, s};
}

// d/dt of axis_quat(axis, angle(t)) given angle rate.
Quaternion axis_quat_dot(int axis, double angle, double rate) {
  const double c = -std::sin(angle / 2.0) * rate / 2.0;
  const double s = std::cos(angle / 2.0) * rate / 2.0;
  if (axis == 0) return {c, s, 0, 0};
  if (axis == 1) return {c, 0, s, 0};
  return {c, 0, 0, s};
}

std::array<Wobble, 2> draw_wobbles(Rng& rng, double amp_lo, double amp_hi) {
  std::array<Wobble, 2> w;
  for (auto& wb : w) {
    wb.amplitude = uniform(rng, amp_lo, amp_hi);
    wb.cycles = uniform(rng, 0.5, 3.0);
    wb.phase = uniform(rng, 0.0, 2.0 * M_PI);
  }
  return w;
}

OrientationProfile draw_orientation(Rng& rng) {
  OrientationProfile o;
  o.base_roll = uniform(rng, -0.5, 0.5);
  o.base_pitch = uniform(rng, -0.5, 0.5);
  o.base_yaw = 0.0;
  o.roll = draw_wobbles(rng, 0.05, 0.25);
  o.pitch = draw_wobbles(rng, 0.05, 0.25);
  o.yaw = draw_wobbles(rng, 0.03, 0.12);
  return o;
}

void perturb_wobbles(std::array<Wobble, 2>& wobbles, Rng& rng, double amp_sigma,
                     double phase_sigma) {
  for (auto& wb : wobbles) {
    wb.amplitude *= std::max(0.0, 1.0 + normal(rng, amp_sigma));
    wb.phase += normal(rng, phase_sigma);
  }
}

// Per-axis bounding box size. Jitter scales with each axis separately so the
// shallow depth axis is not swamped by noise sized for the pen's width.
Vec3 extent_of(const std::vector<Vec3>& cps) {
  Vec3 lo = cps.front();
  Vec3 hi = cps.front();
  for (const Vec3& p : cps) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return hi - lo;
}

std::vector<Vec3> jitter_points(std::vector<Vec3> cps, Rng& rng, const Vec3& sigma) {
  for (Vec3& p : cps) p += Vec3(normal(rng, sigma.x()), normal(rng, sigma.y()), normal(rng, sigma.z()));
  return cps;
}

Series2 planar_reference(const std::vector<Vec3>& cps, int points = 200) {
  Series2 ref(points, 2);
  for (int k = 0; k < points; ++k) {
    const Vec3 p = eval_spline(cps, static_cast<double>(k) / (points - 1)).p;
    ref(k, 0) = p.x();
    ref(k, 1) = p.z();
  }
  return ref;
}

}  // namespace

MotionState GestureModel::at(double t) const {
  const double tau = std::clamp((t - start_s) / duration_s, 0.0, 1.0);

  // Warped progress along the spline, s(0) = 0, s(1) = 1. The tripled end
  // points already bring velocity and acceleration to zero at both ends.
  const double s = tau + warp * std::sin(2.0 * M_PI * tau) / (2.0 * M_PI);
  const double ds = 1.0 + warp * std::cos(2.0 * M_PI * tau);
  const double dds = -2.0 * M_PI * warp * std::sin(2.0 * M_PI * tau);

  const SplinePoint sp = eval_spline(control_points, s);
  const double inv_t = 1.0 / duration_s;

  MotionState st;
  st.position = sp.p;
  st.velocity = sp.dp * ds * inv_t;
  st.acceleration = (sp.ddp * ds * ds + sp.dp * dds) * inv_t * inv_t;

  const auto [roll, droll] = eval_angle(orientation.base_roll, orientation.roll, tau);
  const auto [pitch, dpitch] = eval_angle(orientation.base_pitch, orientation.pitch, tau);
  const auto [yaw, dyaw] = eval_angle(orientation.base_yaw, orientation.yaw, tau);
  const Quaternion qx = axis_quat(0, roll);
  const Quaternion qy = axis_quat(1, pitch);
  const Quaternion qz = axis_quat(2, yaw);
  const Quaternion qx_dot = axis_quat_dot(0, roll, droll * inv_t);
  const Quaternion qy_dot = axis_quat_dot(1, pitch, dpitch * inv_t);
  const Quaternion qz_dot = axis_quat_dot(2, yaw, dyaw * inv_t);

  st.orientation = q_multiply(q_multiply(qz, qy), qx);
  const Quaternion q_dot = q_multiply(q_multiply(qz_dot, qy), qx) +
                           q_multiply(q_multiply(qz, qy_dot), qx) +
                           q_multiply(q_multiply(qz, qy), qx_dot);
  // Inverse of q' = 1/2 q (x) [0, w].
  st.angular_velocity = 2.0 * q_multiply(st.orientation.conjugate(), q_dot).vec();
  return st;
}

SynthUserTemplate make_template(const std::string& user_id, std::uint64_t seed) {
  Rng rng = make_rng({seed, 0x7e3a1a7eULL});
  SynthUserTemplate t;
  t.user_id = user_id;
  t.seed = seed;

  const int n = std::uniform_int_distribution<int>(8, 16)(rng);
  const double width = uniform(rng, 0.25, 0.45);
  const double height = uniform(rng, 0.10, 0.25);
  const double depth = uniform(rng, 0.08, 0.16);
  const double slant = uniform(rng, -0.4, 0.4);
  Vec3 centroid = Vec3::Zero();
  double side = rng() % 2 == 0 ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) {
    // Handwriting-like up and down strokes: the vertical offset alternates in
    // sign while the pen advances left to right, sheared by a per-user slant.
    if (i > 0) side = -side;
    const double z = 0.5 * side * height * uniform(rng, 0.3, 1.0);
    const double x = width * (static_cast<double>(i) / (n - 1) + normal(rng, 0.12)) + slant * z;
    Vec3 p(x, depth * uniform(rng, -0.5, 0.5), z);
    t.control_points.push_back(p);
    centroid += p;
  }
  centroid /= n;
  for (Vec3& p : t.control_points) p -= centroid;

  t.duration_s = std::clamp(0.22 * n + uniform(rng, -0.3, 0.3), 1.5, 4.0);
  t.orientation = draw_orientation(rng);
  const Device& device = kDevices[std::uniform_int_distribution<std::size_t>(0, kDevices.size() - 1)(rng)];
  t.device_model = device.model;
  t.noise = device_noise(device);
  return t;
}

SignatureSample render_sample(const GestureModel& gesture, const NoiseModel& noise, double total_s,
                              std::uint64_t noise_seed) {
  Rng rng = make_rng({noise_seed, 0x5e7505ULL});
  const double dt_nominal = 1.0 / noise.nominal_rate_hz;

  std::vector<double> ts;
  if (noise.jitter_fraction <= 0.0) {
    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) / noise.nominal_rate_hz;
      if (t > total_s) break;
      ts.push_back(t);
    }
  } else {
    for (double t = 0.0; t <= total_s;) {
      ts.push_back(t);
      t += dt_nominal * std::max(0.2, 1.0 + normal(rng, noise.jitter_fraction));
    }
  }
  const auto n = static_cast<Eigen::Index>(ts.size());

  const Vec3 bias(normal(rng, noise.gyro_bias_sigma), normal(rng, noise.gyro_bias_sigma),
                  normal(rng, noise.gyro_bias_sigma));
  const Vec3 up(0.0, 0.0, kStandardGravity);

  Series3 acc(n, 3), linacc(n, 3), gyro(n, 3);
  GroundTruth gt;
  gt.timestamps = ts;
  gt.position.resize(n, 3);
  gt.velocity.resize(n, 3);
  gt.orientation.timestamps = ts;
  gt.orientation.quaternions.resize(ts.size());

  for (Eigen::Index k = 0; k < n; ++k) {
    const MotionState st = gesture.at(ts[static_cast<std::size_t>(k)]);
    const Quaternion to_body = st.orientation.conjugate();
    Vec3 a = q_rotate(to_body, st.acceleration + up);
    Vec3 la = q_rotate(to_body, st.acceleration);
    Vec3 w = st.angular_velocity + bias;
    for (int c = 0; c < 3; ++c) {
      a(c) += normal(rng, noise.accel_sigma);
      la(c) += normal(rng, noise.accel_sigma);
      w(c) += normal(rng, noise.gyro_sigma);
    }
    acc.row(k) = a.transpose();
    linacc.row(k) = la.transpose();
    gyro.row(k) = w.transpose();
    gt.position.row(k) = st.position.transpose();
    gt.velocity.row(k) = st.velocity.transpose();
    gt.orientation.quaternions[static_cast<std::size_t>(k)] = st.orientation;
  }
  enforce_sign_continuity(gt.orientation.quaternions);

  const double g_start = gesture.start_s;
  const double g_end = gesture.start_s + gesture.duration_s;
  gt.gesture_bounds.start_index =
      static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), g_start) - ts.begin());
  gt.gesture_bounds.end_index =
      static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), g_end) - ts.begin());

  SignatureSample sample;
  sample.traces.emplace(SensorKind::Accelerometer, SensorTrace(SensorKind::Accelerometer, ts, acc));
  sample.traces.emplace(SensorKind::LinearAccelerometer,
                        SensorTrace(SensorKind::LinearAccelerometer, ts, linacc));
  sample.traces.emplace(SensorKind::Gyroscope, SensorTrace(SensorKind::Gyroscope, ts, gyro));
  sample.ground_truth = std::move(gt);
  return sample;
}

SignatureSample generate_sample(const SynthUserTemplate& tmpl, int session, int attempt,
                                std::uint64_t rng_seed) {
  if (tmpl.control_points.size() < 2 || !(tmpl.duration_s > 0.0)) {
    fail(ErrorCode::InvalidArgument, "template needs >= 2 control points and a positive duration");
  }
  const Variability& var = tmpl.variability;
  Rng session_rng = make_rng({tmpl.seed, 0x5e55ULL, static_cast<std::uint64_t>(session)});
  Rng attempt_rng = make_rng({tmpl.seed, rng_seed, static_cast<std::uint64_t>(session),
                              static_cast<std::uint64_t>(attempt), 0xa77ULL});
  const Vec3 extent = extent_of(tmpl.control_points);

  GestureModel g;
  g.control_points = jitter_points(tmpl.control_points, session_rng, var.session_point_jitter * extent);
  g.control_points = jitter_points(g.control_points, attempt_rng, var.attempt_point_jitter * extent);
  g.start_s = tmpl.lead_in_s;
  g.duration_s = tmpl.duration_s * std::exp(normal(session_rng, var.session_duration_sigma)) *
                 std::exp(normal(attempt_rng, var.attempt_duration_sigma));
  g.warp = uniform(attempt_rng, -var.attempt_warp, var.attempt_warp);

  g.orientation = tmpl.orientation;
  g.orientation.base_roll += normal(session_rng, var.session_angle_sigma) +
                             normal(attempt_rng, var.attempt_angle_sigma);
  g.orientation.base_pitch += normal(session_rng, var.session_angle_sigma) +
                              normal(attempt_rng, var.attempt_angle_sigma);
  for (auto* w : {&g.orientation.roll, &g.orientation.pitch, &g.orientation.yaw}) {
    perturb_wobbles(*w, session_rng, var.wobble_amplitude_sigma, var.wobble_phase_sigma);
    perturb_wobbles(*w, attempt_rng, 0.0, var.wobble_phase_sigma / 2.0);
  }

  const double total = g.start_s + g.duration_s + tmpl.tail_s;
  SignatureSample sample = render_sample(g, tmpl.noise, total, attempt_rng());
  sample.user_id = tmpl.user_id;
  sample.session = session;
  sample.attempt = attempt;
  sample.device_model = tmpl.device_model;
  sample.label = Label::Genuine;
  sample.reference_2d = planar_reference(g.control_points);
  return sample;
}

SignatureSample generate_forgery(const SynthUserTemplate& tmpl, std::uint64_t rng_seed,
                                 int attempt) {
  if (tmpl.control_points.size() < 2 || !(tmpl.duration_s > 0.0)) {
    fail(ErrorCode::InvalidArgument, "template needs >= 2 control points and a positive duration");
  }
  Rng rng = make_rng({tmpl.seed, rng_seed, 0xf0f0ULL, static_cast<std::uint64_t>(attempt)});
  const Vec3 extent = extent_of(tmpl.control_points);

  // A skilled forger has watched the signer and reproduces the drawn shape
  // and its pacing about as well as the signer does, but not the wrist
  // rotation and grip, which an observer cannot see.
  const Variability& var = tmpl.variability;
  GestureModel g;
  g.control_points = jitter_points(tmpl.control_points, rng, var.session_point_jitter * extent);
  g.control_points = jitter_points(g.control_points, rng, var.attempt_point_jitter * extent);
  g.start_s = tmpl.lead_in_s;
  g.duration_s = tmpl.duration_s * std::exp(normal(rng, var.session_duration_sigma)) *
                 std::exp(normal(rng, var.attempt_duration_sigma));
  g.warp = uniform(rng, -var.attempt_warp, var.attempt_warp);

  g.orientation = draw_orientation(rng);
  const double roll_sign = rng() % 2 == 0 ? 1.0 : -1.0;
  const double pitch_sign = rng() % 2 == 0 ? 1.0 : -1.0;
  g.orientation.base_roll = tmpl.orientation.base_roll + roll_sign * uniform(rng, 0.25, 0.5);
  g.orientation.base_pitch = tmpl.orientation.base_pitch + pitch_sign * uniform(rng, 0.25, 0.5);

  const double total = g.start_s + g.duration_s + tmpl.tail_s;
  SignatureSample sample = render_sample(g, tmpl.noise, total, rng());
  sample.user_id = tmpl.user_id;
  sample.session = 4;
  sample.attempt = attempt;
  sample.device_model = tmpl.device_model;
  sample.label = Label::SkilledForgery;
  sample.reference_2d = planar_reference(g.control_points);
  return sample;
}

std::vector<SynthUserTemplate> make_templates(const PopulationSpec& spec) {
  if (spec.users < 1) fail(ErrorCode::InvalidArgument, "population needs at least one user");
  std::vector<SynthUserTemplate> out;
  for (int u = 0; u < spec.users; ++u) {
    char id[16];
    std::snprintf(id, sizeof id, "u%03d", u);
    Rng seeder = make_rng({spec.seed, 0x0005e7ULL, static_cast<std::uint64_t>(u)});
    SynthUserTemplate t = make_template(id, seeder());
    if (spec.noise) t.noise = *spec.noise;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace airsig
