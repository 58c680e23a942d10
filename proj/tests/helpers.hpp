#pragma once

#include "airsig/error.hpp"
#include "airsig/sample.hpp"
#include "airsig/trace.hpp"

#include <doctest.h>

#include <filesystem>
#include <functional>
#include <random>
#include <string>

namespace testing {

using namespace airsig;

inline SensorTrace make_trace(SensorKind kind, std::size_t n, double rate_hz,
                              const std::function<Eigen::RowVector3d(double)>& f, double t0 = 0.0) {
  std::vector<double> t(n);
  Series3 x(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = t0 + static_cast<double>(i) / rate_hz;
    x.row(static_cast<Eigen::Index>(i)) = f(t[i]);
  }
  return {kind, std::move(t), std::move(x)};
}

inline SensorTrace random_trace(SensorKind kind, std::size_t n, std::mt19937_64& rng,
                                double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  return make_trace(kind, n, 100.0, [&](double) {
    return Eigen::RowVector3d(normal(rng), normal(rng), normal(rng));
  });
}

// Runs `body` and checks that it throws airsig::Error with the given code.
template <typename F>
void require_error(ErrorCode code, F&& body) {
  try {
    body();
    FAIL("expected error ", to_string(code));
  } catch (const Error& e) {
    CHECK_MESSAGE(e.code() == code, "got ", to_string(e.code()), ": ", e.what());
  }
}

// Fresh, empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("airsig_" + tag + "_" + std::to_string(rng() % 1000000000ULL));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
