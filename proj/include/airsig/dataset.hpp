#pragma once

#include "airsig/sample.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace airsig {

struct LoadRejection {
  std::string sample_id;
  std::string file;
  std::string message;
};

struct LoadResult {
  std::vector<SignatureSample> samples;
  std::vector<LoadRejection> rejected;
  /// Preprocessing profile recorded by save_dataset ("verify", "reconstruct"), if any.
  std::optional<std::string> processing;
};

/// Reads <dir>/manifest.json and every trace it references. Manifest-level
/// schema errors throw ParseError; a sample whose files are missing or
/// malformed is rejected individually and the rest still load.
LoadResult load_dataset(const std::filesystem::path& dir);

/// As load_dataset, but the first rejection is rethrown as ParseError.
std::vector<SignatureSample> load_dataset_strict(const std::filesystem::path& dir);

/// Writes manifest.json plus one t,x,y,z CSV per trace. Numbers use the
/// shortest round-trip representation, so load(save(x)) == x bit for bit.
void save_dataset(const std::vector<SignatureSample>& samples, const std::filesystem::path& dir,
                  const std::optional<std::string>& processing = std::nullopt);

/// Fixed-length exchange format for the neural branch: one CSV per sample
/// with `length` rows x 9 columns (acc, linacc, gyro; xyz each) and an
/// index.csv sidecar with one metadata line per sample.
void export_fixed_length(const std::vector<SignatureSample>& samples,
                         const std::filesystem::path& dir, int length = 1000);

// Low-level CSV helpers, shared with the CLI.
std::string format_double(double value);
double parse_double(std::string_view text);
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace airsig
