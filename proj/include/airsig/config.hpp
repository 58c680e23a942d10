#pragma once

#include "airsig/dtw.hpp"
#include "airsig/eval.hpp"
#include "airsig/signal.hpp"
#include "airsig/trajectory.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace airsig {

/// Everything tunable in one place. Serialized as plain `key=value` lines;
/// `#` starts a comment.
struct PipelineConfig {
  PreprocessConfig preprocess;
  ReconstructConfig reconstruct;
  DtwOptions dtw;
  SensorWeights weights = kEqualWeights;
  EerMethod eer_method = EerMethod::Sweep;
};

std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies recognised keys on top of `base`. Unknown keys and malformed
/// values throw ParseError naming the key.
PipelineConfig apply_key_values(PipelineConfig base,
                                const std::map<std::string, std::string>& values);

PipelineConfig load_config(const std::filesystem::path& path);

/// Full dump, every key present, stable order.
std::string to_key_values(const PipelineConfig& config);

}  // namespace airsig
