#pragma once

#include "airsig/dtw.hpp"
#include "airsig/sample.hpp"
#include "airsig/signal.hpp"
#include "airsig/synth.hpp"

#include <cstddef>
#include <utility>
#include <vector>

// Data-parallel kernels. Each has a serial reference that the tests compare
// against bit for bit; the parallel versions split independent work items
// across OpenMP threads and write results by index.
namespace airsig::batch {

enum class Execution { Serial, Parallel };

using IndexPair = std::pair<std::size_t, std::size_t>;  // (probe, reference)

std::vector<MatchScore> score_pairs(const std::vector<SignatureSample>& samples,
                                    const std::vector<IndexPair>& pairs, const SensorSet& sensors,
                                    const DtwOptions& options, const SensorWeights& weights,
                                    Execution execution = Execution::Parallel);

std::vector<SignatureSample> preprocess_all(const std::vector<SignatureSample>& samples,
                                            const PreprocessConfig& config,
                                            Execution execution = Execution::Parallel);

/// sessions x attempts genuine samples per user followed by the user's
/// forgeries, users in order.
std::vector<SignatureSample> generate_population(const PopulationSpec& spec,
                                                 Execution execution = Execution::Parallel);

int thread_count();

}  // namespace airsig::batch
