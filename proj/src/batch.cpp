#include "airsig/batch.hpp"

#include "airsig/error.hpp"

#include <omp.h>

#include <exception>

namespace airsig::batch {

namespace {

// Runs body(i) for i in [0, n). Exceptions thrown inside the parallel region
// are captured and the first one is rethrown on the calling thread.
template <typename Body>
void for_each_index(std::size_t n, Execution execution, Body body) {
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(airsig_batch_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<MatchScore> score_pairs(const std::vector<SignatureSample>& samples,
                                    const std::vector<IndexPair>& pairs, const SensorSet& sensors,
                                    const DtwOptions& options, const SensorWeights& weights,
                                    Execution execution) {
  for (const auto& [p, r] : pairs) {
    if (p >= samples.size() || r >= samples.size()) {
      fail(ErrorCode::InvalidArgument, "pair index out of range");
    }
  }
  std::vector<MatchScore> out(pairs.size());
  for_each_index(pairs.size(), execution, [&](std::size_t i) {
    out[i] = score_pair(samples[pairs[i].first], samples[pairs[i].second], sensors, options, weights);
  });
  return out;
}

std::vector<SignatureSample> preprocess_all(const std::vector<SignatureSample>& samples,
                                            const PreprocessConfig& config, Execution execution) {
  std::vector<SignatureSample> out(samples.size());
  for_each_index(samples.size(), execution,
                 [&](std::size_t i) { out[i] = preprocess(samples[i], config); });
  return out;
}

std::vector<SignatureSample> generate_population(const PopulationSpec& spec, Execution execution) {
  if (spec.users < 1) fail(ErrorCode::InvalidArgument, "population needs at least one user");
  if (spec.sessions < 1 || spec.sessions > 4) {
    fail(ErrorCode::InvalidArgument, "sessions must be in 1..4");
  }
  if (spec.attempts < 1 || spec.forgeries_per_user < 0) {
    fail(ErrorCode::InvalidArgument, "attempts must be positive and forgeries non-negative");
  }
  const std::vector<SynthUserTemplate> templates = make_templates(spec);
  const std::size_t genuine = static_cast<std::size_t>(spec.sessions * spec.attempts);
  const std::size_t per_user = genuine + static_cast<std::size_t>(spec.forgeries_per_user);

  std::vector<SignatureSample> out(templates.size() * per_user);
  for_each_index(out.size(), execution, [&](std::size_t i) {
    const SynthUserTemplate& tmpl = templates[i / per_user];
    const std::size_t k = i % per_user;
    if (k < genuine) {
      const int session = static_cast<int>(k) / spec.attempts + 1;
      const int attempt = static_cast<int>(k) % spec.attempts;
      out[i] = generate_sample(tmpl, session, attempt, spec.seed);
    } else {
      out[i] = generate_forgery(tmpl, spec.seed, static_cast<int>(k - genuine));
    }
  });
  return out;
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace airsig::batch
