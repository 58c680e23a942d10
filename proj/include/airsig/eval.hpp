#pragma once

#include "airsig/dtw.hpp"
#include "airsig/sample.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace airsig {

enum class EnrollmentMode { OneVsOne, FourVsOne };
enum class ImpostorKind { Random, Skilled };
enum class EerMethod { Sweep, Interpolated };

std::string_view to_string(EnrollmentMode mode);
std::string_view to_string(ImpostorKind kind);

struct ScorerSpec {
  enum class Kind { Dtw, EmbeddingFile };
  Kind kind = Kind::Dtw;
  std::filesystem::path embedding_file;
};

struct BenchmarkCell {
  SensorSet sensors;
  EnrollmentMode mode = EnrollmentMode::FourVsOne;
  ImpostorKind impostor = ImpostorKind::Random;
  ScorerSpec scorer;

  /// e.g. "dtw_acc+gyro_4vs1_skilled".
  std::string label() const;
};

std::string sensor_set_name(const SensorSet& sensors);

/// Evaluation split over sample indices into the dataset it was built from.
/// Session 1 never appears; enrollment lists hold the first two genuine
/// attempts of sessions 2 and 3.
struct ProtocolSplit {
  struct Exclusion {
    std::string user_id;
    std::string reason;
  };

  std::vector<std::string> users;
  std::map<std::string, std::vector<std::size_t>> enrollment;
  std::map<std::string, std::vector<std::size_t>> probes_genuine;
  std::map<std::string, std::vector<std::size_t>> probes_skilled;
  std::vector<Exclusion> excluded;

  /// Session-4 genuine probes of every other retained user.
  std::vector<std::size_t> probes_random(const std::string& user_id) const;
};

ProtocolSplit build_protocol(const std::vector<SignatureSample>& dataset);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Lower score = more genuine. FAR(t) = share of impostor scores <= t,
/// FRR(t) = share of genuine scores > t. Candidate thresholds are -inf, every
/// distinct score and +inf; the one minimising |FAR - FRR| wins, ties going
/// to the lower threshold, and EER = (FAR + FRR) / 2 there. Interpolated
/// linearly intersects the two rates between the bracketing thresholds.
EerResult compute_eer(const std::vector<double>& genuine, const std::vector<double>& impostor,
                      EerMethod method = EerMethod::Sweep);

struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
};

/// (FAR, FRR) at -inf, every distinct score and +inf, sorted by threshold,
/// consecutive duplicates removed. Always starts at (0, 1) and ends at (1, 0).
std::vector<DetPoint> det_curve(const std::vector<double>& genuine,
                                const std::vector<double>& impostor);

struct Trial {
  std::string probe_id;
  std::vector<std::string> reference_ids;
  MatchScore score;
  bool genuine = false;
};

struct EvalReport {
  BenchmarkCell cell;
  double eer = 0.0;
  double eer_threshold = 0.0;
  std::vector<DetPoint> det_points;
  std::vector<double> genuine_scores;
  std::vector<double> impostor_scores;
  std::vector<Trial> trials;
  bool low_confidence = false;  // fewer than 10 scores on either side
};

struct BenchmarkOptions {
  DtwOptions dtw;
  SensorWeights weights = kEqualWeights;
  EerMethod eer_method = EerMethod::Sweep;
  bool parallel = true;
};

/// One report per matrix cell. `dataset` must already be preprocessed for
/// verification. Pair scores are computed once and shared across cells.
std::vector<EvalReport> run_benchmark(const std::vector<SignatureSample>& dataset,
                                      const std::vector<BenchmarkCell>& matrix,
                                      const BenchmarkOptions& options = {});

/// Embedding exchange file: header sample_id,e0,...,e{D-1}, one row per sample.
struct EmbeddingTable {
  std::map<std::string, Eigen::VectorXd> vectors;
  std::size_t dimension = 0;
};

EmbeddingTable load_embeddings(const std::filesystem::path& path);

/// 1 - cos(a, b), in [0, 2].
double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct ScoreLists {
  std::vector<double> genuine;
  std::vector<double> impostor;
  std::vector<Trial> trials;
};

/// Cosine-distance scores for the protocol's trials; 4vs1 averages the
/// distances to the four enrollment embeddings.
ScoreLists score_embeddings(const EmbeddingTable& table, const std::vector<SignatureSample>& dataset,
                            const ProtocolSplit& protocol, EnrollmentMode mode,
                            ImpostorKind impostor);

struct ProcrustesResult {
  Series2 aligned;    // reconstruction after the similarity transform
  Series2 reference;  // reference at the common length
  double residual = 0.0;  // RMSE / RMS radius of the reference, in [0, 1]
  double scale = 1.0;
  bool reflected = false;
};

/// Resample both polylines (by normalized index) to a common length, then
/// fit rotation, reflection, isotropic scale and translation mapping the
/// reconstruction onto the reference in the least-squares sense.
ProcrustesResult procrustes_align(const Series2& reconstruction, const Series2& reference,
                                  std::size_t common_length = 0);

/// Seeded user partition shared with the neural branch: test_fraction of the
/// users go to test, then val_fraction of the remainder to validation.
struct SplitManifest {
  std::uint64_t seed = 0;
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

SplitManifest split_users(std::vector<std::string> users, std::uint64_t seed,
                          double test_fraction = 0.2, double val_fraction = 0.2);
std::string split_to_json(const SplitManifest& split);

/// reports.json plus, per cell, <label>_scores.csv and <label>_det.csv.
void write_reports(const std::vector<EvalReport>& reports, const std::filesystem::path& dir);
std::string reports_to_json(const std::vector<EvalReport>& reports);

}  // namespace airsig
