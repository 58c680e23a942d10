#include "commands.hpp"

#include "airsig/batch.hpp"
#include "airsig/config.hpp"
#include "airsig/dataset.hpp"
#include "airsig/error.hpp"
#include "airsig/eval.hpp"
#include "airsig/synth.hpp"
#include "airsig/trajectory.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace airsig::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kRunManifest = "run_manifest.json";

// Thrown for command-line problems that CLI11 itself cannot see (bad sensor
// names, empty populations, ...). Maps to exit code 2 like airsig::Error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  fs::path out;
  fs::path config_file;
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
};

PipelineConfig load_pipeline(const Common& c) {
  PipelineConfig config;
  if (!c.config_file.empty()) {
    if (!fs::exists(c.config_file)) throw UsageError("config file not found: " + c.config_file.string());
    config = load_config(c.config_file);
  }
  std::map<std::string, std::string> values;
  for (const std::string& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + kv + "'");
    values[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return apply_key_values(config, values);
}

std::string profile_name(PreprocessProfile p) {
  return p == PreprocessProfile::Verify ? "verify" : "reconstruct";
}

// Every regular file below `root`, relative generic paths, sorted.
std::vector<std::string> list_files(const fs::path& root) {
  std::vector<std::string> files;
  if (!fs::exists(root)) return files;
  if (fs::is_regular_file(root)) return {root.filename().generic_string()};
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

json hash_tree(const fs::path& root, const std::string& skip = "") {
  json out = json::object();
  const fs::path base = fs::is_regular_file(root) ? root.parent_path() : root;
  for (const std::string& rel : list_files(root)) {
    if (rel == skip) continue;
    out[rel] = sha256_hex(read_text_file(base / rel));
  }
  return out;
}

void write_run_manifest(const fs::path& out_dir, const std::vector<std::string>& args,
                        const std::string& command, const PipelineConfig& config,
                        std::uint64_t seed, const json& inputs, const json& extra = json::object()) {
  json m;
  m["tool"] = "airsig";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["arguments"] = args;
  m["seed"] = seed;
  m["config"] = parse_key_values(to_key_values(config));
  m["inputs"] = inputs;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  m["outputs"] = hash_tree(out_dir, kRunManifest);
  write_text_file(out_dir / kRunManifest, m.dump(2) + "\n");
}

json dataset_inputs(const fs::path& dir) { return {{"dataset", hash_tree(dir)}}; }

json config_inputs(const Common& c) {
  if (c.config_file.empty()) return json::object();
  return {{"config", sha256_hex(read_text_file(c.config_file))}};
}

json merge(json a, const json& b) {
  for (const auto& [k, v] : b.items()) a[k] = v;
  return a;
}

LoadResult load_input(const fs::path& dir, std::ostream& err) {
  if (dir.empty()) throw UsageError("--dataset is required");
  if (!fs::is_directory(dir)) throw UsageError("dataset directory not found: " + dir.string());
  LoadResult loaded = load_dataset(dir);
  for (const LoadRejection& r : loaded.rejected) {
    err << "warning: skipped " << r.sample_id << ": " << r.message << "\n";
  }
  return loaded;
}

json rejections_json(const LoadResult& loaded) {
  json out = json::array();
  for (const LoadRejection& r : loaded.rejected) {
    out.push_back({{"sample_id", r.sample_id}, {"file", r.file}, {"message", r.message}});
  }
  return out;
}

SensorSet parse_sensor_list(const std::string& text) {
  SensorSet set;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    const auto kind = parse_sensor(name);
    if (!kind) throw UsageError("unknown sensor '" + name + "' (expected acc, linacc or gyro)");
    set.insert(*kind);
  }
  if (set.empty()) throw UsageError("empty sensor list");
  return set;
}

EnrollmentMode parse_mode(const std::string& text) {
  if (text == "1vs1") return EnrollmentMode::OneVsOne;
  if (text == "4vs1") return EnrollmentMode::FourVsOne;
  throw UsageError("unknown mode '" + text + "' (expected 1vs1 or 4vs1)");
}

ImpostorKind parse_impostor(const std::string& text) {
  if (text == "random") return ImpostorKind::Random;
  if (text == "skilled") return ImpostorKind::Skilled;
  throw UsageError("unknown impostor kind '" + text + "' (expected random or skilled)");
}

ScorerSpec parse_scorer(const std::string& text) {
  ScorerSpec s;
  if (text == "dtw") return s;
  const std::string prefix = "embedding:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
    s.kind = ScorerSpec::Kind::EmbeddingFile;
    s.embedding_file = text.substr(prefix.size());
    return s;
  }
  throw UsageError("unknown scorer '" + text + "' (expected dtw or embedding:<file>)");
}

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

const std::vector<SensorSet>& default_sensor_sets() {
  static const std::vector<SensorSet> sets = {
      {SensorKind::Accelerometer},
      {SensorKind::LinearAccelerometer},
      {SensorKind::Gyroscope},
      {SensorKind::Accelerometer, SensorKind::Gyroscope},
      {SensorKind::Accelerometer, SensorKind::LinearAccelerometer, SensorKind::Gyroscope}};
  return sets;
}

std::vector<BenchmarkCell> matrix_from_json(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("matrix file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw UsageError(path.string() + ": matrix must be a JSON array");
  std::vector<BenchmarkCell> cells;
  for (const json& entry : doc) {
    BenchmarkCell cell;
    try {
      cell.scorer = parse_scorer(entry.value("scorer", std::string("dtw")));
      if (cell.scorer.kind == ScorerSpec::Kind::Dtw) {
        std::string sensors;
        for (const json& s : entry.at("sensors")) sensors += s.get<std::string>() + ",";
        cell.sensors = parse_sensor_list(sensors);
      }
      cell.mode = parse_mode(entry.value("mode", std::string("4vs1")));
      cell.impostor = parse_impostor(entry.value("impostor", std::string("random")));
    } catch (const json::exception& e) {
      throw UsageError(path.string() + ": malformed matrix entry: " + e.what());
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::string percent(double v) {
  if (!std::isfinite(v)) return "n/a";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << 100.0 * v;
  return s.str();
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  int users = 20;
  int sessions = 4;
  int attempts = 2;
  int forgeries = 4;
  bool noiseless = false;
};

int cmd_synth(const SynthArgs& a, const Common& c, const std::vector<std::string>& args,
              std::ostream& out) {
  if (a.users < 1) throw UsageError("--users must be at least 1");
  if (a.sessions < 1 || a.sessions > 4) throw UsageError("--sessions must be in 1..4");
  if (a.attempts < 1) throw UsageError("--attempts must be at least 1");
  if (a.forgeries < 0) throw UsageError("--forgeries must not be negative");
  if (c.out.empty()) throw UsageError("--out is required");
  const PipelineConfig config = load_pipeline(c);

  PopulationSpec spec;
  spec.users = a.users;
  spec.sessions = a.sessions;
  spec.attempts = a.attempts;
  spec.forgeries_per_user = a.forgeries;
  spec.seed = c.seed;
  if (a.noiseless) spec.noise = NoiseModel::none();
  const auto samples = batch::generate_population(spec);
  save_dataset(samples, c.out);
  write_run_manifest(c.out, args, "synth", config, c.seed, config_inputs(c),
                     {{"population", {{"users", a.users},
                                      {"sessions", a.sessions},
                                      {"attempts", a.attempts},
                                      {"forgeries_per_user", a.forgeries},
                                      {"noiseless", a.noiseless}}}});
  out << "wrote " << samples.size() << " samples for " << a.users << " users to " << c.out.string()
      << "\n";
  return kOk;
}

// ----------------------------------------------------------- preprocess

int cmd_preprocess(const fs::path& dataset, const std::string& profile, const Common& c,
                   const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (c.out.empty()) throw UsageError("--out is required");
  PipelineConfig config = load_pipeline(c);
  if (!profile.empty()) {
    config = apply_key_values(config, {{"preprocess.profile", profile}});
  }
  const LoadResult loaded = load_input(dataset, err);
  if (loaded.processing) {
    throw UsageError("dataset is already preprocessed (" + *loaded.processing + ")");
  }
  const auto processed = batch::preprocess_all(loaded.samples, config.preprocess);
  save_dataset(processed, c.out, profile_name(config.preprocess.profile));
  write_run_manifest(c.out, args, "preprocess", config, c.seed,
                     merge(dataset_inputs(dataset), config_inputs(c)),
                     {{"rejected", rejections_json(loaded)}});
  out << "preprocessed " << processed.size() << " samples (" << profile_name(config.preprocess.profile)
      << " profile) into " << c.out.string() << "\n";
  return kOk;
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
  fs::path dataset;
  fs::path matrix;
  std::vector<std::string> sensors;
  std::vector<std::string> modes;
  std::vector<std::string> impostors;
  std::vector<std::string> scorers;
  bool serial = false;
};

std::vector<BenchmarkCell> build_matrix(const EvalArgs& a) {
  if (!a.matrix.empty()) {
    if (!a.sensors.empty() || !a.modes.empty() || !a.impostors.empty() || !a.scorers.empty()) {
      throw UsageError("--matrix cannot be combined with --sensors/--mode/--impostor/--scorer");
    }
    return matrix_from_json(a.matrix);
  }
  std::vector<SensorSet> sets;
  for (const std::string& s : a.sensors) sets.push_back(parse_sensor_list(s));
  if (sets.empty()) sets = default_sensor_sets();
  std::vector<EnrollmentMode> modes;
  for (const std::string& m : split_commas(a.modes)) modes.push_back(parse_mode(m));
  if (modes.empty()) modes = {EnrollmentMode::OneVsOne, EnrollmentMode::FourVsOne};
  std::vector<ImpostorKind> impostors;
  for (const std::string& i : split_commas(a.impostors)) impostors.push_back(parse_impostor(i));
  if (impostors.empty()) impostors = {ImpostorKind::Random, ImpostorKind::Skilled};
  std::vector<ScorerSpec> scorers;
  for (const std::string& s : a.scorers) scorers.push_back(parse_scorer(s));
  if (scorers.empty()) scorers.push_back({});

  std::vector<BenchmarkCell> cells;
  for (const ScorerSpec& scorer : scorers) {
    const std::vector<SensorSet> scorer_sets =
        scorer.kind == ScorerSpec::Kind::Dtw ? sets : std::vector<SensorSet>{SensorSet{}};
    for (const SensorSet& set : scorer_sets) {
      for (ImpostorKind impostor : impostors) {
        for (EnrollmentMode mode : modes) cells.push_back({set, mode, impostor, scorer});
      }
    }
  }
  return cells;
}

int cmd_eval(const EvalArgs& a, const Common& c, const std::vector<std::string>& args,
             std::ostream& out, std::ostream& err) {
  if (c.out.empty()) throw UsageError("--out is required");
  const PipelineConfig config = load_pipeline(c);
  const std::vector<BenchmarkCell> matrix = build_matrix(a);
  const LoadResult loaded = load_input(a.dataset, err);
  if (loaded.processing && *loaded.processing != "verify") {
    throw UsageError("eval needs raw or verify-profile data, got '" + *loaded.processing + "'");
  }
  PreprocessConfig pre = config.preprocess;
  pre.profile = PreprocessProfile::Verify;
  const std::vector<SignatureSample> dataset =
      loaded.processing ? loaded.samples : batch::preprocess_all(loaded.samples, pre);

  const ProtocolSplit protocol = build_protocol(dataset);
  for (const auto& ex : protocol.excluded) {
    err << "note: user " << ex.user_id << " excluded: " << ex.reason << "\n";
  }

  BenchmarkOptions options;
  options.dtw = config.dtw;
  options.weights = config.weights;
  options.eer_method = config.eer_method;
  options.parallel = !a.serial;
  const std::vector<EvalReport> reports = run_benchmark(dataset, matrix, options);

  fs::create_directories(c.out);
  write_reports(reports, c.out);

  std::string table = "label,mode,impostor,eer,eer_threshold,genuine,impostor_count,low_confidence\n";
  for (const EvalReport& r : reports) {
    table += r.cell.label() + "," + std::string(to_string(r.cell.mode)) + "," +
             std::string(to_string(r.cell.impostor)) + "," + format_double(r.eer) + "," +
             format_double(r.eer_threshold) + "," + std::to_string(r.genuine_scores.size()) + "," +
             std::to_string(r.impostor_scores.size()) + "," + (r.low_confidence ? "1" : "0") + "\n";
  }
  write_text_file(c.out / "eer_table.csv", table);

  json proto;
  proto["users"] = protocol.users;
  proto["excluded"] = json::array();
  for (const auto& ex : protocol.excluded) {
    proto["excluded"].push_back({{"user_id", ex.user_id}, {"reason", ex.reason}});
  }
  write_text_file(c.out / "protocol.json", proto.dump(2) + "\n");

  write_run_manifest(c.out, args, "eval", config, c.seed,
                     merge(dataset_inputs(a.dataset), config_inputs(c)),
                     {{"rejected", rejections_json(loaded)}});

  out << std::left << std::setw(40) << "cell" << std::right << std::setw(9) << "EER %"
      << std::setw(9) << "genuine" << std::setw(10) << "impostor" << "\n";
  for (const EvalReport& r : reports) {
    out << std::left << std::setw(40) << r.cell.label() << std::right << std::setw(9)
        << percent(r.eer) << std::setw(9) << r.genuine_scores.size() << std::setw(10)
        << r.impostor_scores.size() << (r.low_confidence ? "  (low confidence)" : "") << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------- reconstruct

std::string series_csv(const std::vector<double>& ts, const std::vector<const Series3*>& blocks,
                       const std::string& header) {
  std::string csv = header + "\n";
  for (std::size_t k = 0; k < ts.size(); ++k) {
    csv += format_double(ts[k]);
    for (const Series3* b : blocks) {
      for (int c = 0; c < 3; ++c) csv += "," + format_double((*b)(static_cast<Eigen::Index>(k), c));
    }
    csv += "\n";
  }
  return csv;
}

int cmd_reconstruct(const fs::path& dataset, const std::string& id, const std::string& orientation,
                    const Common& c, const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  if (c.out.empty()) throw UsageError("--out is required");
  if (id.empty()) throw UsageError("--sample is required");
  PipelineConfig config = load_pipeline(c);
  if (!orientation.empty()) {
    config = apply_key_values(config, {{"reconstruct.orientation", orientation}});
  }
  const LoadResult loaded = load_input(dataset, err);
  if (loaded.processing && *loaded.processing != "reconstruct") {
    throw UsageError("reconstruction needs physical units; dataset was preprocessed with the '" +
                     *loaded.processing + "' profile");
  }
  const auto it = std::find_if(loaded.samples.begin(), loaded.samples.end(),
                               [&](const SignatureSample& s) { return sample_id(s) == id; });
  if (it == loaded.samples.end()) throw UsageError("no sample with id '" + id + "'");

  SignatureSample sample = *it;
  if (!loaded.processing) {
    PreprocessConfig pre = config.preprocess;
    pre.profile = PreprocessProfile::Reconstruct;
    sample = preprocess(sample, pre);
  }
  const Trajectory3D traj = reconstruct(sample, config.reconstruct);
  const double rate = config.preprocess.target_hz;

  fs::create_directories(c.out);
  write_text_file(c.out / "trajectory.csv",
                  series_csv(traj.timestamps, {&traj.position, &traj.velocity, &traj.accel_global},
                             "t,x,y,z,vx,vy,vz,ax,ay,az"));

  json summary;
  summary["sample_id"] = id;
  summary["seed"] = c.seed;
  summary["samples"] = traj.timestamps.size();
  summary["velocity_cutoff_hz"] = traj.velocity_cutoff_hz;
  summary["position_cutoff_hz"] = traj.position_cutoff_hz;
  summary["orientation"] =
      config.reconstruct.orientation == OrientationSource::Madgwick ? "madgwick" : "ground_truth";
  summary["max_position_norm_m"] = traj.position.rowwise().norm().maxCoeff();

  std::optional<Series2> projection;
  try {
    projection = project_to_plane(traj);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateGeometry) throw;
    summary["projection"] = nullptr;
    summary["projection_note"] = e.what();
  }
  if (projection) {
    std::string csv = "t,u,v\n";
    for (Eigen::Index k = 0; k < projection->rows(); ++k) {
      csv += format_double(traj.timestamps[static_cast<std::size_t>(k)]) + "," +
             format_double((*projection)(k, 0)) + "," + format_double((*projection)(k, 1)) + "\n";
    }
    write_text_file(c.out / "projection.csv", csv);
    summary["projection"] = "projection.csv";

    if (sample.reference_2d) {
      const ProcrustesResult fit = procrustes_align(*projection, *sample.reference_2d);
      summary["reference_residual"] = fit.residual;
      summary["reference_reflected"] = fit.reflected;
    }
    if (sample.ground_truth) {
      const Series3 reference = filtered_ground_truth(sample, rate, traj.velocity_cutoff_hz,
                                                      traj.position_cutoff_hz,
                                                      config.reconstruct.zero_phase);
      const ProcrustesResult fit = procrustes_align(*projection, project_to_plane(reference));
      summary["ground_truth_residual"] = fit.residual;
      const double rmse = std::sqrt((traj.position - reference).rowwise().squaredNorm().mean());
      const double extent =
          (reference.colwise().maxCoeff() - reference.colwise().minCoeff()).norm();
      summary["ground_truth_position_rmse_m"] = rmse;
      summary["ground_truth_relative_rmse"] = extent > 0.0 ? rmse / extent : 0.0;
    }
  }
  write_text_file(c.out / "summary.json", summary.dump(2) + "\n");
  write_run_manifest(c.out, args, "reconstruct", config, c.seed,
                     merge(dataset_inputs(dataset), config_inputs(c)));

  out << id << ": " << traj.timestamps.size() << " samples, cutoffs "
      << traj.velocity_cutoff_hz << " / " << traj.position_cutoff_hz << " Hz";
  if (summary.contains("ground_truth_residual")) {
    out << ", residual vs filtered ground truth " << summary["ground_truth_residual"].get<double>();
  }
  out << "\n";
  return kOk;
}

// --------------------------------------------------------- export/split

int cmd_export(const fs::path& dataset, int length, const Common& c,
               const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (c.out.empty()) throw UsageError("--out is required");
  if (length < 1) throw UsageError("--length must be positive");
  const PipelineConfig config = load_pipeline(c);
  const LoadResult loaded = load_input(dataset, err);
  if (loaded.processing && *loaded.processing != "verify") {
    throw UsageError("export needs raw or verify-profile data, got '" + *loaded.processing + "'");
  }
  PreprocessConfig pre = config.preprocess;
  pre.profile = PreprocessProfile::Verify;
  const auto samples = loaded.processing ? loaded.samples : batch::preprocess_all(loaded.samples, pre);
  export_fixed_length(samples, c.out, length);
  write_run_manifest(c.out, args, "export", config, c.seed,
                     merge(dataset_inputs(dataset), config_inputs(c)));
  out << "exported " << samples.size() << " samples of " << length << " rows to " << c.out.string()
      << "\n";
  return kOk;
}

int cmd_split(const fs::path& dataset, double test_fraction, double val_fraction, const Common& c,
              const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (c.out.empty()) throw UsageError("--out is required");
  const PipelineConfig config = load_pipeline(c);
  const LoadResult loaded = load_input(dataset, err);
  std::vector<std::string> users;
  for (const SignatureSample& s : loaded.samples) users.push_back(s.user_id);
  const SplitManifest split = split_users(users, c.seed, test_fraction, val_fraction);
  fs::create_directories(c.out);
  write_text_file(c.out / "split.json", split_to_json(split));
  write_run_manifest(c.out, args, "split", config, c.seed, dataset_inputs(dataset));
  out << "train " << split.train.size() << ", validation " << split.validation.size() << ", test "
      << split.test.size() << " users\n";
  return kOk;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--config", c.config_file, "key=value configuration file");
  cmd->add_option("--set", c.overrides, "Override one configuration key (key=value); repeatable");
  cmd->add_option("--seed", c.seed, "Random seed, recorded in every run manifest");
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"In-air signature verification and trajectory reconstruction toolkit", "airsig"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  SynthArgs synth;
  EvalArgs eval;
  fs::path dataset;
  std::string profile;
  std::string sample;
  std::string orientation;
  int length = 1000;
  double test_fraction = 0.2;
  double val_fraction = 0.2;

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic population with ground truth");
  add_common(synth_cmd, common);
  synth_cmd->add_option("--users", synth.users, "Number of users")->capture_default_str();
  synth_cmd->add_option("--sessions", synth.sessions, "Sessions per user (1-4)")->capture_default_str();
  synth_cmd->add_option("--attempts", synth.attempts, "Genuine attempts per session")->capture_default_str();
  synth_cmd->add_option("--forgeries", synth.forgeries, "Skilled forgeries per user")->capture_default_str();
  synth_cmd->add_flag("--noiseless", synth.noiseless, "Disable sensor noise and sampling jitter");

  auto* pre_cmd = app.add_subcommand("preprocess", "Resample, crop and normalise a dataset");
  add_common(pre_cmd, common);
  pre_cmd->add_option("--dataset", dataset, "Input dataset directory");
  pre_cmd->add_option("--profile", profile, "verify or reconstruct")
      ->check(CLI::IsMember({"verify", "reconstruct"}));

  auto* eval_cmd = app.add_subcommand("eval", "Run the verification benchmark");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset directory (raw or verify profile)");
  eval_cmd->add_option("--matrix", eval.matrix, "JSON list of benchmark cells");
  eval_cmd->add_option("--sensors", eval.sensors, "Comma-separated sensor set; repeat for more sets");
  eval_cmd->add_option("--mode", eval.modes, "1vs1 and/or 4vs1");
  eval_cmd->add_option("--impostor", eval.impostors, "random and/or skilled");
  eval_cmd->add_option("--scorer", eval.scorers, "dtw or embedding:<file>; repeatable");
  eval_cmd->add_flag("--serial", eval.serial, "Score pairs on one thread");

  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct the 3D trajectory of one sample");
  add_common(rec_cmd, common);
  rec_cmd->add_option("--dataset", dataset, "Dataset directory (raw or reconstruct profile)");
  rec_cmd->add_option("--sample", sample, "Sample id, e.g. u003_s2_a1_genuine");
  rec_cmd->add_option("--orientation", orientation, "madgwick or ground_truth")
      ->check(CLI::IsMember({"madgwick", "ground_truth"}));

  auto* export_cmd = app.add_subcommand("export", "Fixed-length CSV export for neural models");
  add_common(export_cmd, common);
  export_cmd->add_option("--dataset", dataset, "Dataset directory");
  export_cmd->add_option("--length", length, "Rows per exported sample")->capture_default_str();

  auto* split_cmd = app.add_subcommand("split", "Seeded train/validation/test user split");
  add_common(split_cmd, common);
  split_cmd->add_option("--dataset", dataset, "Dataset directory");
  split_cmd->add_option("--test-fraction", test_fraction)->capture_default_str();
  split_cmd->add_option("--val-fraction", val_fraction)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, common, args, out);
    if (pre_cmd->parsed()) return cmd_preprocess(dataset, profile, common, args, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval, common, args, out, err);
    if (rec_cmd->parsed()) return cmd_reconstruct(dataset, sample, orientation, common, args, out, err);
    if (export_cmd->parsed()) return cmd_export(dataset, length, common, args, out, err);
    if (split_cmd->parsed()) {
      return cmd_split(dataset, test_fraction, val_fraction, common, args, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace airsig::cli
