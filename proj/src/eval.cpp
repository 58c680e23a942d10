#include "airsig/eval.hpp"

#include "airsig/batch.hpp"
#include "airsig/dataset.hpp"
#include "airsig/error.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace airsig {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rates {
  double threshold;
  double far;
  double frr;
};

// FAR/FRR at -inf, every distinct score and +inf, ascending.
std::vector<Rates> sweep(const std::vector<double>& genuine, const std::vector<double>& impostor) {
  if (genuine.empty() || impostor.empty()) {
    fail(ErrorCode::EmptyScores, "EER needs non-empty genuine and impostor score lists");
  }
  std::vector<double> g = genuine;
  std::vector<double> im = impostor;
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());
  std::vector<double> thresholds;
  thresholds.reserve(g.size() + im.size() + 2);
  thresholds.push_back(-kInf);
  std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(thresholds));
  thresholds.push_back(kInf);
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const auto ng = static_cast<double>(g.size());
  const auto ni = static_cast<double>(im.size());
  std::vector<Rates> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto imp_le = std::upper_bound(im.begin(), im.end(), t) - im.begin();
    const auto gen_le = std::upper_bound(g.begin(), g.end(), t) - g.begin();
    out.push_back({t, static_cast<double>(imp_le) / ni,
                   static_cast<double>(static_cast<std::ptrdiff_t>(g.size()) - gen_le) / ng});
  }
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct TrialPlan {
  std::size_t probe;
  std::vector<std::size_t> references;
  bool genuine;
};

std::vector<TrialPlan> plan_trials(const ProtocolSplit& protocol, EnrollmentMode mode,
                                   ImpostorKind impostor) {
  std::vector<TrialPlan> plans;
  for (const std::string& user : protocol.users) {
    const auto& enroll = protocol.enrollment.at(user);
    auto add = [&](const std::vector<std::size_t>& probes, bool genuine) {
      for (std::size_t p : probes) {
        if (mode == EnrollmentMode::FourVsOne) {
          plans.push_back({p, enroll, genuine});
        } else {
          for (std::size_t e : enroll) plans.push_back({p, {e}, genuine});
        }
      }
    };
    add(protocol.probes_genuine.at(user), true);
    if (impostor == ImpostorKind::Random) {
      add(protocol.probes_random(user), false);
    } else {
      const auto it = protocol.probes_skilled.find(user);
      if (it != protocol.probes_skilled.end()) add(it->second, false);
    }
  }
  return plans;
}

std::vector<std::string> ids_of(const std::vector<SignatureSample>& dataset,
                                const std::vector<std::size_t>& indices) {
  std::vector<std::string> out;
  for (std::size_t i : indices) out.push_back(sample_id(dataset[i]));
  return out;
}

EvalReport summarize(const BenchmarkCell& cell, ScoreLists lists, EerMethod method) {
  EvalReport report;
  report.cell = cell;
  report.low_confidence = lists.genuine.size() < 10 || lists.impostor.size() < 10;
  if (!lists.genuine.empty() && !lists.impostor.empty()) {
    const EerResult eer = compute_eer(lists.genuine, lists.impostor, method);
    report.eer = eer.eer;
    report.eer_threshold = eer.threshold;
    report.det_points = det_curve(lists.genuine, lists.impostor);
  } else {
    report.eer = std::numeric_limits<double>::quiet_NaN();
    report.eer_threshold = std::numeric_limits<double>::quiet_NaN();
    report.low_confidence = true;
  }
  report.genuine_scores = std::move(lists.genuine);
  report.impostor_scores = std::move(lists.impostor);
  report.trials = std::move(lists.trials);
  return report;
}

std::string csv_field(const std::string& s) {
  return s.find_first_of(",\"\n") == std::string::npos ? s : "\"" + s + "\"";
}

Series2 resample_polyline(const Series2& s, std::size_t n) {
  Series2 out(static_cast<Eigen::Index>(n), 2);
  const auto last = static_cast<double>(s.rows() - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double pos = n == 1 ? 0.0 : last * static_cast<double>(k) / static_cast<double>(n - 1);
    auto i = static_cast<Eigen::Index>(std::floor(pos));
    if (i >= s.rows() - 1) i = s.rows() - 2;
    const double f = pos - static_cast<double>(i);
    out.row(static_cast<Eigen::Index>(k)) = (1.0 - f) * s.row(i) + f * s.row(i + 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(EnrollmentMode mode) {
  return mode == EnrollmentMode::OneVsOne ? "1vs1" : "4vs1";
}

std::string_view to_string(ImpostorKind kind) {
  return kind == ImpostorKind::Random ? "random" : "skilled";
}

std::string sensor_set_name(const SensorSet& sensors) {
  std::string out;
  for (SensorKind kind : sensors) {
    if (!out.empty()) out += '+';
    out += short_name(kind);
  }
  return out.empty() ? "none" : out;
}

std::string BenchmarkCell::label() const {
  std::string head;
  if (scorer.kind == ScorerSpec::Kind::Dtw) {
    head = "dtw_" + sensor_set_name(sensors);
  } else {
    head = "emb_" + scorer.embedding_file.stem().string();
  }
  return head + "_" + std::string(to_string(mode)) + "_" + std::string(to_string(impostor));
}

std::vector<std::size_t> ProtocolSplit::probes_random(const std::string& user_id) const {
  std::vector<std::size_t> out;
  for (const std::string& other : users) {
    if (other == user_id) continue;
    const auto& probes = probes_genuine.at(other);
    out.insert(out.end(), probes.begin(), probes.end());
  }
  return out;
}

ProtocolSplit build_protocol(const std::vector<SignatureSample>& dataset) {
  struct UserSamples {
    std::map<int, std::vector<std::pair<int, std::size_t>>> genuine;  // session -> (attempt, index)
    std::vector<std::size_t> forgeries;
  };
  std::map<std::string, UserSamples> by_user;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const SignatureSample& s = dataset[i];
    if (s.session == 1) continue;
    if (s.label == Label::Genuine) {
      by_user[s.user_id].genuine[s.session].push_back({s.attempt, i});
    } else if (s.label == Label::SkilledForgery) {
      by_user[s.user_id].forgeries.push_back(i);
    }
  }

  ProtocolSplit split;
  for (auto& [user, samples] : by_user) {
    for (auto& [session, list] : samples.genuine) std::sort(list.begin(), list.end());
    auto count = [&](int session) {
      const auto it = samples.genuine.find(session);
      return it == samples.genuine.end() ? std::size_t{0} : it->second.size();
    };
    std::string reason;
    if (count(2) < 2) reason = "fewer than 2 genuine samples in session 2";
    else if (count(3) < 2) reason = "fewer than 2 genuine samples in session 3";
    else if (count(4) < 1) reason = "no genuine sample in session 4";
    if (!reason.empty()) {
      split.excluded.push_back({user, reason});
      continue;
    }
    std::vector<std::size_t> enroll;
    for (int session : {2, 3}) {
      for (std::size_t k = 0; k < 2; ++k) enroll.push_back(samples.genuine[session][k].second);
    }
    std::vector<std::size_t> probes;
    for (const auto& [attempt, index] : samples.genuine[4]) probes.push_back(index);
    split.users.push_back(user);
    split.enrollment[user] = std::move(enroll);
    split.probes_genuine[user] = std::move(probes);
    split.probes_skilled[user] = samples.forgeries;
  }
  return split;
}

EerResult compute_eer(const std::vector<double>& genuine, const std::vector<double>& impostor,
                      EerMethod method) {
  const std::vector<Rates> rates = sweep(genuine, impostor);
  std::size_t best = 0;
  double best_gap = kInf;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const double gap = std::abs(rates[k].far - rates[k].frr);
    if (gap < best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  EerResult result{(rates[best].far + rates[best].frr) / 2.0, rates[best].threshold};
  if (method == EerMethod::Sweep || best_gap == 0.0) return result;

  // FRR - FAR falls from 1 to -1 along the sweep; intersect the two rates
  // linearly across the sign change.
  for (std::size_t k = 0; k + 1 < rates.size(); ++k) {
    const double d0 = rates[k].frr - rates[k].far;
    const double d1 = rates[k + 1].frr - rates[k + 1].far;
    if (d0 > 0.0 && d1 < 0.0) {
      const double alpha = d0 / (d0 - d1);
      result.eer = rates[k].far + alpha * (rates[k + 1].far - rates[k].far);
      const double t0 = rates[k].threshold;
      const double t1 = rates[k + 1].threshold;
      if (std::isfinite(t0) && std::isfinite(t1)) result.threshold = t0 + alpha * (t1 - t0);
      else result.threshold = std::isfinite(t0) ? t0 : t1;
      break;
    }
  }
  return result;
}

std::vector<DetPoint> det_curve(const std::vector<double>& genuine,
                                const std::vector<double>& impostor) {
  std::vector<DetPoint> out;
  for (const Rates& r : sweep(genuine, impostor)) {
    if (!out.empty() && out.back().far == r.far && out.back().frr == r.frr) continue;
    out.push_back({r.threshold, r.far, r.frr});
  }
  return out;
}

std::vector<EvalReport> run_benchmark(const std::vector<SignatureSample>& dataset,
                                      const std::vector<BenchmarkCell>& matrix,
                                      const BenchmarkOptions& options) {
  if (matrix.empty()) return {};
  const ProtocolSplit protocol = build_protocol(dataset);

  // Every (probe, reference) pair any DTW cell needs, scored once on the union
  // of requested sensors; cells then fuse their own subsets.
  std::set<batch::IndexPair> pair_set;
  SensorSet all_sensors;
  for (const BenchmarkCell& cell : matrix) {
    if (cell.scorer.kind != ScorerSpec::Kind::Dtw) continue;
    if (cell.sensors.empty()) fail(ErrorCode::InvalidArgument, "benchmark cell with no sensors");
    all_sensors.insert(cell.sensors.begin(), cell.sensors.end());
    for (const TrialPlan& t : plan_trials(protocol, cell.mode, cell.impostor)) {
      for (std::size_t r : t.references) pair_set.insert({t.probe, r});
    }
  }
  const std::vector<batch::IndexPair> pairs(pair_set.begin(), pair_set.end());
  const std::vector<MatchScore> pair_scores =
      pairs.empty() ? std::vector<MatchScore>{}
                    : batch::score_pairs(dataset, pairs, all_sensors, options.dtw, options.weights,
                                         options.parallel ? batch::Execution::Parallel
                                                          : batch::Execution::Serial);
  std::map<batch::IndexPair, const MatchScore*> lookup;
  for (std::size_t k = 0; k < pairs.size(); ++k) lookup[pairs[k]] = &pair_scores[k];

  std::map<fs::path, EmbeddingTable> tables;
  std::vector<EvalReport> reports;
  for (const BenchmarkCell& cell : matrix) {
    ScoreLists lists;
    if (cell.scorer.kind == ScorerSpec::Kind::EmbeddingFile) {
      const fs::path& file = cell.scorer.embedding_file;
      if (file.empty() || !fs::exists(file)) {
        fail(ErrorCode::MissingArtifact, "embedding file not found: " + file.string());
      }
      if (!tables.count(file)) tables.emplace(file, load_embeddings(file));
      lists = score_embeddings(tables.at(file), dataset, protocol, cell.mode, cell.impostor);
    } else {
      for (const TrialPlan& t : plan_trials(protocol, cell.mode, cell.impostor)) {
        std::vector<MatchScore> per_reference;
        for (std::size_t r : t.references) {
          const MatchScore& full = *lookup.at({t.probe, r});
          MatchScore s;
          for (SensorKind kind : cell.sensors) s.per_sensor[kind] = full.per_sensor.at(kind);
          s.value = fuse(s.per_sensor, options.weights);
          per_reference.push_back(std::move(s));
        }
        Trial trial{sample_id(dataset[t.probe]), ids_of(dataset, t.references),
                    average_scores(per_reference), t.genuine};
        (t.genuine ? lists.genuine : lists.impostor).push_back(trial.score.value);
        lists.trials.push_back(std::move(trial));
      }
    }
    reports.push_back(summarize(cell, std::move(lists), options.eer_method));
  }
  return reports;
}

EmbeddingTable load_embeddings(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCode::MissingArtifact, "embedding file not found: " + path.string());
  const std::string text = read_text_file(path);
  EmbeddingTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!header_seen) {
      if (fields.size() < 2 || fields[0] != "sample_id") {
        fail(ErrorCode::ParseError, where + ": header must be sample_id,e0,...");
      }
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k] != "e" + std::to_string(k - 1)) {
          fail(ErrorCode::ParseError, where + ": unexpected column '" + std::string(fields[k]) + "'");
        }
      }
      table.dimension = fields.size() - 1;
      header_seen = true;
      continue;
    }
    if (fields.size() - 1 != table.dimension) {
      fail(ErrorCode::DimensionMismatch, where + ": expected " + std::to_string(table.dimension) +
                                             " values, found " + std::to_string(fields.size() - 1));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(table.dimension));
    for (std::size_t k = 0; k < table.dimension; ++k) {
      try {
        v(static_cast<Eigen::Index>(k)) = parse_double(fields[k + 1]);
      } catch (const Error& e) {
        fail(ErrorCode::ParseError, where + ": " + e.what());
      }
    }
    if (!table.vectors.emplace(std::string(fields[0]), std::move(v)).second) {
      fail(ErrorCode::ParseError, where + ": duplicate sample id '" + std::string(fields[0]) + "'");
    }
  }
  if (!header_seen) fail(ErrorCode::ParseError, path.string() + ": empty embedding file");
  return table;
}

double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::DimensionMismatch, "embedding dimensions differ: " + std::to_string(a.size()) +
                                           " vs " + std::to_string(b.size()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::InvalidArgument, "cosine distance of a zero vector");
  return std::clamp(1.0 - a.dot(b) / (na * nb), 0.0, 2.0);
}

ScoreLists score_embeddings(const EmbeddingTable& table, const std::vector<SignatureSample>& dataset,
                            const ProtocolSplit& protocol, EnrollmentMode mode,
                            ImpostorKind impostor) {
  auto vector_of = [&](std::size_t index) -> const Eigen::VectorXd& {
    const std::string id = sample_id(dataset[index]);
    const auto it = table.vectors.find(id);
    if (it == table.vectors.end()) fail(ErrorCode::MissingEmbedding, "no embedding for " + id);
    return it->second;
  };
  ScoreLists lists;
  for (const TrialPlan& t : plan_trials(protocol, mode, impostor)) {
    const Eigen::VectorXd& probe = vector_of(t.probe);
    double sum = 0.0;
    for (std::size_t r : t.references) sum += cosine_distance(probe, vector_of(r));
    Trial trial;
    trial.probe_id = sample_id(dataset[t.probe]);
    trial.reference_ids = ids_of(dataset, t.references);
    trial.score.value = sum / static_cast<double>(t.references.size());
    trial.genuine = t.genuine;
    (t.genuine ? lists.genuine : lists.impostor).push_back(trial.score.value);
    lists.trials.push_back(std::move(trial));
  }
  return lists;
}

ProcrustesResult procrustes_align(const Series2& reconstruction, const Series2& reference,
                                  std::size_t common_length) {
  if (reference.rows() < 3) fail(ErrorCode::DegenerateGeometry, "reference needs at least 3 points");
  if (reconstruction.rows() < 3) {
    fail(ErrorCode::DegenerateGeometry, "reconstruction needs at least 3 points");
  }
  const std::size_t n = common_length ? common_length
                                      : static_cast<std::size_t>(
                                            std::max(reconstruction.rows(), reference.rows()));
  if (n < 3) fail(ErrorCode::InvalidArgument, "common length must be at least 3");

  const Series2 x = resample_polyline(reconstruction, n);
  const Series2 y = resample_polyline(reference, n);
  const Eigen::RowVector2d mx = x.colwise().mean();
  const Eigen::RowVector2d my = y.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - mx;
  const Eigen::MatrixXd yc = y.rowwise() - my;

  // Extent = RMS distance of the reference points from their centroid, so the
  // residual is 0 for an exact fit and at most 1 (the fit can always collapse
  // to the centroid).
  const double extent = std::sqrt(yc.squaredNorm() / static_cast<double>(n));
  if (!(extent > 1e-12)) fail(ErrorCode::DegenerateGeometry, "reference has zero extent");
  const double x_energy = xc.squaredNorm();
  if (!(x_energy > 1e-24)) fail(ErrorCode::DegenerateGeometry, "reconstruction has zero extent");

  // Orthogonal Procrustes on the centred point sets; reflections allowed.
  const Eigen::Matrix2d h = xc.transpose() * yc;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2d rot = svd.matrixU() * svd.matrixV().transpose();
  const double scale = svd.singularValues().sum() / x_energy;

  ProcrustesResult result;
  result.aligned = ((scale * xc * rot).rowwise() + my);
  result.reference = y;
  result.scale = scale;
  result.reflected = rot.determinant() < 0.0;
  const double rmse = std::sqrt((result.aligned - y).rowwise().squaredNorm().mean());
  result.residual = rmse / extent;
  return result;
}

SplitManifest split_users(std::vector<std::string> users, std::uint64_t seed,
                          double test_fraction, double val_fraction) {
  if (test_fraction < 0.0 || test_fraction > 1.0 || val_fraction < 0.0 || val_fraction > 1.0) {
    fail(ErrorCode::InvalidArgument, "split fractions must lie in [0, 1]");
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = users.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(users[i - 1], users[j]);
  }
  const auto n = static_cast<double>(users.size());
  const auto n_test = static_cast<std::size_t>(std::llround(n * test_fraction));
  const auto n_val =
      static_cast<std::size_t>(std::llround(static_cast<double>(users.size() - n_test) * val_fraction));

  SplitManifest split;
  split.seed = seed;
  split.test.assign(users.begin(), users.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.validation.assign(users.begin() + static_cast<std::ptrdiff_t>(n_test),
                          users.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
  split.train.assign(users.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), users.end());
  for (auto* part : {&split.train, &split.validation, &split.test}) std::sort(part->begin(), part->end());
  return split;
}

std::string split_to_json(const SplitManifest& split) {
  json j;
  j["seed"] = split.seed;
  j["train"] = split.train;
  j["validation"] = split.validation;
  j["test"] = split.test;
  return j.dump(2) + "\n";
}

std::string reports_to_json(const std::vector<EvalReport>& reports) {
  json out = json::array();
  for (const EvalReport& r : reports) {
    json cell;
    cell["label"] = r.cell.label();
    cell["scorer"] = r.cell.scorer.kind == ScorerSpec::Kind::Dtw ? "dtw" : "embedding";
    if (r.cell.scorer.kind == ScorerSpec::Kind::EmbeddingFile) {
      cell["embedding_file"] = r.cell.scorer.embedding_file.string();
    } else {
      std::vector<std::string> names;
      for (SensorKind k : r.cell.sensors) names.emplace_back(short_name(k));
      cell["sensors"] = names;
    }
    cell["mode"] = std::string(to_string(r.cell.mode));
    cell["impostor"] = std::string(to_string(r.cell.impostor));

    json det = json::array();
    for (const DetPoint& p : r.det_points) {
      det.push_back({{"threshold", finite_or_null(p.threshold)}, {"far", p.far}, {"frr", p.frr}});
    }
    out.push_back({{"cell", cell},
                   {"eer", finite_or_null(r.eer)},
                   {"eer_threshold", finite_or_null(r.eer_threshold)},
                   {"genuine_count", r.genuine_scores.size()},
                   {"impostor_count", r.impostor_scores.size()},
                   {"low_confidence", r.low_confidence},
                   {"det_points", det}});
  }
  return out.dump(2) + "\n";
}

void write_reports(const std::vector<EvalReport>& reports, const fs::path& dir) {
  fs::create_directories(dir);
  write_text_file(dir / "reports.json", reports_to_json(reports));
  for (const EvalReport& r : reports) {
    const std::string label = r.cell.label();
    std::string scores = "probe_id,reference_ids,genuine,score,score_acc,score_linacc,score_gyro\n";
    for (const Trial& t : r.trials) {
      std::string refs;
      for (const std::string& id : t.reference_ids) refs += (refs.empty() ? "" : ";") + id;
      scores += csv_field(t.probe_id) + ',' + csv_field(refs) + ',' + (t.genuine ? "1" : "0") + ',' +
                format_double(t.score.value);
      for (SensorKind kind : kAllSensors) {
        scores += ',';
        const auto it = t.score.per_sensor.find(kind);
        if (it != t.score.per_sensor.end()) scores += format_double(it->second);
      }
      scores += '\n';
    }
    write_text_file(dir / (label + "_scores.csv"), scores);

    std::string det = "threshold,far,frr\n";
    for (const DetPoint& p : r.det_points) {
      det += format_double(p.threshold) + ',' + format_double(p.far) + ',' + format_double(p.frr) + '\n';
    }
    write_text_file(dir / (label + "_det.csv"), det);
  }
}

}  // namespace airsig
