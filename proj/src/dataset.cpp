#include "airsig/dataset.hpp"

#include "airsig/error.hpp"
#include "airsig/signal.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace airsig {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr int kFormatVersion = 1;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

CsvTable read_csv(const fs::path& path, const std::vector<std::string>& expected_header) {
  const std::string text = read_text_file(path);
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(f);
      if (table.header != expected_header) {
        fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) +
                                        ": unexpected header '" + std::string(line) + "'");
      }
      continue;
    }
    if (fields.size() != expected_header.size()) {
      fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                      std::to_string(expected_header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      try {
        row.push_back(parse_double(f));
      } catch (const Error& e) {
        fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) fail(ErrorCode::ParseError, path.string() + ": empty file");
  return table;
}

std::string join_header(const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  return out + '\n';
}

std::string series_csv(const std::vector<double>& ts, const Eigen::MatrixXd& values,
                       const std::vector<std::string>& header) {
  std::string out = join_header(header);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    out += format_double(ts[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      out += ',';
      out += format_double(values(r, c));
    }
    out += '\n';
  }
  return out;
}

const std::vector<std::string> kXyz{"t", "x", "y", "z"};
const std::vector<std::string> kWxyz{"t", "w", "x", "y", "z"};
const std::vector<std::string> kUv{"u", "v"};

std::pair<std::vector<double>, Eigen::MatrixXd> read_series(const fs::path& path,
                                                            const std::vector<std::string>& header) {
  const CsvTable table = read_csv(path, header);
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto cols = static_cast<Eigen::Index>(header.size() - 1);
  std::vector<double> ts(table.rows.size());
  Eigen::MatrixXd values(n, cols);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    ts[static_cast<std::size_t>(r)] = row[0];
    for (Eigen::Index c = 0; c < cols; ++c) values(r, c) = row[static_cast<std::size_t>(c + 1)];
  }
  return {std::move(ts), std::move(values)};
}

SensorTrace read_trace(const fs::path& path, SensorKind kind) {
  auto [ts, values] = read_series(path, kXyz);
  try {
    return SensorTrace(kind, std::move(ts), Series3(values));
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

template <typename T>
T require(const json& entry, const char* field, const std::string& where) {
  if (!entry.contains(field)) fail(ErrorCode::ParseError, where + ": missing field '" + field + "'");
  try {
    return entry.at(field).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::ParseError, where + ": field '" + field + "' has the wrong type");
  }
}

struct ManifestEntry {
  SignatureSample meta;
  std::string id;
  std::map<SensorKind, std::string> trace_files;
  std::optional<json> ground_truth;
  std::optional<std::string> reference_file;
};

ManifestEntry parse_entry(const json& entry, std::size_t index) {
  const std::string where = std::string(kManifestName) + ": samples[" + std::to_string(index) + "]";
  if (!entry.is_object()) fail(ErrorCode::ParseError, where + ": not an object");
  ManifestEntry out;
  out.meta.user_id = require<std::string>(entry, "user_id", where);
  out.meta.session = require<int>(entry, "session", where);
  out.meta.attempt = require<int>(entry, "attempt", where);
  out.meta.device_model = require<std::string>(entry, "device_model", where);
  const auto label_text = require<std::string>(entry, "label", where);
  const auto label = parse_label(label_text);
  if (!label) fail(ErrorCode::ParseError, where + ": unknown label '" + label_text + "'");
  out.meta.label = *label;
  if (out.meta.session < 1 || out.meta.session > 4) {
    fail(ErrorCode::ParseError, where + ": field 'session' must be in 1..4");
  }
  out.id = entry.contains("sample_id") ? require<std::string>(entry, "sample_id", where)
                                       : sample_id(out.meta);

  const auto files = require<json>(entry, "trace_files", where);
  if (!files.is_object() || files.empty()) {
    fail(ErrorCode::ParseError, where + ": field 'trace_files' must be a non-empty object");
  }
  for (const auto& [name, file] : files.items()) {
    const auto kind = parse_sensor(name);
    if (!kind) fail(ErrorCode::ParseError, where + ": unknown sensor '" + name + "' in trace_files");
    if (!file.is_string()) fail(ErrorCode::ParseError, where + ": trace_files." + name + " not a string");
    out.trace_files[*kind] = file.get<std::string>();
  }
  if (entry.contains("ground_truth_files") && !entry.at("ground_truth_files").is_null()) {
    out.ground_truth = entry.at("ground_truth_files");
  }
  if (entry.contains("reference_file") && !entry.at("reference_file").is_null()) {
    out.reference_file = require<std::string>(entry, "reference_file", where);
  }
  return out;
}

SignatureSample load_entry(const ManifestEntry& entry, const fs::path& dir) {
  SignatureSample sample = entry.meta;
  for (const auto& [kind, file] : entry.trace_files) {
    sample.traces.emplace(kind, read_trace(dir / file, kind));
  }
  if (entry.ground_truth) {
    const json& g = *entry.ground_truth;
    const std::string where = entry.id + ".ground_truth_files";
    GroundTruth gt;
    auto [pts, pos] = read_series(dir / require<std::string>(g, "position", where), kXyz);
    auto [vts, vel] = read_series(dir / require<std::string>(g, "velocity", where), kXyz);
    auto [qts, quat] = read_series(dir / require<std::string>(g, "orientation", where), kWxyz);
    if (pts != vts || pts != qts) {
      fail(ErrorCode::ParseError, where + ": ground-truth files use different timestamps");
    }
    const auto bounds = require<std::vector<std::size_t>>(g, "gesture_bounds", where);
    if (bounds.size() != 2 || bounds[0] >= bounds[1] || bounds[1] > pts.size()) {
      fail(ErrorCode::ParseError, where + ": invalid gesture_bounds");
    }
    gt.timestamps = pts;
    gt.position = pos;
    gt.velocity = vel;
    gt.orientation.timestamps = qts;
    for (Eigen::Index r = 0; r < quat.rows(); ++r) {
      gt.orientation.quaternions.push_back({quat(r, 0), quat(r, 1), quat(r, 2), quat(r, 3)});
    }
    gt.gesture_bounds = {bounds[0], bounds[1]};
    sample.ground_truth = std::move(gt);
  }
  if (entry.reference_file) {
    const CsvTable table = read_csv(dir / *entry.reference_file, kUv);
    Series2 ref(static_cast<Eigen::Index>(table.rows.size()), 2);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      ref(static_cast<Eigen::Index>(r), 0) = table.rows[r][0];
      ref(static_cast<Eigen::Index>(r), 1) = table.rows[r][1];
    }
    sample.reference_2d = std::move(ref);
  }
  try {
    validate(sample);
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, entry.id + ": " + e.what());
  }
  return sample;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::IoError, "write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LoadResult load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifestName;
  if (!fs::exists(manifest_path)) {
    fail(ErrorCode::MissingManifest, "no " + std::string(kManifestName) + " in " + dir.string());
  }
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("samples") || !manifest.at("samples").is_array()) {
    fail(ErrorCode::ParseError, manifest_path.string() + ": missing 'samples' array");
  }

  LoadResult result;
  if (manifest.contains("processing") && manifest.at("processing").is_string()) {
    result.processing = manifest.at("processing").get<std::string>();
  }
  const json& entries = manifest.at("samples");
  std::vector<ManifestEntry> parsed;
  for (std::size_t i = 0; i < entries.size(); ++i) parsed.push_back(parse_entry(entries[i], i));

  for (const ManifestEntry& entry : parsed) {
    try {
      result.samples.push_back(load_entry(entry, dir));
    } catch (const Error& e) {
      std::string file;
      const std::string msg = e.what();
      for (const auto& [kind, f] : entry.trace_files) {
        if (msg.find(f) != std::string::npos) file = f;
      }
      result.rejected.push_back({entry.id, file, msg});
    }
  }
  return result;
}

std::vector<SignatureSample> load_dataset_strict(const fs::path& dir) {
  LoadResult result = load_dataset(dir);
  if (!result.rejected.empty()) {
    fail(ErrorCode::ParseError, result.rejected.front().message);
  }
  return std::move(result.samples);
}

void save_dataset(const std::vector<SignatureSample>& samples, const fs::path& dir,
                  const std::optional<std::string>& processing) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = "airsig-dataset";
  manifest["version"] = kFormatVersion;
  manifest["processing"] = processing ? json(*processing) : json(nullptr);
  manifest["samples"] = json::array();

  std::set<std::string> seen;
  for (const SignatureSample& s : samples) {
    validate(s);
    const std::string id = sample_id(s);
    if (!seen.insert(id).second) fail(ErrorCode::InvalidArgument, "duplicate sample id " + id);

    json entry;
    entry["sample_id"] = id;
    entry["user_id"] = s.user_id;
    entry["session"] = s.session;
    entry["attempt"] = s.attempt;
    entry["device_model"] = s.device_model;
    entry["label"] = std::string(to_string(s.label));
    json files = json::object();
    for (const auto& [kind, trace] : s.traces) {
      const std::string rel = "traces/" + id + "_" + std::string(short_name(kind)) + ".csv";
      write_text_file(dir / rel, series_csv(trace.timestamps(), trace.samples(), kXyz));
      files[std::string(short_name(kind))] = rel;
    }
    entry["trace_files"] = files;

    if (s.ground_truth) {
      const GroundTruth& gt = *s.ground_truth;
      const std::string base = "ground_truth/" + id;
      write_text_file(dir / (base + "_position.csv"), series_csv(gt.timestamps, gt.position, kXyz));
      write_text_file(dir / (base + "_velocity.csv"), series_csv(gt.timestamps, gt.velocity, kXyz));
      Eigen::MatrixXd q(static_cast<Eigen::Index>(gt.orientation.size()), 4);
      for (std::size_t k = 0; k < gt.orientation.size(); ++k) {
        const Quaternion& qk = gt.orientation.quaternions[k];
        q.row(static_cast<Eigen::Index>(k)) << qk.w, qk.x, qk.y, qk.z;
      }
      write_text_file(dir / (base + "_orientation.csv"),
                      series_csv(gt.orientation.timestamps, q, kWxyz));
      entry["ground_truth_files"] = {
          {"position", base + "_position.csv"},
          {"velocity", base + "_velocity.csv"},
          {"orientation", base + "_orientation.csv"},
          {"gesture_bounds", {gt.gesture_bounds.start_index, gt.gesture_bounds.end_index}}};
    }
    if (s.reference_2d) {
      const std::string rel = "references/" + id + "_reference.csv";
      std::string csv = join_header(kUv);
      for (Eigen::Index r = 0; r < s.reference_2d->rows(); ++r) {
        csv += format_double((*s.reference_2d)(r, 0)) + ',' + format_double((*s.reference_2d)(r, 1)) +
               '\n';
      }
      write_text_file(dir / rel, csv);
      entry["reference_file"] = rel;
    }
    manifest["samples"].push_back(std::move(entry));
  }
  write_text_file(dir / kManifestName, manifest.dump(2) + "\n");
}

void export_fixed_length(const std::vector<SignatureSample>& samples, const fs::path& dir,
                         int length) {
  if (length <= 0) fail(ErrorCode::InvalidLength, "export length must be positive");
  fs::create_directories(dir);
  std::string index = "sample_id,file,user_id,session,attempt,label,device_model,original_length\n";
  std::string header;
  for (SensorKind kind : kAllSensors) {
    for (const char* axis : {"x", "y", "z"}) {
      header += (header.empty() ? "" : ",") + std::string(short_name(kind)) + "_" + axis;
    }
  }
  header += '\n';

  for (const SignatureSample& s : samples) {
    const std::string id = sample_id(s);
    std::vector<Series3> blocks;
    for (SensorKind kind : kAllSensors) {
      blocks.push_back(pad_or_truncate(s.trace(kind), length).samples());
    }
    std::string csv = header;
    for (Eigen::Index r = 0; r < length; ++r) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int c = 0; c < 3; ++c) {
          if (b || c) csv += ',';
          csv += format_double(blocks[b](r, c));
        }
      }
      csv += '\n';
    }
    const std::string file = id + ".csv";
    write_text_file(dir / file, csv);
    index += id + "," + file + "," + s.user_id + "," + std::to_string(s.session) + "," +
             std::to_string(s.attempt) + "," + std::string(to_string(s.label)) + "," +
             s.device_model + "," + std::to_string(s.trace(SensorKind::Accelerometer).size()) + "\n";
  }
  write_text_file(dir / "index.csv", index);
}

}  // namespace airsig
