#include "airsig/config.hpp"

#include "airsig/dataset.hpp"
#include "airsig/error.hpp"

#include <functional>

namespace airsig {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  fail(ErrorCode::ParseError, "config key '" + key + "': '" + value + "' is not " + expected);
}

double as_double(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const Error&) {
    bad_value(key, value, "a number");
  }
}

int as_int(const std::string& key, const std::string& value) {
  const double v = as_double(key, value);
  if (v != static_cast<double>(static_cast<int>(v))) bad_value(key, value, "an integer");
  return static_cast<int>(v);
}

bool as_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "true or false");
}

std::optional<double> as_optional_hz(const std::string& key, const std::string& value) {
  if (value == "auto") return std::nullopt;
  return as_double(key, value);
}

std::string hz_text(const std::optional<double>& v) { return v ? format_double(*v) : "auto"; }

template <typename Enum>
Enum as_enum(const std::string& key, const std::string& value,
             std::initializer_list<std::pair<const char*, Enum>> choices) {
  std::string expected = "one of";
  for (const auto& [name, e] : choices) {
    if (value == name) return e;
    expected += std::string(" ") + name;
  }
  fail(ErrorCode::ParseError, "config key '" + key + "': '" + value + "' is not " + expected);
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"preprocess.target_hz", [](auto& c, auto& k, auto& v) { c.preprocess.target_hz = as_double(k, v); }},
      {"preprocess.tau", [](auto& c, auto& k, auto& v) { c.preprocess.tau = as_double(k, v); }},
      {"preprocess.win_s", [](auto& c, auto& k, auto& v) { c.preprocess.win_s = as_double(k, v); }},
      {"preprocess.hop_s", [](auto& c, auto& k, auto& v) { c.preprocess.hop_s = as_double(k, v); }},
      {"preprocess.smooth_window",
       [](auto& c, auto& k, auto& v) { c.preprocess.smooth_window = as_int(k, v); }},
      {"preprocess.pad_length", [](auto& c, auto& k, auto& v) { c.preprocess.pad_length = as_int(k, v); }},
      {"preprocess.reconstruct_margin_s",
       [](auto& c, auto& k, auto& v) { c.preprocess.reconstruct_margin_s = as_double(k, v); }},
      {"preprocess.profile",
       [](auto& c, auto& k, auto& v) {
         c.preprocess.profile = as_enum<PreprocessProfile>(
             k, v, {{"verify", PreprocessProfile::Verify}, {"reconstruct", PreprocessProfile::Reconstruct}});
       }},
      {"reconstruct.beta", [](auto& c, auto& k, auto& v) { c.reconstruct.beta = as_double(k, v); }},
      {"reconstruct.gravity", [](auto& c, auto& k, auto& v) { c.reconstruct.gravity = as_double(k, v); }},
      {"reconstruct.orientation",
       [](auto& c, auto& k, auto& v) {
         c.reconstruct.orientation = as_enum<OrientationSource>(
             k, v, {{"madgwick", OrientationSource::Madgwick}, {"ground_truth", OrientationSource::GroundTruth}});
       }},
      {"reconstruct.integrator",
       [](auto& c, auto& k, auto& v) {
         c.reconstruct.integrator = as_enum<GyroIntegrator>(
             k, v, {{"first_order", GyroIntegrator::FirstOrder}, {"exponential", GyroIntegrator::Exponential}});
       }},
      {"reconstruct.cutoff_fraction",
       [](auto& c, auto& k, auto& v) { c.reconstruct.cutoff.fraction = as_double(k, v); }},
      {"reconstruct.cutoff_min_hz", [](auto& c, auto& k, auto& v) { c.reconstruct.cutoff.min_hz = as_double(k, v); }},
      {"reconstruct.cutoff_max_hz", [](auto& c, auto& k, auto& v) { c.reconstruct.cutoff.max_hz = as_double(k, v); }},
      {"reconstruct.cutoff_min_search_hz",
       [](auto& c, auto& k, auto& v) { c.reconstruct.cutoff.min_search_hz = as_double(k, v); }},
      {"reconstruct.cutoff_detrend",
       [](auto& c, auto& k, auto& v) { c.reconstruct.cutoff.detrend = as_bool(k, v); }},
      {"reconstruct.velocity_cutoff_hz",
       [](auto& c, auto& k, auto& v) { c.reconstruct.velocity_cutoff_hz = as_optional_hz(k, v); }},
      {"reconstruct.position_cutoff_hz",
       [](auto& c, auto& k, auto& v) { c.reconstruct.position_cutoff_hz = as_optional_hz(k, v); }},
      {"reconstruct.zero_phase", [](auto& c, auto& k, auto& v) { c.reconstruct.zero_phase = as_bool(k, v); }},
      {"dtw.band", [](auto& c, auto& k, auto& v) { c.dtw.band = as_int(k, v); }},
      {"dtw.mode",
       [](auto& c, auto& k, auto& v) {
         c.dtw.mode = as_enum<DtwMode>(k, v, {{"multivariate", DtwMode::Multivariate}, {"per_axis", DtwMode::PerAxis}});
       }},
      {"dtw.weight_acc", [](auto& c, auto& k, auto& v) { c.weights[0] = as_double(k, v); }},
      {"dtw.weight_linacc", [](auto& c, auto& k, auto& v) { c.weights[1] = as_double(k, v); }},
      {"dtw.weight_gyro", [](auto& c, auto& k, auto& v) { c.weights[2] = as_double(k, v); }},
      {"eer.method",
       [](auto& c, auto& k, auto& v) {
         c.eer_method = as_enum<EerMethod>(k, v, {{"sweep", EerMethod::Sweep}, {"interpolated", EerMethod::Interpolated}});
       }},
  };
  return table;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::ParseError, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) fail(ErrorCode::ParseError, "config line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return out;
}

PipelineConfig apply_key_values(PipelineConfig base, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    const auto it = setters().find(key);
    if (it == setters().end()) fail(ErrorCode::ParseError, "unknown config key '" + key + "'");
    it->second(base, key, value);
  }
  if (base.preprocess.target_hz <= 0.0) fail(ErrorCode::ParseError, "preprocess.target_hz must be positive");
  if (base.preprocess.smooth_window < 1) fail(ErrorCode::ParseError, "preprocess.smooth_window must be >= 1");
  if (base.preprocess.pad_length < 1) fail(ErrorCode::ParseError, "preprocess.pad_length must be >= 1");
  if (base.preprocess.reconstruct_margin_s < 0.0) {
    fail(ErrorCode::ParseError, "preprocess.reconstruct_margin_s must not be negative");
  }
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return apply_key_values(PipelineConfig{}, parse_key_values(read_text_file(path)));
}

std::string to_key_values(const PipelineConfig& c) {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  const auto& p = c.preprocess;
  const auto& r = c.reconstruct;
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + "=" + value + "\n"; };
  line("preprocess.target_hz", format_double(p.target_hz));
  line("preprocess.tau", format_double(p.tau));
  line("preprocess.win_s", format_double(p.win_s));
  line("preprocess.hop_s", format_double(p.hop_s));
  line("preprocess.smooth_window", std::to_string(p.smooth_window));
  line("preprocess.pad_length", std::to_string(p.pad_length));
  line("preprocess.reconstruct_margin_s", format_double(p.reconstruct_margin_s));
  line("preprocess.profile", p.profile == PreprocessProfile::Verify ? "verify" : "reconstruct");
  line("reconstruct.beta", format_double(r.beta));
  line("reconstruct.gravity", format_double(r.gravity));
  line("reconstruct.orientation", r.orientation == OrientationSource::Madgwick ? "madgwick" : "ground_truth");
  line("reconstruct.integrator", r.integrator == GyroIntegrator::FirstOrder ? "first_order" : "exponential");
  line("reconstruct.cutoff_fraction", format_double(r.cutoff.fraction));
  line("reconstruct.cutoff_min_hz", format_double(r.cutoff.min_hz));
  line("reconstruct.cutoff_max_hz", format_double(r.cutoff.max_hz));
  line("reconstruct.cutoff_min_search_hz", format_double(r.cutoff.min_search_hz));
  line("reconstruct.cutoff_detrend", b(r.cutoff.detrend));
  line("reconstruct.velocity_cutoff_hz", hz_text(r.velocity_cutoff_hz));
  line("reconstruct.position_cutoff_hz", hz_text(r.position_cutoff_hz));
  line("reconstruct.zero_phase", b(r.zero_phase));
  line("dtw.band", std::to_string(c.dtw.band));
  line("dtw.mode", c.dtw.mode == DtwMode::Multivariate ? "multivariate" : "per_axis");
  line("dtw.weight_acc", format_double(c.weights[0]));
  line("dtw.weight_linacc", format_double(c.weights[1]));
  line("dtw.weight_gyro", format_double(c.weights[2]));
  line("eer.method", c.eer_method == EerMethod::Sweep ? "sweep" : "interpolated");
  return out;
}

}  // namespace airsig
