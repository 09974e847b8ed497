#include "antex/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace antex {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_complex(Complex v) {
  std::string s = format_double(v.real());
  s += v.imag() < 0 ? "-" : "+";
  s += format_double(std::fabs(v.imag()));
  s += "i";
  return s;
}

namespace {

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("file", std::string("invalid JSON: ") + e.what());
  }
  return j;
}

std::vector<SamplePoint> points_from_json(const json& j) {
  if (!j.contains("points") || !j["points"].is_array())
    throw ConfigError("points", "missing or not an array");
  std::vector<SamplePoint> points;
  points.reserve(j["points"].size());
  for (const auto& p : j["points"]) {
    if (p.contains("pos")) {
      const auto& v = p["pos"];
      if (!v.is_array() || v.size() != 3)
        throw ConfigError("points.pos", "expected a 3-vector");
      points.push_back(SamplePoint::near_field(
          {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()}));
    } else if (p.contains("az") && p.contains("el")) {
      try {
        points.push_back(SamplePoint::far_field(
            Direction(p["az"].get<double>(), p["el"].get<double>())));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("points.el", e.what());
      }
    } else {
      throw ConfigError("points", "entry needs either az/el or pos");
    }
  }
  return points;
}

}  // namespace

SampledPattern read_pattern_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  SampledPattern out;
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("kind", "missing or not a string");
  out.kind = measurement_kind_from_string(j["kind"].get<std::string>());
  out.points = points_from_json(j);
  if (!j.contains("values") || !j["values"].is_array())
    throw ConfigError("values", "missing or not an array");
  const auto& vals = j["values"];
  if (vals.size() != out.points.size())
    throw ConfigError("values", "length differs from points");
  out.values.resize(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto& v = vals[i];
    if (out.kind == MeasurementKind::ComplexField) {
      if (!v.is_array() || v.size() != 2)
        throw ConfigError("values", "complex entries must be [re, im]");
      out.values[static_cast<Eigen::Index>(i)] = {v[0].get<double>(),
                                                  v[1].get<double>()};
    } else {
      if (!v.is_number())
        throw ConfigError("values", "magnitude entries must be numbers");
      out.values[static_cast<Eigen::Index>(i)] = v.get<double>();
    }
  }
  out.validate();
  return out;
}

namespace {

json points_to_json(std::span<const SamplePoint> points) {
  json arr = json::array();
  for (const auto& p : points) {
    if (p.is_far_field()) {
      arr.push_back({{"az", p.direction().azimuth()},
                     {"el", p.direction().elevation()}});
    } else {
      const auto& v = p.position();
      arr.push_back({{"pos", {v.x(), v.y(), v.z()}}});
    }
  }
  return arr;
}

json complex_vector_to_json(const Eigen::VectorXcd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back({v[i].real(), v[i].imag()});
  return arr;
}

}  // namespace

void write_pattern_json(const std::filesystem::path& path,
                        const SampledPattern& pattern) {
  pattern.validate();
  json j;
  j["kind"] = to_string(pattern.kind);
  j["points"] = points_to_json(pattern.points);
  if (pattern.kind == MeasurementKind::ComplexField) {
    j["values"] = complex_vector_to_json(pattern.values);
  } else {
    json arr = json::array();
    for (Eigen::Index i = 0; i < pattern.values.size(); ++i)
      arr.push_back(pattern.values[i].real());
    j["values"] = arr;
  }
  write_text_file(path, j.dump(2) + "\n");
}

std::vector<SamplePoint> read_points_json(const std::filesystem::path& path) {
  return points_from_json(load_json(path));
}

void write_result_json(const std::filesystem::path& path,
                       const ExtrapolationResult& result) {
  json j;
  j["config"] = std::vector<double>(result.config.begin(), result.config.end());
  j["excitation"] = complex_vector_to_json(result.excitation);
  j["residual_history"] = result.residual_history;
  j["converged"] = result.converged;
  j["iterations_used"] = result.iterations_used;
  j["undersampled"] = result.undersampled;
  j["skipped_candidates"] = result.skipped_candidates;
  if (result.predicted.size() > 0)
    j["predicted"] = complex_vector_to_json(result.predicted);
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out << body;
  if (!out) {
    std::error_code ec;
    const auto dir = path.has_parent_path() ? path.parent_path()
                                            : std::filesystem::path(".");
    std::ofstream marker(dir / "INCOMPLETE");
    marker << "write failed: " << path.string() << "\n";
    throw IoError("cannot write '" + path.string() + "'");
  }
}

// ----------------------------- FlatConfig ---------------------------------

FlatConfig FlatConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

FlatConfig FlatConfig::parse_string(const std::string& text) {
  FlatConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments outside of quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no),
                        "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    if (value.empty())
      throw ConfigError(key, "empty value");
    if (cfg.values_.count(key)) throw ConfigError(key, "duplicate key");
    cfg.values_[key] = {value, line_no};
  }
  return cfg;
}

bool FlatConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string FlatConfig::get_string(const std::string& key,
                                   const std::string& fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& raw = it->second.raw;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
    return raw.substr(1, raw.size() - 2);
  return raw;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& raw = it->second.raw;
  double v = 0;
  const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (res.ec != std::errc{} || res.ptr != raw.data() + raw.size())
    throw ConfigError(key, "expected a number, got '" + raw + "'");
  return v;
}

long long FlatConfig::get_int(const std::string& key, long long fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& raw = it->second.raw;
  long long v = 0;
  const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (res.ec != std::errc{} || res.ptr != raw.data() + raw.size())
    throw ConfigError(key, "expected an integer, got '" + raw + "'");
  return v;
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.raw == "true") return true;
  if (it->second.raw == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + it->second.raw + "'");
}

std::vector<double> FlatConfig::get_double_list(
    const std::string& key, std::vector<double> fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& raw = it->second.raw;
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
    throw ConfigError(key, "expected a [..] list, got '" + raw + "'");
  std::vector<double> out;
  std::string inner = raw.substr(1, raw.size() - 2);
  std::istringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError(key, "empty list entry");
    item = item.substr(b, e - b + 1);
    double v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw ConfigError(key, "list entry '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

void FlatConfig::check_all_consumed() const {
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key))
      throw ConfigError(key, "unknown key (line " + std::to_string(value.line) + ")");
}

}  // namespace antex
