#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "antex/core.hpp"
#include "antex/solver.hpp"

namespace antex {

/// Failure to read or write a file that is not a schema problem.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest representation that round-trips exactly.
std::string format_double(double v);
std::string format_complex(Complex v);  // "re+imi" / "re-imi"

// JSON pattern files: {"kind": ..., "points": [{"az","el"}|{"pos"}...],
// "values": [[re,im]...] (complex) or [v...] (magnitude kinds)}.
SampledPattern read_pattern_json(const std::filesystem::path& path);
void write_pattern_json(const std::filesystem::path& path,
                        const SampledPattern& pattern);

/// Reads {"points": [...]} (a pattern file also qualifies).
std::vector<SamplePoint> read_points_json(const std::filesystem::path& path);

void write_result_json(const std::filesystem::path& path,
                       const ExtrapolationResult& result);

/// Writes text atomically enough for our purposes; on failure drops an
/// INCOMPLETE marker next to the target and throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& body);

/// Flat key-value config file ("key.sub = value" lines, # comments;
/// values: number, "string", true/false, [n1, n2, ...]).
class FlatConfig {
 public:
  static FlatConfig parse_file(const std::filesystem::path& path);
  static FlatConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const;

  /// Every key must have been consumed by a getter; unknown keys raise
  /// ConfigError so typos never silently fall back to defaults.
  void check_all_consumed() const;

 private:
  struct Value {
    std::string raw;
    int line = 0;
  };
  std::map<std::string, Value> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace antex
