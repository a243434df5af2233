#pragma once

// Run configuration: an INI file plus command-line overrides, flattened into
// a key/value map. Top-level keys apply to every experiment; keys of the
// section named after the experiment override them.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqa {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { BoundScan, Regular, Degeneracy, CompareSchedules, Collapse, FieldScan, Validate };

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

struct RunConfig {
  Experiment experiment = Experiment::Validate;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
  int threads = 1;
  /// Adds the wall-clock time to JSON metadata; off by default so that
  /// reruns are byte-identical.
  bool timestamp = false;

  /// FNV-1a over the normalized "key=value" lines of experiment, seed and
  /// params. Output directory and thread count do not enter.
  std::string hash() const;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key, long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  /// Comma-separated values; "a..b" expands to every integer in between.
  std::vector<long> get_int_list(const std::string& key, const std::vector<long>& fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;
  std::uint64_t require_seed() const;

  /// Throws ConfigError on keys that the experiment does not read.
  void check_keys(const std::set<std::string>& allowed) const;
};

/// Reads the file (may be empty) for the given experiment. `experiment` at
/// top level is used when `experiment_override` is empty.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::string& experiment_override);

/// Applies "key=value" overrides.
void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides);

std::uint64_t fnv1a(const std::string& data);

}  // namespace dqa
