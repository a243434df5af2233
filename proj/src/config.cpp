#include "dqa/config.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dqa {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 7> kNames{{
    {Experiment::BoundScan, "bound-scan"},
    {Experiment::Regular, "regular"},
    {Experiment::Degeneracy, "degeneracy"},
    {Experiment::CompareSchedules, "compare-schedules"},
    {Experiment::Collapse, "collapse"},
    {Experiment::FieldScan, "field-scan"},
    {Experiment::Validate, "validate"},
}};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long to_long(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    throw ConfigError("parameter '" + key + "': not an integer: '" + text + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    throw ConfigError("parameter '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_seed(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  if (!text.empty() && text[0] == '-') throw ConfigError("seed must be non-negative");
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') throw ConfigError("seed: not an integer: '" + text + "'");
  return v;
}

}  // namespace

Experiment parse_experiment(const std::string& name) {
  for (const auto& [e, n] : kNames) {
    if (name == n) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(Experiment e) {
  for (const auto& [x, n] : kNames) {
    if (x == e) return n;
  }
  return "unknown";
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash() const {
  std::string canon = "experiment=" + experiment_name(experiment) + "\n";
  if (seed) canon += "seed=" + std::to_string(*seed) + "\n";
  for (const auto& [k, v] : params) canon += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

long RunConfig::get_int(const std::string& key, long fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : to_long(key, it->second);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : to_double(key, it->second);
}

std::vector<long> RunConfig::get_int_list(const std::string& key, const std::vector<long>& fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<long> out;
  for (const auto& item : split(it->second, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_long(key, item));
      continue;
    }
    const long lo = to_long(key, trim(item.substr(0, dots)));
    const long hi = to_long(key, trim(item.substr(dots + 2)));
    if (hi < lo) throw ConfigError("parameter '" + key + "': empty range '" + item + "'");
    for (long v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError("parameter '" + key + "': empty list");
  return out;
}

std::vector<double> RunConfig::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split(it->second, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError("parameter '" + key + "': empty list");
  return out;
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ConfigError("experiment '" + experiment_name(experiment) + "' needs a seed");
  return *seed;
}

void RunConfig::check_keys(const std::set<std::string>& allowed) const {
  for (const auto& [k, v] : params) {
    if (!allowed.count(k)) {
      throw ConfigError("parameter '" + k + "' is not used by experiment '" + experiment_name(experiment) + "'");
    }
  }
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::string& experiment_override) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  if (file) {
    try {
      pt::read_ini(file->string(), tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(std::string("cannot read config: ") + e.what());
    }
  }

  std::map<std::string, std::string> top;
  for (const auto& [key, node] : tree) {
    const bool is_section = std::any_of(kNames.begin(), kNames.end(), [&](const auto& e) { return key == e.second; });
    if (node.empty() && !is_section) top[key] = trim(node.data());
  }

  RunConfig config;
  std::string name = experiment_override;
  if (name.empty()) {
    const auto it = top.find("experiment");
    if (it == top.end()) throw ConfigError("no experiment given");
    name = it->second;
  }
  config.experiment = parse_experiment(name);
  top.erase("experiment");

  if (const auto section = tree.get_child_optional(name)) {
    for (const auto& [key, node] : *section) top[key] = trim(node.data());
  }
  // Other experiments' sections are ignored.
  for (auto& [key, value] : top) {
    if (key == "seed") {
      config.seed = parse_seed(value);
    } else {
      config.params[key] = value;
    }
  }
  return config;
}

void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (key == "seed") {
      config.seed = parse_seed(value);
    } else {
      config.params[key] = value;
    }
  }
}

}  // namespace dqa
