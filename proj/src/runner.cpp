#include "dqa/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "dqa/experiments.hpp"
#include "dqa/parallel.hpp"

namespace dqa {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::set<std::string> kOptimizerKeys{"grad_tol", "max_iters"};

std::set<std::string> with_optimizer_keys(std::set<std::string> keys) {
  keys.insert(kOptimizerKeys.begin(), kOptimizerKeys.end());
  return keys;
}

OptimOptions optimizer_options(const RunConfig& config) {
  OptimOptions opts;
  opts.grad_tol = config.get_double("grad_tol", opts.grad_tol);
  opts.max_iters = static_cast<int>(config.get_int("max_iters", opts.max_iters));
  try {
    opts.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return opts;
}

std::size_t positive(const std::string& key, long v) {
  if (v <= 0) throw ConfigError("parameter '" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> depth_list(const RunConfig& config, const std::string& key, const std::vector<long>& fallback) {
  std::vector<std::size_t> out;
  for (long v : config.get_int_list(key, fallback)) out.push_back(positive(key, v));
  return out;
}

std::pair<double, double> window_param(const RunConfig& config, const std::string& key, std::pair<double, double> d) {
  const auto w = config.get_double_list(key, {d.first, d.second});
  if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError("parameter '" + key + "' must be 'lo,hi' with lo < hi");
  return {w[0], w[1]};
}

Json metadata(const RunConfig& config) {
  Json meta;
  meta["experiment"] = experiment_name(config.experiment);
  meta["config_hash"] = config.hash();
  meta["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  Json params = Json::object();
  for (const auto& [k, v] : config.params) params[k] = v;
  meta["params"] = params;
  if (config.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["timestamp"] = buf;
  }
  return meta;
}

Json angles_json(const QaoaAngles& a) { return Json{{"gammas", a.gammas}, {"betas", a.betas}}; }

Json result_json(const OptimResult& r) {
  Json j;
  j["p"] = r.depth();
  j["gammas"] = r.angles.gammas;
  j["betas"] = r.angles.betas;
  j["eps_res"] = r.eps_res;
  j["grad_norm"] = r.grad_norm;
  j["n_iterations"] = r.n_iterations;
  j["n_evaluations"] = r.n_evaluations;
  j["converged"] = r.converged;
  return j;
}

Json fit_json(const ScalingFit& f) {
  Json j;
  j["exponent"] = f.exponent;
  j["prefactor"] = f.prefactor;
  j["r_squared"] = f.r_squared;
  j["window"] = {f.fit_window.first, f.fit_window.second};
  j["inverse_a"] = f.inverse_a;
  j["inverse_b"] = f.inverse_b;
  j["inverse_r_squared"] = f.inverse_r_squared;
  j["n_points"] = f.n_points;
  return j;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::string& hash, const std::vector<std::string>& columns)
      : out_(path, std::ios::binary), hash_(hash) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "config_hash";
    for (const auto& c : columns) out_ << ',' << c;
    out_ << '\n';
  }

  Csv& row() {
    out_ << hash_;
    return *this;
  }
  Csv& operator<<(double v) {
    out_ << ',' << format_double(v);
    return *this;
  }
  Csv& operator<<(std::size_t v) {
    out_ << ',' << v;
    return *this;
  }
  Csv& operator<<(int v) {
    out_ << ',' << v;
    return *this;
  }
  Csv& operator<<(long v) {
    out_ << ',' << v;
    return *this;
  }
  Csv& operator<<(const std::string& v) {
    out_ << ',' << v;
    return *this;
  }
  void end() { out_ << '\n'; }

 private:
  std::ofstream out_;
  std::string hash_;
};

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

RunOutcome run_bound_scan(const RunConfig& config, std::ostream& log) {
  config.check_keys(with_optimizer_keys({"n_sites", "p", "sat_tol", "zero_tol"}));
  std::vector<int> n_sites;
  for (long n : config.get_int_list("n_sites", {50})) n_sites.push_back(static_cast<int>(n));
  const auto depths = depth_list(config, "p", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16});
  const auto rows = bound_scan(n_sites, depths, config.get_double("sat_tol", 1e-6), config.get_double("zero_tol", 1e-8),
                               optimizer_options(config), config.threads);

  RunOutcome outcome;
  const fs::path csv_path = config.out_dir / "bound_scan.csv";
  Csv csv(csv_path, config.hash(), {"n_sites", "p", "eps_res", "bound", "saturated", "converged"});
  int n_saturated = 0;
  for (const auto& r : rows) {
    csv.row() << r.n_sites << r.depth << r.eps_res << r.bound << int(r.saturated) << int(r.converged);
    csv.end();
    n_saturated += r.saturated;
  }
  outcome.files.push_back(csv_path);
  log << "bound-scan: " << n_saturated << "/" << rows.size() << " rows saturated\n";
  return outcome;
}

RunOutcome run_regular(const RunConfig& config, std::ostream& log) {
  config.check_keys(with_optimizer_keys({"n_sites", "p_target", "random_depth", "random_starts"}));
  const ChainSpec chain{static_cast<int>(config.get_int("n_sites", 1024)), 0.0, Boundary::Periodic};
  const std::size_t p_target = positive("p_target", config.get_int("p_target", 256));
  const std::size_t random_depth = positive("random_depth", config.get_int("random_depth", 32));
  const int random_starts = static_cast<int>(config.get_int("random_starts", 10));
  if (random_starts < 0) throw ConfigError("parameter 'random_starts' must be >= 0");
  const std::uint64_t seed = random_starts > 0 ? config.require_seed() : config.seed.value_or(0);

  const RegularStudy study =
      regular_study(chain, p_target, random_depth, random_starts, seed, optimizer_options(config), config.threads);

  RunOutcome outcome;
  Json levels = Json::array();
  for (const auto& level : study.ladder) {
    Json j = result_json(level.result);
    j["tau"] = level.tau;
    j["intermediate"] = level.intermediate;
    j["degraded"] = level.degraded;
    j["warning"] = level.warning;
    levels.push_back(j);
    if (level.degraded) log << "warning: " << level.warning << '\n';
  }
  Json cost;
  cost["random_depth"] = study.random_depth;
  cost["random_starts"] = random_starts;
  cost["random_mean_iterations"] = study.random_mean_iterations;
  cost["ladder_cumulative_iterations"] = study.ladder_iterations_to_random_depth;
  cost["ladder_iteration_exponent"] = study.ladder_iteration_exponent;
  Json runs = Json::array();
  for (const auto& r : study.random_runs) runs.push_back({{"n_iterations", r.n_iterations}, {"eps_res", r.eps_res}});
  cost["random_runs"] = runs;

  Json doc;
  doc["meta"] = metadata(config);
  doc["levels"] = levels;
  doc["cost_comparison"] = cost;
  const fs::path json_path = config.out_dir / "regular.json";
  write_json(json_path, doc);
  outcome.files.push_back(json_path);

  const fs::path sched_path = config.out_dir / "regular_schedule.csv";
  {
    Csv csv(sched_path, config.hash(), {"p", "m", "gamma", "beta", "s", "t"});
    for (const auto& level : study.ladder) {
      const auto& a = level.result.angles;
      const auto s = schedule_values(a, 0.0);
      double elapsed = 0.0;
      for (std::size_t m = 0; m < a.depth(); ++m) {
        const double dt = a.betas[m] + a.gammas[m];
        csv.row() << a.depth() << m + 1 << a.gammas[m] << a.betas[m] << s[m] << elapsed + 0.5 * dt;
        csv.end();
        elapsed += dt;
      }
    }
  }
  outcome.files.push_back(sched_path);

  const fs::path cost_path = config.out_dir / "regular_cost.csv";
  {
    Csv csv(cost_path, config.hash(), {"p", "n_iterations", "t_cc", "cumulative_iterations", "cumulative_t_cc"});
    for (const auto& r : study.costs) {
      csv.row() << r.depth << r.n_iterations << r.t_cc << r.cumulative_iterations << r.cumulative_t_cc;
      csv.end();
    }
  }
  outcome.files.push_back(cost_path);

  const auto& top = study.ladder.back();
  log << "regular: P=" << top.result.depth() << " tau=" << format_double(top.tau)
      << " eps_res=" << format_double(top.result.eps_res) << '\n';
  return outcome;
}

RunOutcome run_degeneracy(const RunConfig& config, std::ostream& log) {
  config.check_keys(with_optimizer_keys({"n_sites", "p", "n_starts", "cluster_tol"}));
  const std::uint64_t seed = config.require_seed();
  const ChainSpec chain{static_cast<int>(config.get_int("n_sites", 50)), 0.0, Boundary::Periodic};
  const auto depths = depth_list(config, "p", {1, 2, 3});
  const auto starts = config.get_int_list("n_starts", {200, 500, 2000});
  if (starts.size() != depths.size()) throw ConfigError("'n_starts' needs one entry per depth in 'p'");
  for (std::size_t p : depths) {
    if (p > 6) throw ConfigError("degeneracy: depths above 6 are not supported");
  }
  const double tol = config.get_double("cluster_tol", 1e-4);
  const OptimOptions opts = optimizer_options(config);

  Json results = Json::array();
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const MinimaSet set =
        enumerate_minima(depths[i], chain, static_cast<int>(positive("n_starts", starts[i])), seed, tol, opts,
                         config.threads);
    Json minima = Json::array();
    for (std::size_t j = 0; j < set.minima.size(); ++j) {
      Json m = angles_json(set.minima[j].angles);
      m["eps_res"] = set.minima[j].eps_res;
      m["multiplicity"] = set.multiplicity[j];
      minima.push_back(m);
    }
    Json r;
    r["P"] = set.depth;
    r["n_distinct"] = set.minima.size();
    r["expected"] = std::size_t{1} << set.depth;
    r["n_starts"] = set.n_starts;
    r["n_converged"] = set.n_converged;
    r["n_dropped_unconverged"] = set.n_dropped_unconverged;
    r["n_dropped_local"] = set.n_dropped_local;
    r["minima"] = minima;
    results.push_back(r);
    log << "degeneracy: P=" << set.depth << " distinct=" << set.minima.size() << " expected="
        << (std::size_t{1} << set.depth) << '\n';
  }
  Json doc;
  doc["meta"] = metadata(config);
  doc["results"] = results;
  RunOutcome outcome;
  const fs::path path = config.out_dir / "degeneracy.json";
  write_json(path, doc);
  outcome.files.push_back(path);
  return outcome;
}

RunOutcome run_compare(const RunConfig& config, std::ostream& log) {
  config.check_keys(with_optimizer_keys({"n_sites", "tau", "dt", "gap_floors", "p_max"}));
  CompareSettings settings;
  settings.n_sites = static_cast<int>(config.get_int("n_sites", settings.n_sites));
  settings.taus = config.get_double_list("tau", settings.taus);
  settings.dt = config.get_double("dt", settings.dt);
  settings.gap_floors = config.get_double_list("gap_floors", default_gap_floors());
  settings.p_max = positive("p_max", config.get_int("p_max", static_cast<long>(settings.p_max)));
  settings.opts = optimizer_options(config);
  settings.threads = config.threads;
  const ScheduleComparison cmp = compare_schedules(settings);

  RunOutcome outcome;
  const fs::path csv_path = config.out_dir / "compare_schedules.csv";
  {
    Csv csv(csv_path, config.hash(), {"schedule", "tau", "p", "dt", "gap_floor", "eps_res"});
    for (const auto& r : cmp.rows) {
      csv.row() << r.schedule << r.tau << r.depth << r.dt << r.gap_floor << r.eps_res;
      csv.end();
    }
  }
  outcome.files.push_back(csv_path);

  Json fits;
  for (const auto& [name, fit] : cmp.fits) fits[name] = fit_json(fit);
  Json doc;
  doc["meta"] = metadata(config);
  doc["fits"] = fits;
  doc["optimal_upper_half"] = fit_json(cmp.optimal_upper);
  doc["rc_beats_linear_from_tau_32"] = cmp.rc_beats_linear;
  const fs::path json_path = config.out_dir / "compare_fits.json";
  write_json(json_path, doc);
  outcome.files.push_back(json_path);

  for (const auto& [name, fit] : cmp.fits) log << "compare-schedules: " << name << " slope " << format_double(fit.exponent) << '\n';
  return outcome;
}

RunOutcome run_collapse(const RunConfig& config, std::ostream& log) {
  config.check_keys(with_optimizer_keys({"n_sites", "p_target", "window", "control_depth", "control_starts"}));
  const ChainSpec chain{static_cast<int>(config.get_int("n_sites", 1024)), 0.0, Boundary::Periodic};
  const std::size_t p_target = positive("p_target", config.get_int("p_target", 64));
  const auto window = window_param(config, "window", {0.2, 0.8});
  const long control_depth = config.get_int("control_depth", 8);
  const long control_starts = config.get_int("control_starts", 50);
  if (control_depth < 0 || control_starts < 0) throw ConfigError("control parameters must be >= 0");
  const bool control = control_depth > 0 && control_starts > 0;
  const std::uint64_t seed = control ? config.require_seed() : config.seed.value_or(0);

  const CollapseStudy study = collapse_study(chain, p_target, window, control ? control_depth : 0,
                                             static_cast<int>(control_starts), seed, optimizer_options(config));

  RunOutcome outcome;
  const fs::path csv_path = config.out_dir / "collapse.csv";
  {
    Csv csv(csv_path, config.hash(), {"curve", "p", "tau", "m", "x", "y"});
    auto emit = [&](const std::string& name, const CollapseCurve& c) {
      for (std::size_t m = 0; m < c.x.size(); ++m) {
        csv.row() << name << c.depth << c.tau << m + 1 << c.x[m] << c.y[m];
        csv.end();
      }
    };
    for (const auto& c : study.curves) emit("regular", c);
    if (!study.irregular.x.empty()) emit("irregular", study.irregular);
  }
  outcome.files.push_back(csv_path);

  Json pairs = Json::array();
  for (const auto& p : study.pairs) {
    pairs.push_back({{"p_a", p.depth_a}, {"p_b", p.depth_b}, {"distance", p.distance}, {"window_distance", p.window_distance}});
    log << "collapse: P=" << p.depth_a << " vs P=" << p.depth_b << " distance " << format_double(p.distance)
        << " (window " << format_double(p.window_distance) << ")\n";
  }
  Json doc;
  doc["meta"] = metadata(config);
  doc["window"] = {study.window.first, study.window.second};
  doc["all_regular"] = study.all_regular;
  doc["pairs"] = pairs;
  if (!study.irregular.x.empty()) {
    doc["irregular_control"] = {{"p", study.irregular.depth}, {"distance", study.irregular_distance}};
  } else {
    doc["irregular_control"] = nullptr;
  }
  const fs::path json_path = config.out_dir / "collapse.json";
  write_json(json_path, doc);
  outcome.files.push_back(json_path);
  return outcome;
}

RunOutcome run_field_scan(const RunConfig& config, std::ostream& log) {
  config.check_keys(with_optimizer_keys({"h", "p", "eval_factor"}));
  const auto fields = config.get_double_list("h", {0.0, 0.25, 0.5});
  for (double h : fields) {
    if (!(h >= 0.0 && h < 1.0)) throw ConfigError("field-scan: every h must lie in [0, 1)");
  }
  const std::size_t p = positive("p", config.get_int("p", 128));
  if (p < 4) throw ConfigError("field-scan: p must be >= 4");
  const int eval_factor = static_cast<int>(positive("eval_factor", config.get_int("eval_factor", 4)));
  const OptimOptions opts = optimizer_options(config);

  std::vector<FieldProfile> profiles(fields.size());
  parallel_for(fields.size(), config.threads,
               [&](std::size_t i) { profiles[i] = field_profile(fields[i], p, eval_factor, opts); });

  RunOutcome outcome;
  const fs::path csv_path = config.out_dir / "field_scan.csv";
  {
    Csv csv(csv_path, config.hash(), {"h", "m", "s"});
    for (const auto& prof : profiles) {
      for (std::size_t m = 0; m < prof.s.size(); ++m) {
        csv.row() << prof.field << m + 1 << prof.s[m];
        csv.end();
      }
    }
  }
  outcome.files.push_back(csv_path);

  Json list = Json::array();
  for (const auto& prof : profiles) {
    Json j;
    j["h"] = prof.field;
    j["p"] = prof.depth;
    j["n_eval"] = prof.eval_factor * static_cast<int>(prof.depth);
    j["flat_m"] = prof.flat_m;
    j["flat_s"] = prof.flat_s;
    j["s_critical"] = prof.s_critical;
    j["regular"] = prof.regular;
    j["converged"] = prof.converged;
    j["eps_res"] = prof.eps_res;
    list.push_back(j);
    log << "field-scan: h=" << format_double(prof.field) << " flattest s=" << format_double(prof.flat_s)
        << " (1/(2-h)=" << format_double(prof.s_critical) << ")\n";
  }
  Json doc;
  doc["meta"] = metadata(config);
  doc["energy_chain"] = "periodic, n_eval = eval_factor * P sites at every ladder level";
  doc["profiles"] = list;
  const fs::path json_path = config.out_dir / "field_scan.json";
  write_json(json_path, doc);
  outcome.files.push_back(json_path);
  return outcome;
}

RunOutcome run_validate(const RunConfig& config, std::ostream& log) {
  config.check_keys({"oracle_sets", "gradient_sets", "negative_control"});
  ValidateSettings settings;
  settings.seed = config.seed.value_or(1);
  settings.oracle_sets = static_cast<int>(positive("oracle_sets", config.get_int("oracle_sets", settings.oracle_sets)));
  settings.gradient_sets =
      static_cast<int>(positive("gradient_sets", config.get_int("gradient_sets", settings.gradient_sets)));
  const bool negative = config.get_int("negative_control", 0) != 0;
  const ValidationReport report =
      negative ? run_validation(settings, propagate_mode_flipped) : run_validation(settings);

  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"worst", c.worst}, {"tolerance", c.tolerance}, {"n_cases", c.n_cases}});
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " worst=" << format_double(c.worst)
        << " tol=" << format_double(c.tolerance) << " cases=" << c.n_cases << '\n';
  }
  Json doc;
  doc["meta"] = metadata(config);
  doc["seed_used"] = settings.seed;
  doc["passed"] = report.passed();
  doc["checks"] = checks;

  RunOutcome outcome;
  const fs::path path = config.out_dir / "validate.json";
  write_json(path, doc);
  outcome.files.push_back(path);
  outcome.exit_code = report.passed() ? kExitOk : kExitValidationFailure;
  return outcome;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunOutcome run_experiment(const RunConfig& config, std::ostream& log) {
  if (config.threads < 1) throw ConfigError("threads must be >= 1");
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + config.out_dir.string() + ": " + ec.message());

  try {
    switch (config.experiment) {
      case Experiment::BoundScan: return run_bound_scan(config, log);
      case Experiment::Regular: return run_regular(config, log);
      case Experiment::Degeneracy: return run_degeneracy(config, log);
      case Experiment::CompareSchedules: return run_compare(config, log);
      case Experiment::Collapse: return run_collapse(config, log);
      case Experiment::FieldScan: return run_field_scan(config, log);
      case Experiment::Validate: return run_validate(config, log);
    }
  } catch (const std::invalid_argument& e) {
    // Library preconditions violated by configured values.
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown experiment");
}

}  // namespace dqa
