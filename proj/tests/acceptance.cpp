// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "dqa/ed_oracle.hpp"
#include "dqa/experiments.hpp"
#include "dqa/gradient.hpp"
#include "dqa/runner.hpp"

using namespace dqa;
namespace fs = std::filesystem;

namespace {

int g_threads = 1;
std::map<int, std::pair<bool, std::string>> g_results;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  const std::string line = (pass ? "PASS " : "FAIL ") + std::string(id < 10 ? " " : "") + std::to_string(id) + " " +
                           name + ": " + detail;
  std::fprintf(stderr, "... criterion %d evaluated\n", id);
  g_results[id] = {pass, line};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void bound_saturation() {
  Stopwatch clock;
  std::vector<std::size_t> depths;
  for (std::size_t p = 1; p <= 16; ++p) depths.push_back(p);
  const auto rows = bound_scan({50}, depths, 1e-6, 1e-8);
  double worst = 0.0;
  bool ok = rows.size() == 16;
  for (const auto& r : rows) {
    worst = std::max(worst, std::abs(r.eps_res - r.bound));
    ok = ok && r.saturated;
  }
  const double t = clock.seconds();
  report(1, "bound saturation N=50 P=1..16", ok && t < 60.0,
         "max |eps - 1/(2P+2)| = " + num(worst) + " (tol 1e-6), " + num(t) + " s (limit 60)");
}

void zero_residual() {
  const auto rows = bound_scan({8}, {1, 2, 3, 4, 5}, 1e-6, 1e-8);
  const double e4 = rows.at(3).eps_res;
  const double e5 = rows.at(4).eps_res;
  report(2, "zero residual N=8 P=4,5", e4 < 1e-8 && e5 < 1e-8, "eps(4) = " + num(e4) + ", eps(5) = " + num(e5) + " (tol 1e-8)");
}

void degeneracy() {
  Stopwatch clock;
  const ChainSpec chain{50, 0.0, Boundary::Periodic};
  const int starts[] = {200, 500, 2000};
  bool ok = true;
  std::string detail;
  for (std::size_t p = 1; p <= 3; ++p) {
    const MinimaSet set = enumerate_minima(p, chain, starts[p - 1], 7, 1e-4, {}, g_threads);
    double worst = 0.0;
    for (const auto& m : set.minima) worst = std::max(worst, std::abs(m.eps_res - variational_bound(p)));
    ok = ok && set.minima.size() == (std::size_t{1} << p) && worst < 1e-6;
    detail += "P=" + std::to_string(p) + ": " + std::to_string(set.minima.size()) + "/" +
              std::to_string(1 << p) + " (dev " + num(worst) + "); ";
  }
  const double t = clock.seconds();
  report(3, "2^P degenerate minima", ok && t < 300.0, detail + num(t) + " s (limit 300)");
}

void gradient_check() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t p = 1 + static_cast<std::size_t>(i % 16);
    const ChainSpec chain{64, i % 2 == 0 ? 0.0 : 0.5, Boundary::Periodic};
    QaoaAngles a = QaoaAngles::zeros(p);
    for (std::size_t m = 0; m < p; ++m) {
      a.gammas[m] = u(rng);
      a.betas[m] = u(rng);
    }
    worst = std::max(worst, relative_gradient_error(value_and_gradient(a, chain).gradient.flatten(),
                                                    finite_diff_gradient(a, chain, 1e-5).flatten()));
  }
  report(5, "gradient vs finite differences", worst < 1e-6, "max relative error " + num(worst) + " (tol 1e-6)");
}

void oracle_equivalence() {
  ValidateSettings s;
  s.seed = 31415;
  s.gradient_sets = 1;
  const ValidationReport r = run_validation(s);
  const CheckResult& c = r.checks.at(0);
  report(6, "fermion vs state-vector oracle", c.passed,
         "max |diff| = " + num(c.worst) + " over " + std::to_string(c.n_cases) + " cases (tol 1e-10)");
}

void schedule_scaling() {
  Stopwatch clock;
  CompareSettings s;
  s.gap_floors = default_gap_floors();
  s.threads = g_threads;
  const ScheduleComparison cmp = compare_schedules(s);
  const double t = clock.seconds();

  const double qa = cmp.fits.at("linear-qa").exponent;
  const double dqa = cmp.fits.at("linear-dqa").exponent;
  report(7, "Kibble-Zurek exponent", std::abs(qa + 0.5) <= 0.05 && std::abs(dqa + 0.5) <= 0.05 && t < 600.0,
         "linear-QA " + num(qa) + ", linear-dQA " + num(dqa) + " (target -0.5 +- 0.05); " + num(t) +
             " s for the whole comparison (limit 600)");

  const double rc = cmp.fits.at("rc-qa").exponent;
  const double rcd = cmp.fits.at("rc-dqa").exponent;
  const bool in_window = std::abs(rc + 0.75) <= 0.10;
  report(8, "Roland-Cerf exponent", in_window || cmp.rc_beats_linear,
         "RC-QA " + num(rc) + ", RC-dQA " + num(rcd) + " (target -0.75 +- 0.10" +
             (in_window ? "" : ", missed: soft criterion") + "); beats linear at tau >= 32: " +
             (cmp.rc_beats_linear ? "yes" : "no"));

  const ScalingFit& all = cmp.fits.at("optimal-dqa");
  const ScalingFit& upper = cmp.optimal_upper;
  report(9, "optimal dQA scaling", all.inverse_r_squared > 0.999 && std::abs(upper.exponent + 1.0) <= 0.05,
         "1/(a tau + b): a = " + num(all.inverse_a) + ", b = " + num(all.inverse_b) + ", r^2 = " +
             num(all.inverse_r_squared) + " (> 0.999); upper-half slope " + num(upper.exponent) + " over tau in [" +
             num(upper.fit_window.first) + ", " + num(upper.fit_window.second) + "] (target -1 +- 0.05)");
}

void regular_structure() {
  const ChainSpec chain{1024, 0.0, Boundary::Periodic};
  const CollapseStudy study = collapse_study(chain, 64, {0.2, 0.8}, 8, 50, 7);

  double tau8 = 0.0;
  for (const auto& level : study.ladder) {
    if (level.result.depth() == 8) tau8 = level.tau;
  }
  report(4, "P=8 regular duration", std::abs(tau8 - 9.76) <= 0.05, "tau = " + num(tau8) + " (target 9.76 +- 0.05)");

  double d816 = -1.0, w816 = -1.0;
  for (const auto& p : study.pairs) {
    if (p.depth_a == 8 && p.depth_b == 16) {
      d816 = p.distance;
      w816 = p.window_distance;
    }
  }
  std::string depths;
  for (const auto& level : study.ladder) depths += std::to_string(level.result.depth()) + " ";
  report(10, "regular solution structure", study.all_regular && d816 >= 0.0 && d816 < 0.1,
         std::string("monotone s_m at P = ") + depths + (study.all_regular ? "(all)" : "(NOT all)") +
             "; P8 vs P16 collapse distance " + num(d816) + " (tol 0.1); restricted to t/tau in [0.2, 0.8]: " +
             num(w816) + "; irregular control distance " + num(study.irregular_distance));
}

void cost_ordering() {
  const ChainSpec chain{1024, 0.0, Boundary::Periodic};
  const RegularStudy study = regular_study(chain, 32, 32, 10, 7, {}, g_threads);
  const double ratio = study.random_mean_iterations / static_cast<double>(study.ladder_iterations_to_random_depth);
  report(11, "cost ordering at P=32", ratio >= 4.0,
         "ladder cumulative " + std::to_string(study.ladder_iterations_to_random_depth) + " vs random-start mean " +
             num(study.random_mean_iterations) + " iterations, ratio " + num(ratio) +
             " (>= 4); ladder per-level exponent " + num(study.ladder_iteration_exponent));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism() {
  struct Case {
    Experiment e;
    std::map<std::string, std::string> params;
    std::optional<std::uint64_t> seed;
  };
  const std::vector<Case> cases{
      {Experiment::BoundScan, {{"n_sites", "50,8"}, {"p", "1..8"}}, std::nullopt},
      {Experiment::Regular, {{"n_sites", "256"}, {"p_target", "16"}, {"random_depth", "8"}, {"random_starts", "4"}}, 5},
      {Experiment::Degeneracy, {{"p", "1,2"}, {"n_starts", "50,100"}}, 7},
      {Experiment::CompareSchedules, {{"n_sites", "128"}, {"tau", "8,16,32"}, {"gap_floors", "0.1,0.3,1"}, {"p_max", "16"}},
       std::nullopt},
      {Experiment::Collapse, {{"n_sites", "256"}, {"p_target", "16"}, {"control_starts", "20"}}, 7},
      {Experiment::FieldScan, {{"h", "0,0.25,0.5"}, {"p", "16"}}, std::nullopt},
      {Experiment::Validate, {{"oracle_sets", "5"}, {"gradient_sets", "20"}}, 1},
  };
  const fs::path root = fs::temp_directory_path() / "dqa_acceptance_determinism";
  fs::remove_all(root);
  int identical = 0, total = 0;
  std::string mismatches;
  for (const auto& c : cases) {
    std::vector<RunOutcome> runs;
    for (int rep = 0; rep < 2; ++rep) {
      RunConfig config;
      config.experiment = c.e;
      config.params = c.params;
      config.seed = c.seed;
      config.threads = rep == 0 ? 1 : std::max(2, g_threads);
      config.out_dir = root / (experiment_name(c.e) + "_" + std::to_string(rep));
      std::ostringstream log;
      runs.push_back(run_experiment(config, log));
    }
    for (std::size_t i = 0; i < runs[0].files.size(); ++i) {
      ++total;
      if (i < runs[1].files.size() && slurp(runs[0].files[i]) == slurp(runs[1].files[i])) {
        ++identical;
      } else {
        mismatches += " " + runs[0].files[i].filename().string();
      }
    }
  }
  fs::remove_all(root);
  report(12, "byte-identical reruns", identical == total && total > 0,
         std::to_string(identical) + "/" + std::to_string(total) + " files identical across reruns" +
             (mismatches.empty() ? "" : "; differing:" + mismatches));
}

}  // namespace

int main() {
  g_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  // Each entry covers the listed criterion ids.
  const std::vector<std::pair<std::vector<int>, void (*)()>> suites{
      {{1}, bound_saturation}, {{2}, zero_residual},       {{3}, degeneracy},
      {{4, 10}, regular_structure}, {{5}, gradient_check}, {{6}, oracle_equivalence},
      {{7, 8, 9}, schedule_scaling}, {{11}, cost_ordering}, {{12}, determinism},
  };
  for (const auto& [ids, fn] : suites) {
    try {
      fn();
    } catch (const std::exception& e) {
      for (int id : ids) report(id, "criterion", false, std::string("exception: ") + e.what());
    }
  }
  int failures = 0;
  for (const auto& [id, result] : g_results) {
    std::printf("%s\n", result.second.c_str());
    if (!result.first) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, g_results.size());
  return failures == 0 ? 0 : 1;
}
