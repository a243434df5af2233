#pragma once

// Numerical studies behind the command-line experiments. Each returns plain
// data; writing files is left to the runner.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dqa/dynamics.hpp"
#include "dqa/optimizer.hpp"

namespace dqa {

struct BoundScanRow {
  int n_sites = 0;
  std::size_t depth = 0;
  double eps_res = 0.0;
  /// 1/(2P+2) when 2P < N, otherwise 0.
  double bound = 0.0;
  bool saturated = false;
  bool converged = false;
};

/// One incremental ladder over `depths` per chain size. For 2P < N a row is
/// saturated when |eps - bound| < sat_tol, otherwise when eps < zero_tol.
std::vector<BoundScanRow> bound_scan(const std::vector<int>& n_sites, const std::vector<std::size_t>& depths,
                                     double sat_tol, double zero_tol, const OptimOptions& opts = {}, int threads = 1);

struct RegularStudy {
  std::vector<LadderLevel> ladder;
  std::vector<CostRow> costs;
  std::size_t random_depth = 0;
  std::vector<OptimResult> random_runs;
  double random_mean_iterations = 0.0;
  /// Cumulative ladder iterations up to random_depth.
  long ladder_iterations_to_random_depth = 0;
  /// Log-log slope of per-level iterations against P (informational).
  double ladder_iteration_exponent = 0.0;
};

/// Doubling ladder to p_target, plus random_starts random-start runs at
/// random_depth (seed + i for run i) for the cost comparison.
RegularStudy regular_study(const ChainSpec& chain, std::size_t p_target, std::size_t random_depth, int random_starts,
                           std::uint64_t seed, const OptimOptions& opts = {}, int threads = 1);

struct ScheduleRow {
  std::string schedule;
  double tau = 0.0;
  /// Number of digital steps; 0 for continuous evolution.
  std::size_t depth = 0;
  /// Digital step length; 0 for continuous evolution.
  double dt = 0.0;
  /// Roland-Cerf gap floor; 0 for other schedules.
  double gap_floor = 0.0;
  double eps_res = 0.0;
};

struct CompareSettings {
  int n_sites = 1024;
  std::vector<double> taus{8, 16, 32, 64, 128, 256, 512};
  double dt = 1.0;
  std::vector<double> gap_floors;
  std::size_t p_max = 256;
  OptimOptions opts;
  int threads = 1;
};

struct ScheduleComparison {
  /// Sorted by schedule name, then tau.
  std::vector<ScheduleRow> rows;
  /// Empty (n_points = 0) when fewer than 3 tau values are available.
  std::map<std::string, ScalingFit> fits;
  /// Log-log fit of the optimal points over the upper half of their log-tau range.
  ScalingFit optimal_upper;
  /// Continuous Roland-Cerf below continuous linear at every tau >= 32.
  bool rc_beats_linear = false;
};

/// Linear and Roland-Cerf annealing, continuous and digitized, against the
/// regular optimal schedules. Roland-Cerf uses the best gap floor of the
/// grid at every tau.
ScheduleComparison compare_schedules(const CompareSettings& settings);

std::vector<double> default_gap_floors();

struct CollapsePair {
  std::size_t depth_a = 0;
  std::size_t depth_b = 0;
  double distance = 0.0;
  double window_distance = 0.0;
};

struct CollapseStudy {
  std::vector<LadderLevel> ladder;
  std::vector<CollapseCurve> curves;
  /// Consecutive ladder levels.
  std::vector<CollapsePair> pairs;
  std::pair<double, double> window{0.2, 0.8};
  bool all_regular = false;
  /// A random-start minimum that is not regular, and its distance to the
  /// regular curve of twice its depth. Empty curve when none was found.
  CollapseCurve irregular;
  double irregular_distance = 0.0;
};

CollapseStudy collapse_study(const ChainSpec& chain, std::size_t p_target, std::pair<double, double> window,
                             std::size_t control_depth, int control_starts, std::uint64_t seed,
                             const OptimOptions& opts = {});

struct FieldProfile {
  double field = 0.0;
  std::size_t depth = 0;
  int eval_factor = 4;
  std::vector<double> s;
  /// 1-based step with the smallest centered difference of s.
  std::size_t flat_m = 0;
  double flat_s = 0.0;
  double s_critical = 0.0;
  bool regular = false;
  bool converged = false;
  double eps_res = 0.0;
};

/// Regular ladder for the target H_z + h H_x with the energy evaluated on a
/// periodic chain of eval_factor * P sites at every level.
FieldProfile field_profile(double h, std::size_t p_target, int eval_factor, const OptimOptions& opts = {});

/// 1/(2 - h): the field at which the transverse and coupling terms balance.
double critical_schedule_value(double h);

using ModePropagator = std::function<BlochVector(const QaoaAngles&, double k)>;

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  int n_cases = 0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct ValidateSettings {
  std::uint64_t seed = 1;
  int oracle_sets = 50;
  int gradient_sets = 100;
  double oracle_tol = 1e-10;
  double gradient_tol = 1e-6;
  double fd_step = 1e-5;
};

/// Oracle equivalence (pseudo-spin energies from `propagate` against the
/// state-vector simulation), gradient check and invariants.
ValidationReport run_validation(const ValidateSettings& settings, const ModePropagator& propagate = propagate_mode);

/// propagate_mode with the coupling rotation sign flipped; a negative control.
BlochVector propagate_mode_flipped(const QaoaAngles& angles, double k);

/// max |a - b| / max(max |b|, 1e-12)
double relative_gradient_error(const std::vector<double>& analytic, const std::vector<double>& reference);

}  // namespace dqa
