#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dqa/bfgs.hpp"
#include "dqa/fermion_core.hpp"

namespace dqa {

struct OptimResult {
  QaoaAngles angles;
  double eps_res = 0.0;
  double grad_norm = 0.0;
  int n_iterations = 0;
  int n_evaluations = 0;
  bool converged = false;

  std::size_t depth() const { return angles.depth(); }
};

/// BFGS minimization of the residual energy (cost model of make_cost_model).
/// Throws NumericalFailure if the cost ever becomes non-finite.
OptimResult minimize(const QaoaAngles& initial, const ChainSpec& chain, const OptimOptions& opts = {});

/// Folds every angle into [0, pi/2); both rotation families are pi/2 periodic.
QaoaAngles canonicalize(const QaoaAngles& angles);

/// Max-norm distance between two angle sets on the pi/2 circle.
double periodic_distance(const QaoaAngles& a, const QaoaAngles& b);

/// Uniform random angles in [0, pi/2)^{2P}.
QaoaAngles random_angles(std::size_t depth, std::uint64_t seed);

/// Lower bound 1/(2P+2) on the residual energy when 2P < N.
double variational_bound(std::size_t depth);

struct MinimaSet {
  std::size_t depth = 0;
  /// Distinct canonical minima, sorted lexicographically by angles.
  std::vector<OptimResult> minima;
  /// How many runs fell into each representative's cluster.
  std::vector<int> multiplicity;
  int n_starts = 0;
  int n_converged = 0;
  int n_dropped_unconverged = 0;
  /// Converged but above the bound: local, non-global minima.
  int n_dropped_local = 0;
};

/// Seeded random restarts, clustered on canonical angles. Restart i uses
/// seed + i, so the result does not depend on the number of threads.
MinimaSet enumerate_minima(std::size_t depth, const ChainSpec& chain, int n_starts, std::uint64_t seed,
                           double cluster_tol, const OptimOptions& opts = {}, int threads = 1);

/// Piecewise-linear resampling of each angle family onto a deeper circuit.
/// Steps are placed at x_m = (m-1)/(P-1) in both source and target, so the
/// end steps map onto each other.
QaoaAngles interpolate_angles(const QaoaAngles& source, std::size_t target_depth);

/// True when s_m is strictly increasing in m.
bool is_regular(const QaoaAngles& angles, double h);

/// Digitized linear schedule s_m = m/(P+1) with dt_m = 1.
QaoaAngles linear_initial_angles(std::size_t depth, double h);

struct LadderLevel {
  OptimResult result;
  /// Duration from the sum rule.
  double tau = 0.0;
  /// Set when a level failed to converge or to reach the bound.
  bool degraded = false;
  /// Inserted between requested depths because the direct jump ended in a
  /// non-monotone schedule.
  bool intermediate = false;
  std::string warning;
};

/// Chain to use at a given depth; lets callers scale the evaluation size with P.
using ChainForDepth = std::function<ChainSpec(std::size_t depth)>;

/// Iterated construction: the first depth starts from the digitized linear
/// schedule, every following depth from interpolate_angles of the previous
/// optimum. A jump that ends in a non-monotone schedule is retried through
/// intermediate depths (at most max_refinements extra levels per jump);
/// those levels are returned too, flagged as intermediate.
std::vector<LadderLevel> optimize_ladder(const std::vector<std::size_t>& depths, const ChainForDepth& chain_for,
                                         const OptimOptions& opts = {}, int max_refinements = 4);

/// Doubling ladder P = 2, 4, 8, ..., p_target on a fixed chain.
std::vector<LadderLevel> regular_schedule(std::size_t p_target, const ChainSpec& chain, const OptimOptions& opts = {});

struct CostRow {
  std::size_t depth = 0;
  int n_iterations = 0;
  long t_cc = 0;
  long cumulative_iterations = 0;
  long cumulative_t_cc = 0;
};

std::vector<CostRow> cost_accounting(const std::vector<OptimResult>& ladder);
std::vector<CostRow> cost_accounting(const std::vector<LadderLevel>& ladder);

}  // namespace dqa
