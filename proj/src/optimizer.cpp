#include "dqa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dqa/gradient.hpp"
#include "dqa/parallel.hpp"

namespace dqa {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Eigen::VectorXd to_eigen(const QaoaAngles& a) {
  const auto x = a.flatten();
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

QaoaAngles from_eigen(const Eigen::VectorXd& x) {
  return QaoaAngles::unflatten(std::vector<double>(x.data(), x.data() + x.size()));
}

double fold(double angle) {
  double r = std::fmod(angle, kHalfPi);
  if (r < 0.0) r += kHalfPi;
  if (r >= kHalfPi) r = 0.0;  // -tiny + pi/2 rounds up to pi/2
  return r;
}

bool lexicographic_less(const QaoaAngles& a, const QaoaAngles& b) {
  const auto xa = a.flatten();
  const auto xb = b.flatten();
  return std::lexicographical_compare(xa.begin(), xa.end(), xb.begin(), xb.end());
}

}  // namespace

OptimResult minimize(const QaoaAngles& initial, const ChainSpec& chain, const OptimOptions& opts) {
  initial.validate();
  const CostModel model = make_cost_model(chain, initial.depth());
  Objective objective = [&model](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const ValueAndGradient vg = value_and_gradient(from_eigen(x), model);
    const auto g = vg.gradient.flatten();
    grad = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
    return vg.excess;
  };
  const BfgsResult r = bfgs_minimize(objective, to_eigen(initial), opts);
  OptimResult out;
  out.angles = from_eigen(r.x);
  out.eps_res = model.constant + r.value;
  out.grad_norm = r.grad_norm;
  out.n_iterations = r.n_iterations;
  out.n_evaluations = r.n_evaluations;
  out.converged = r.converged;
  return out;
}

QaoaAngles canonicalize(const QaoaAngles& angles) {
  QaoaAngles out = angles;
  for (double& g : out.gammas) g = fold(g);
  for (double& b : out.betas) b = fold(b);
  return out;
}

double periodic_distance(const QaoaAngles& a, const QaoaAngles& b) {
  if (a.depth() != b.depth()) throw std::invalid_argument("periodic_distance: depth mismatch");
  const auto xa = a.flatten();
  const auto xb = b.flatten();
  double d = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double diff = fold(xa[i] - xb[i]);
    d = std::max(d, std::min(diff, kHalfPi - diff));
  }
  return d;
}

QaoaAngles random_angles(std::size_t depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, kHalfPi);
  QaoaAngles a = QaoaAngles::zeros(depth);
  for (double& g : a.gammas) g = uniform(rng);
  for (double& b : a.betas) b = uniform(rng);
  return a;
}

double variational_bound(std::size_t depth) { return 1.0 / (2.0 * static_cast<double>(depth) + 2.0); }

MinimaSet enumerate_minima(std::size_t depth, const ChainSpec& chain, int n_starts, std::uint64_t seed,
                           double cluster_tol, const OptimOptions& opts, int threads) {
  chain.validate();
  if (depth == 0) throw std::invalid_argument("enumerate_minima: depth must be >= 1");
  if (chain.field != 0.0 || 2 * static_cast<long>(depth) >= chain.n_sites)
    throw std::invalid_argument("enumerate_minima: requires h = 0 and 2P < N");

  std::vector<OptimResult> runs(static_cast<std::size_t>(std::max(0, n_starts)));
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    runs[i] = minimize(random_angles(depth, seed + i), chain, opts);
  });

  MinimaSet set;
  set.depth = depth;
  set.n_starts = n_starts;
  const double bound = variational_bound(depth);
  std::vector<OptimResult> kept;
  for (auto& r : runs) {
    if (!r.converged) {
      ++set.n_dropped_unconverged;
      continue;
    }
    ++set.n_converged;
    if (std::abs(r.eps_res - bound) > 1e-7) {
      ++set.n_dropped_local;
      continue;
    }
    r.angles = canonicalize(r.angles);
    kept.push_back(std::move(r));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const OptimResult& a, const OptimResult& b) { return lexicographic_less(a.angles, b.angles); });
  for (auto& r : kept) {
    bool placed = false;
    for (std::size_t c = 0; c < set.minima.size(); ++c) {
      if (periodic_distance(set.minima[c].angles, r.angles) <= cluster_tol) {
        ++set.multiplicity[c];
        placed = true;
        break;
      }
    }
    if (!placed) {
      set.minima.push_back(std::move(r));
      set.multiplicity.push_back(1);
    }
  }
  return set;
}

QaoaAngles interpolate_angles(const QaoaAngles& source, std::size_t target_depth) {
  source.validate();
  const std::size_t p = source.depth();
  if (target_depth < p) throw std::invalid_argument("interpolate_angles: target depth must not shrink");
  if (target_depth == p) return source;

  // Step m of a depth-P schedule sits at x = (m-1)/(P-1), so the first and
  // last steps of every depth are aligned.
  auto resample = [&](const std::vector<double>& values) {
    std::vector<double> out(target_depth);
    if (p == 1) {
      std::fill(out.begin(), out.end(), values[0]);
      return out;
    }
    for (std::size_t j = 0; j < target_depth; ++j) {
      const double pos = static_cast<double>(j) * static_cast<double>(p - 1) / static_cast<double>(target_depth - 1);
      const std::size_t m = std::min(static_cast<std::size_t>(pos), p - 2);
      const double w = pos - static_cast<double>(m);
      out[j] = values[m] + w * (values[m + 1] - values[m]);
    }
    return out;
  };
  return {resample(source.gammas), resample(source.betas)};
}

bool is_regular(const QaoaAngles& angles, double h) {
  const auto s = schedule_values(angles, h);
  for (std::size_t m = 1; m < s.size(); ++m)
    if (!(s[m] > s[m - 1])) return false;
  return true;
}

QaoaAngles linear_initial_angles(std::size_t depth, double h) {
  std::vector<double> s(depth);
  for (std::size_t m = 0; m < depth; ++m) s[m] = static_cast<double>(m + 1) / static_cast<double>(depth + 1);
  const std::vector<double> dt(depth, 1.0);
  return digitize(s, dt, h);
}

namespace {

LadderLevel optimize_level(const QaoaAngles& start, const ChainSpec& chain, const OptimOptions& opts) {
  const std::size_t p = start.depth();
  LadderLevel level;
  level.result = minimize(start, chain, opts);
  level.tau = schedule_duration(level.result.angles, chain.field);

  std::ostringstream warn;
  if (!level.result.converged) warn << "P=" << p << " did not converge (grad_norm " << level.result.grad_norm << ")";
  if (chain.field == 0.0) {
    const bool reduced = 2 * static_cast<long>(p) < chain.n_sites;
    const double target = reduced ? variational_bound(p) : 0.0;
    const double slack = reduced ? 1e-7 : 1e-8;
    if (std::abs(level.result.eps_res - target) > slack) {
      if (warn.tellp() > 0) warn << "; ";
      warn << "P=" << p << " eps_res " << level.result.eps_res << " misses the bound " << target;
    }
  }
  level.warning = warn.str();
  level.degraded = !level.warning.empty();
  return level;
}

}  // namespace

std::vector<LadderLevel> optimize_ladder(const std::vector<std::size_t>& depths, const ChainForDepth& chain_for,
                                         const OptimOptions& opts, int max_refinements) {
  std::vector<LadderLevel> ladder;
  for (const std::size_t p : depths) {
    if (ladder.empty()) {
      const ChainSpec chain = chain_for(p);
      ladder.push_back(optimize_level(linear_initial_angles(p, chain.field), chain, opts));
      continue;
    }
    // Too long a jump can land in an irregular minimum; retry through
    // intermediate depths halfway between the last regular level and p.
    std::vector<std::size_t> pending{p};
    int refinements = 0;
    while (!pending.empty()) {
      const std::size_t q = pending.back();
      const ChainSpec chain = chain_for(q);
      LadderLevel level = optimize_level(interpolate_angles(ladder.back().result.angles, q), chain, opts);
      const std::size_t prev = ladder.back().result.depth();
      if (!is_regular(level.result.angles, chain.field) && q - prev >= 2 && refinements < max_refinements) {
        ++refinements;
        pending.push_back(prev + (q - prev) / 2);
        continue;
      }
      if (!is_regular(level.result.angles, chain.field)) {
        level.degraded = true;
        if (!level.warning.empty()) level.warning += "; ";
        level.warning += "P=" + std::to_string(q) + " schedule is not monotone";
      }
      level.intermediate = q != p;
      pending.pop_back();
      ladder.push_back(std::move(level));
    }
  }
  return ladder;
}

std::vector<LadderLevel> regular_schedule(std::size_t p_target, const ChainSpec& chain, const OptimOptions& opts) {
  if (p_target < 2 || (p_target & (p_target - 1)) != 0)
    throw std::invalid_argument("regular_schedule: p_target must be a power of two >= 2");
  std::vector<std::size_t> depths;
  for (std::size_t p = 2; p <= p_target; p *= 2) depths.push_back(p);
  return optimize_ladder(depths, [&chain](std::size_t) { return chain; }, opts);
}

std::vector<CostRow> cost_accounting(const std::vector<OptimResult>& ladder) {
  std::vector<CostRow> rows;
  long cum_iter = 0;
  long cum_tcc = 0;
  for (const auto& r : ladder) {
    CostRow row;
    row.depth = r.depth();
    row.n_iterations = r.n_iterations;
    row.t_cc = static_cast<long>(r.n_iterations) * static_cast<long>(r.depth());
    cum_iter += r.n_iterations;
    cum_tcc += row.t_cc;
    row.cumulative_iterations = cum_iter;
    row.cumulative_t_cc = cum_tcc;
    rows.push_back(row);
  }
  return rows;
}

std::vector<CostRow> cost_accounting(const std::vector<LadderLevel>& ladder) {
  std::vector<OptimResult> results;
  for (const auto& l : ladder) results.push_back(l.result);
  return cost_accounting(results);
}

}  // namespace dqa
