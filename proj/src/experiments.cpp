#include "dqa/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dqa/ed_oracle.hpp"
#include "dqa/gradient.hpp"
#include "dqa/parallel.hpp"

namespace dqa {

namespace {

void require_increasing(const std::vector<std::size_t>& depths, const char* who) {
  if (depths.empty()) throw std::invalid_argument(std::string(who) + ": no depths");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] == 0 || (i > 0 && depths[i] <= depths[i - 1]))
      throw std::invalid_argument(std::string(who) + ": depths must be positive and increasing");
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

QaoaAngles uniform_angles(std::size_t depth, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 2.0);
  QaoaAngles a = QaoaAngles::zeros(depth);
  for (std::size_t m = 0; m < depth; ++m) {
    a.gammas[m] = u(rng);
    a.betas[m] = u(rng);
  }
  return a;
}

// Too few points in the window leave the fit empty (n_points = 0).
ScalingFit fit_if_possible(const std::vector<std::pair<double, double>>& points, std::pair<double, double> window) {
  std::size_t inside = 0;
  for (const auto& [tau, eps] : points) {
    if (tau >= window.first && tau <= window.second) ++inside;
  }
  if (inside < 3) return {};
  return scaling_fit(points, window);
}

}  // namespace

std::vector<BoundScanRow> bound_scan(const std::vector<int>& n_sites, const std::vector<std::size_t>& depths,
                                     double sat_tol, double zero_tol, const OptimOptions& opts, int threads) {
  require_increasing(depths, "bound_scan");
  for (int n : n_sites) ChainSpec{n, 0.0, Boundary::Periodic}.validate();

  std::vector<std::vector<BoundScanRow>> per_chain(n_sites.size());
  parallel_for(n_sites.size(), threads, [&](std::size_t i) {
    const ChainSpec chain{n_sites[i], 0.0, Boundary::Periodic};
    const auto ladder = optimize_ladder(depths, [&](std::size_t) { return chain; }, opts, 0);
    for (const auto& level : ladder) {
      if (level.intermediate) continue;
      BoundScanRow row;
      row.n_sites = chain.n_sites;
      row.depth = level.result.depth();
      row.eps_res = level.result.eps_res;
      row.converged = level.result.converged;
      if (2 * row.depth < static_cast<std::size_t>(chain.n_sites)) {
        row.bound = variational_bound(row.depth);
        row.saturated = std::abs(row.eps_res - row.bound) < sat_tol;
      } else {
        row.bound = 0.0;
        row.saturated = row.eps_res < zero_tol;
      }
      per_chain[i].push_back(row);
    }
  });

  std::vector<BoundScanRow> rows;
  for (auto& chunk : per_chain) rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

RegularStudy regular_study(const ChainSpec& chain, std::size_t p_target, std::size_t random_depth, int random_starts,
                           std::uint64_t seed, const OptimOptions& opts, int threads) {
  if (random_starts < 0) throw std::invalid_argument("regular_study: random_starts must be >= 0");
  RegularStudy study;
  study.ladder = regular_schedule(p_target, chain, opts);
  study.costs = cost_accounting(study.ladder);
  study.random_depth = random_depth;

  for (const auto& row : study.costs) {
    if (row.depth <= random_depth) study.ladder_iterations_to_random_depth = row.cumulative_iterations;
  }

  std::vector<std::pair<double, double>> points;
  for (const auto& level : study.ladder) {
    if (!level.intermediate && level.result.n_iterations > 0)
      points.emplace_back(static_cast<double>(level.result.depth()), static_cast<double>(level.result.n_iterations));
  }
  if (points.size() >= 3) {
    study.ladder_iteration_exponent = scaling_fit(points, {points.front().first, points.back().first}).exponent;
  }

  if (random_starts > 0) {
    study.random_runs.resize(static_cast<std::size_t>(random_starts));
    parallel_for(study.random_runs.size(), threads, [&](std::size_t i) {
      study.random_runs[i] = minimize(random_angles(random_depth, seed + i), chain, opts);
    });
    double total = 0.0;
    for (const auto& r : study.random_runs) total += r.n_iterations;
    study.random_mean_iterations = total / random_starts;
  }
  return study;
}

std::vector<double> default_gap_floors() {
  std::vector<double> g;
  for (int j = 0; j <= 16; ++j) g.push_back(0.01 * std::pow(std::sqrt(2.0), j));
  return g;
}

ScheduleComparison compare_schedules(const CompareSettings& settings) {
  if (settings.taus.empty()) throw std::invalid_argument("compare_schedules: empty tau grid");
  for (double tau : settings.taus) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("compare_schedules: tau must be positive");
  }
  if (settings.gap_floors.empty()) throw std::invalid_argument("compare_schedules: empty gap-floor grid");
  const ChainSpec chain{settings.n_sites, 0.0, Boundary::Periodic};
  chain.validate();

  const std::size_t n_tau = settings.taus.size();
  const std::size_t n_g = settings.gap_floors.size();
  // Slot layout per tau: [linear, rc(g_0) .. rc(g_{n_g-1})].
  const std::size_t stride = 1 + n_g;
  std::vector<double> continuous(n_tau * stride);
  std::vector<double> digital(n_tau * stride);
  std::vector<std::size_t> digital_depth(n_tau);

  parallel_for(n_tau * stride, settings.threads, [&](std::size_t slot) {
    const double tau = settings.taus[slot / stride];
    const std::size_t j = slot % stride;
    const AnnealSchedule schedule =
        j == 0 ? AnnealSchedule::linear(tau) : roland_cerf_schedule(tau, settings.gap_floors[j - 1]);
    continuous[slot] = bloch_evolve(schedule, chain, default_time_step(tau)).report.eps_res;
    const QaoaAngles angles = digitized_angles(step_discretize(schedule, settings.dt), 0.0);
    digital[slot] = residual_energy(angles, chain).eps_res;
    if (j == 0) digital_depth[slot / stride] = angles.depth();
  });

  ScheduleComparison out;
  auto best_rc = [&](const std::vector<double>& values, std::size_t t) {
    std::size_t best = 1;
    for (std::size_t j = 2; j < stride; ++j) {
      if (values[t * stride + j] < values[t * stride + best]) best = j;
    }
    return best;
  };
  for (std::size_t t = 0; t < n_tau; ++t) {
    const double tau = settings.taus[t];
    const std::size_t p = digital_depth[t];
    out.rows.push_back({"linear-qa", tau, 0, 0.0, 0.0, continuous[t * stride]});
    out.rows.push_back({"linear-dqa", tau, p, settings.dt, 0.0, digital[t * stride]});
    const std::size_t jc = best_rc(continuous, t);
    out.rows.push_back({"rc-qa", tau, 0, 0.0, settings.gap_floors[jc - 1], continuous[t * stride + jc]});
    const std::size_t jd = best_rc(digital, t);
    out.rows.push_back({"rc-dqa", tau, p, settings.dt, settings.gap_floors[jd - 1], digital[t * stride + jd]});
  }

  const auto ladder = regular_schedule(settings.p_max, chain, settings.opts);
  for (const auto& level : ladder) {
    const std::size_t p = level.result.depth();
    out.rows.push_back({"optimal-dqa", level.tau, p, level.tau / static_cast<double>(p), 0.0, level.result.eps_res});
  }

  std::stable_sort(out.rows.begin(), out.rows.end(), [](const ScheduleRow& a, const ScheduleRow& b) {
    if (a.schedule != b.schedule) return a.schedule < b.schedule;
    return a.tau < b.tau;
  });

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& r : out.rows) series[r.schedule].emplace_back(r.tau, r.eps_res);
  for (const auto& [name, pts] : series) {
    out.fits[name] = fit_if_possible(pts, {pts.front().first, pts.back().first});
  }
  const auto& opt = series["optimal-dqa"];
  const double lo = std::sqrt(opt.front().first * opt.back().first);
  out.optimal_upper = fit_if_possible(opt, {lo, opt.back().first});

  out.rc_beats_linear = true;
  for (std::size_t t = 0; t < n_tau; ++t) {
    if (settings.taus[t] < 32.0) continue;
    const double rc = continuous[t * stride + best_rc(continuous, t)];
    if (!(rc < continuous[t * stride])) out.rc_beats_linear = false;
  }
  return out;
}

CollapseStudy collapse_study(const ChainSpec& chain, std::size_t p_target, std::pair<double, double> window,
                             std::size_t control_depth, int control_starts, std::uint64_t seed,
                             const OptimOptions& opts) {
  if (!(window.first < window.second)) throw std::invalid_argument("collapse_study: empty window");
  CollapseStudy study;
  study.window = window;
  study.ladder = regular_schedule(p_target, chain, opts);

  std::vector<QaoaAngles> angles;
  study.all_regular = true;
  for (const auto& level : study.ladder) {
    angles.push_back(level.result.angles);
    if (!is_regular(level.result.angles, chain.field)) study.all_regular = false;
  }
  study.curves = collapse_transform(angles, chain.field);
  for (std::size_t i = 1; i < study.curves.size(); ++i) {
    const auto& a = study.curves[i - 1];
    const auto& b = study.curves[i];
    study.pairs.push_back({a.depth, b.depth, collapse_distance(a, b), collapse_distance(a, b, window)});
  }

  if (control_depth > 0) {
    const CollapseCurve* reference = nullptr;
    for (const auto& c : study.curves) {
      if (c.depth == 2 * control_depth) reference = &c;
    }
    for (const auto& c : study.curves) {
      if (!reference && c.depth == control_depth) reference = &c;
    }
    for (int i = 0; i < control_starts && reference; ++i) {
      const OptimResult r = minimize(random_angles(control_depth, seed + static_cast<std::uint64_t>(i)), chain, opts);
      if (!r.converged || is_regular(r.angles, chain.field)) continue;
      study.irregular = collapse_transform({r.angles}, chain.field).front();
      study.irregular_distance = collapse_distance(study.irregular, *reference);
      break;
    }
  }
  return study;
}

double critical_schedule_value(double h) {
  if (!(h >= 0.0 && h < 1.0)) throw std::invalid_argument("critical_schedule_value: h must lie in [0, 1)");
  return 1.0 / (2.0 - h);
}

FieldProfile field_profile(double h, std::size_t p_target, int eval_factor, const OptimOptions& opts) {
  if (p_target < 4) throw std::invalid_argument("field_profile: depth must be >= 4");
  if (eval_factor < 1) throw std::invalid_argument("field_profile: eval_factor must be >= 1");
  std::vector<std::size_t> depths;
  for (std::size_t p = 2; p < p_target; p *= 2) depths.push_back(p);
  depths.push_back(p_target);

  const auto ladder = optimize_ladder(
      depths, [&](std::size_t p) { return ChainSpec{eval_factor * static_cast<int>(p), h, Boundary::Periodic}; }, opts);
  const LadderLevel& last = ladder.back();

  FieldProfile out;
  out.field = h;
  out.depth = last.result.depth();
  out.eval_factor = eval_factor;
  out.s = schedule_values(last.result.angles, h);
  out.regular = is_regular(last.result.angles, h);
  out.converged = last.result.converged;
  out.eps_res = last.result.eps_res;
  out.s_critical = critical_schedule_value(h);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m + 1 < out.s.size(); ++m) {
    const double slope = out.s[m + 1] - out.s[m - 1];
    if (slope < best) {
      best = slope;
      out.flat_m = m + 1;
      out.flat_s = out.s[m];
    }
  }
  return out;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

double relative_gradient_error(const std::vector<double>& analytic, const std::vector<double>& reference) {
  if (analytic.size() != reference.size()) throw std::invalid_argument("relative_gradient_error: size mismatch");
  double diff = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) diff = std::max(diff, std::abs(analytic[i] - reference[i]));
  return diff / std::max(max_abs(reference), 1e-12);
}

BlochVector propagate_mode_flipped(const QaoaAngles& angles, double k) {
  const BlochVector b = BlochVector::coupling_axis(k);
  const BlochVector z = BlochVector::unit_z();
  BlochVector v = z;
  for (std::size_t m = 0; m < angles.depth(); ++m) {
    v = detail::rotate_unit(b, -4.0 * angles.gammas[m], v);
    v = detail::rotate_unit(z, 4.0 * angles.betas[m], v);
  }
  return v;
}

ValidationReport run_validation(const ValidateSettings& settings, const ModePropagator& propagate) {
  std::mt19937_64 rng(settings.seed);
  ValidationReport report;

  {
    CheckResult c{"oracle-equivalence", true, 0.0, settings.oracle_tol, 0};
    for (double h : {0.0, 0.5}) {
      for (int n : {4, 6, 8, 10}) {
        for (std::size_t p = 1; p <= 5; ++p) {
          const CostModel model = h == 0.0 ? make_cost_model(ChainSpec{n, 0.0, Boundary::Periodic}, p)
                                           : make_periodic_cost_model(h, n);
          for (int s = 0; s < settings.oracle_sets; ++s) {
            const QaoaAngles angles = uniform_angles(p, rng);
            std::vector<BlochVector> taus;
            for (double k : model.wavevectors) taus.push_back(propagate(angles, k));
            const double fermion = report_from_modes(model, taus).eps_res;
            const double exact = eps_res_ed(angles, n, h).eps_res;
            c.worst = std::max(c.worst, std::abs(fermion - exact));
            ++c.n_cases;
          }
        }
      }
    }
    c.passed = c.worst < c.tolerance;
    report.checks.push_back(c);
  }

  {
    CheckResult c{"gradient-check", true, 0.0, settings.gradient_tol, 0};
    for (int i = 0; i < settings.gradient_sets; ++i) {
      const std::size_t p = 1 + static_cast<std::size_t>(i % 16);
      const double h = i % 2 == 0 ? 0.0 : 0.5;
      const ChainSpec chain{32, h, Boundary::Periodic};
      const QaoaAngles angles = uniform_angles(p, rng);
      const auto analytic = value_and_gradient(angles, chain).gradient.flatten();
      const auto numeric = finite_diff_gradient(angles, chain, settings.fd_step).flatten();
      c.worst = std::max(c.worst, relative_gradient_error(analytic, numeric));
      ++c.n_cases;
    }
    c.passed = c.worst < c.tolerance;
    report.checks.push_back(c);
  }

  {
    CheckResult c{"norm-conservation", true, 0.0, 1e-12, 0};
    for (int i = 0; i < 20; ++i) {
      const QaoaAngles angles = uniform_angles(1 + static_cast<std::size_t>(i % 16), rng);
      for (double k : k_grid(Boundary::Periodic, 64)) {
        c.worst = std::max(c.worst, std::abs(propagate(angles, k).norm() - 1.0));
        ++c.n_cases;
      }
    }
    c.passed = c.worst < c.tolerance;
    report.checks.push_back(c);
  }

  {
    // Distance below 1/(2P+2) or outside [0, 1].
    CheckResult c{"energy-range", true, 0.0, 1e-12, 0};
    for (int i = 0; i < 100; ++i) {
      const std::size_t p = 1 + static_cast<std::size_t>(i % 12);
      const ChainSpec chain{64, 0.0, Boundary::Periodic};
      const double eps = residual_energy(uniform_angles(p, rng), chain).eps_res;
      const double below = std::max(variational_bound(p) - eps, 0.0);
      const double above = std::max(eps - 1.0, 0.0);
      c.worst = std::max({c.worst, below, above});
      ++c.n_cases;
    }
    c.passed = c.worst < c.tolerance;
    report.checks.push_back(c);
  }

  {
    CheckResult c{"angle-periodicity", true, 0.0, 1e-12, 0};
    std::uniform_int_distribution<std::size_t> pick(0, 1);
    for (int i = 0; i < 50; ++i) {
      const std::size_t p = 1 + static_cast<std::size_t>(i % 8);
      const ChainSpec chain{32, i % 2 == 0 ? 0.0 : 0.5, Boundary::Periodic};
      const QaoaAngles angles = uniform_angles(p, rng);
      QaoaAngles shifted = angles;
      const std::size_t m = static_cast<std::size_t>(i) % p;
      if (pick(rng) == 0) {
        shifted.gammas[m] += std::numbers::pi / 2.0;
      } else {
        shifted.betas[m] -= std::numbers::pi / 2.0;
      }
      c.worst = std::max(c.worst, std::abs(cost(angles, chain) - cost(shifted, chain)));
      ++c.n_cases;
    }
    c.passed = c.worst < c.tolerance;
    report.checks.push_back(c);
  }

  {
    // For 2P < N the periodic-chain energy density does not depend on N.
    CheckResult c{"size-independence", true, 0.0, 1e-12, 0};
    for (int i = 0; i < 30; ++i) {
      const std::size_t p = 1 + static_cast<std::size_t>(i % 10);
      const QaoaAngles angles = uniform_angles(p, rng);
      const int n_small = static_cast<int>(2 * p + 2);
      const double a = evaluate(make_periodic_cost_model(0.0, n_small), angles);
      const double b = evaluate(make_periodic_cost_model(0.0, 2 * n_small + 4), angles);
      const double r = residual_energy(angles, ChainSpec{4 * n_small, 0.0, Boundary::Periodic}).eps_res;
      c.worst = std::max({c.worst, std::abs(a - b), std::abs(a - r)});
      ++c.n_cases;
    }
    c.passed = c.worst < c.tolerance;
    report.checks.push_back(c);
  }

  {
    CheckResult c{"state-norm-and-parity", true, 0.0, 1e-12, 0};
    for (int i = 0; i < 20; ++i) {
      const int n = 4 + 2 * (i % 4);
      const StateVector psi = qaoa_state(uniform_angles(1 + static_cast<std::size_t>(i % 5), rng), n);
      c.worst = std::max({c.worst, std::abs(state_norm(psi) - 1.0), std::abs(parity_expectation(psi, n) - 1.0)});
      ++c.n_cases;
    }
    c.passed = c.worst < c.tolerance;
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace dqa
