#include "dqa/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace dqa {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return f;
}

BlochVector bloch_rhs(const BlochVector& tau, const BlochVector& field) { return tau.cross(field) * 4.0; }

}  // namespace

AnnealSchedule AnnealSchedule::linear(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("AnnealSchedule: tau must be positive");
  return AnnealSchedule(LinearRamp{}, tau);
}

AnnealSchedule AnnealSchedule::piecewise_constant(std::vector<double> s_values, std::vector<double> dt_values) {
  if (s_values.size() != dt_values.size() || s_values.empty())
    throw std::invalid_argument("AnnealSchedule: s and dt sequences must be non-empty and equally long");
  double tau = 0.0;
  for (std::size_t m = 0; m < s_values.size(); ++m) {
    if (!(dt_values[m] > 0.0)) throw std::invalid_argument("AnnealSchedule: dt_m must be positive");
    if (!(s_values[m] >= 0.0 && s_values[m] <= 1.0)) throw std::invalid_argument("AnnealSchedule: s_m outside [0, 1]");
    tau += dt_values[m];
  }
  return AnnealSchedule(PiecewiseConstantRamp{std::move(s_values), std::move(dt_values)}, tau);
}

std::string AnnealSchedule::name() const {
  return std::visit(Overloaded{[](const LinearRamp&) { return std::string("linear"); },
                               [](const RolandCerfRamp&) { return std::string("roland-cerf"); },
                               [](const PiecewiseConstantRamp&) { return std::string("piecewise-constant"); }},
                    variant_);
}

double AnnealSchedule::operator()(double t) const {
  t = std::clamp(t, 0.0, tau_);
  return std::visit(
      Overloaded{[&](const LinearRamp&) { return t / tau_; },
                 [&](const RolandCerfRamp& rc) {
                   const double g = rc.gap_floor;
                   const double a = std::atan(2.0 / g);
                   const double s = 0.5 + 0.25 * g * std::tan((2.0 * t / tau_ - 1.0) * a);
                   return std::clamp(s, 0.0, 1.0);
                 },
                 [&](const PiecewiseConstantRamp& pc) {
                   double elapsed = 0.0;
                   for (std::size_t m = 0; m < pc.s_values.size(); ++m) {
                     elapsed += pc.dt_values[m];
                     if (t < elapsed) return pc.s_values[m];
                   }
                   return pc.s_values.back();
                 }},
      variant_);
}

AnnealSchedule roland_cerf_schedule(double tau, double gap_floor) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("roland_cerf_schedule: tau must be positive");
  if (!(gap_floor > 0.0)) throw std::invalid_argument("roland_cerf_schedule: gap_floor must be positive");
  RolandCerfRamp rc;
  rc.gap_floor = gap_floor;
  rc.velocity_scale = std::atan(2.0 / gap_floor) / (2.0 * gap_floor * tau);
  return AnnealSchedule(rc, tau);
}

double default_time_step(double tau) { return tau / std::max(1000.0, 100.0 * tau); }

EvolveResult bloch_evolve(const AnnealSchedule& schedule, const ChainSpec& chain, double dt_step) {
  chain.validate();
  if (schedule.is_piecewise())
    throw std::invalid_argument("bloch_evolve: piecewise-constant schedules go through digitized_angles");
  if (!(dt_step > 0.0)) throw std::invalid_argument("bloch_evolve: dt_step must be positive");

  const double tau = schedule.total_time();
  const int n_steps = std::max(1, static_cast<int>(std::ceil(tau / dt_step - 1e-9)));
  const double dt = tau / n_steps;
  const double h = chain.field;

  // s at every step boundary and midpoint, shared by all modes.
  std::vector<double> s_grid(2 * static_cast<std::size_t>(n_steps) + 1);
  for (std::size_t i = 0; i < s_grid.size(); ++i) s_grid[i] = schedule(0.5 * dt * static_cast<double>(i));

  const CostModel model = make_periodic_cost_model(h, chain.n_sites);
  const BlochVector z = BlochVector::unit_z();
  std::vector<BlochVector> taus;
  taus.reserve(model.wavevectors.size());
  EvolveResult out;
  out.n_steps = n_steps;
  for (double k : model.wavevectors) {
    const BlochVector b = BlochVector::coupling_axis(k);
    auto field = [&](double s) { return b * s + z * (1.0 - s + s * h); };
    BlochVector v = z;
    for (int n = 0; n < n_steps; ++n) {
      const BlochVector c0 = field(s_grid[2 * n]);
      const BlochVector c1 = field(s_grid[2 * n + 1]);
      const BlochVector c2 = field(s_grid[2 * n + 2]);
      const BlochVector k1 = bloch_rhs(v, c0);
      const BlochVector k2 = bloch_rhs(v + k1 * (0.5 * dt), c1);
      const BlochVector k3 = bloch_rhs(v + k2 * (0.5 * dt), c1);
      const BlochVector k4 = bloch_rhs(v + k3 * dt, c2);
      v = v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
      const double norm = v.norm();
      out.max_norm_drift = std::max(out.max_norm_drift, std::abs(norm - 1.0));
      v = v * (1.0 / norm);
    }
    taus.push_back(v);
  }
  out.accuracy_warning = out.max_norm_drift > 1e-6;
  out.report = report_from_modes(model, taus);
  return out;
}

AnnealSchedule step_discretize(const AnnealSchedule& schedule, double dt_m) {
  if (schedule.is_piecewise()) return schedule;
  if (!(dt_m > 0.0)) throw std::invalid_argument("step_discretize: dt_m must be positive");
  const double steps = schedule.total_time() / dt_m;
  const double rounded = std::round(steps);
  if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw std::invalid_argument("step_discretize: tau must be an integer multiple of dt_m");
  const auto p = static_cast<std::size_t>(rounded);
  std::vector<double> s(p);
  for (std::size_t m = 0; m < p; ++m) s[m] = schedule((static_cast<double>(m) + 0.5) * dt_m);
  return AnnealSchedule::piecewise_constant(std::move(s), std::vector<double>(p, dt_m));
}

QaoaAngles digitized_angles(const AnnealSchedule& schedule, double h) {
  const auto* pc = std::get_if<PiecewiseConstantRamp>(&schedule.variant());
  if (pc == nullptr) throw std::invalid_argument("digitized_angles: schedule must be piecewise constant");
  return digitize(pc->s_values, pc->dt_values, h);
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points, std::pair<double, double> window) {
  std::vector<double> log_tau, log_eps, tau, inv_eps;
  std::set<double> distinct;
  for (const auto& [t, e] : points) {
    if (!(t > 0.0) || !(e > 0.0)) throw std::invalid_argument("scaling_fit: tau and eps must be positive");
    if (t < window.first || t > window.second) continue;
    log_tau.push_back(std::log(t));
    log_eps.push_back(std::log(e));
    tau.push_back(t);
    inv_eps.push_back(1.0 / e);
    distinct.insert(t);
  }
  if (distinct.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 distinct tau in the window");

  ScalingFit fit;
  fit.fit_window = window;
  fit.n_points = tau.size();
  const LineFit power = least_squares(log_tau, log_eps);
  fit.exponent = power.slope;
  fit.prefactor = std::exp(power.intercept);
  fit.r_squared = power.r_squared;
  const LineFit inverse = least_squares(tau, inv_eps);
  fit.inverse_a = inverse.slope;
  fit.inverse_b = inverse.intercept;
  fit.inverse_r_squared = inverse.r_squared;
  return fit;
}

std::vector<CollapseCurve> collapse_transform(const std::vector<QaoaAngles>& ladder, double h) {
  std::vector<CollapseCurve> curves;
  for (const auto& angles : ladder) {
    angles.validate();
    const auto s = schedule_values(angles, h);
    CollapseCurve c;
    c.depth = angles.depth();
    c.tau = schedule_duration(angles, h);
    double elapsed = 0.0;
    for (std::size_t m = 0; m < angles.depth(); ++m) {
      const double dt = angles.betas[m] + (1.0 - h) * angles.gammas[m];
      c.x.push_back((elapsed + 0.5 * dt) / c.tau);
      c.y.push_back((s[m] - 0.5) * c.tau);
      elapsed += dt;
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

namespace {

double interpolate_curve(const CollapseCurve& c, double x) {
  if (c.x.size() == 1) return c.y.front();
  auto it = std::upper_bound(c.x.begin(), c.x.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - c.x.begin());
  hi = std::clamp<std::size_t>(hi, 1, c.x.size() - 1);
  const std::size_t lo = hi - 1;
  const double w = (x - c.x[lo]) / (c.x[hi] - c.x[lo]);
  return c.y[lo] + w * (c.y[hi] - c.y[lo]);
}

}  // namespace

double collapse_distance(const CollapseCurve& a, const CollapseCurve& b) {
  return collapse_distance(a, b, {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()});
}

double collapse_distance(const CollapseCurve& a, const CollapseCurve& b, std::pair<double, double> window) {
  if (a.x.empty() || b.x.empty()) throw std::invalid_argument("collapse_distance: empty curve");
  const double lo = std::max({a.x.front(), b.x.front(), window.first});
  const double hi = std::min({a.x.back(), b.x.back(), window.second});
  if (lo > hi) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (const CollapseCurve* c : {&a, &b})
    for (double x : c->x)
      if (x >= lo && x <= hi) d = std::max(d, std::abs(interpolate_curve(a, x) - interpolate_curve(b, x)));
  return d;
}

}  // namespace dqa
