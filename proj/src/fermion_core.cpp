#include "dqa/fermion_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dqa {

void QaoaAngles::validate() const {
  if (gammas.size() != betas.size())
    throw std::invalid_argument("QaoaAngles: gammas and betas differ in length");
  if (gammas.empty()) throw std::invalid_argument("QaoaAngles: depth must be >= 1");
  for (std::size_t m = 0; m < gammas.size(); ++m)
    if (!std::isfinite(gammas[m]) || !std::isfinite(betas[m]))
      throw std::invalid_argument("QaoaAngles: non-finite angle at step " + std::to_string(m + 1));
}

std::vector<double> QaoaAngles::flatten() const {
  std::vector<double> x(gammas);
  x.insert(x.end(), betas.begin(), betas.end());
  return x;
}

QaoaAngles QaoaAngles::unflatten(const std::vector<double>& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("QaoaAngles::unflatten: odd length");
  const auto p = static_cast<std::ptrdiff_t>(x.size() / 2);
  return {std::vector<double>(x.begin(), x.begin() + p), std::vector<double>(x.begin() + p, x.end())};
}

void ChainSpec::validate() const {
  if (n_sites < 4 || n_sites % 2 != 0)
    throw std::invalid_argument("ChainSpec: n_sites must be even and >= 4, got " + std::to_string(n_sites));
  if (!std::isfinite(field) || field < 0.0) throw std::invalid_argument("ChainSpec: field must be finite and >= 0");
}

std::vector<double> k_grid(Boundary boundary, int n_r) {
  if (n_r < 4 || n_r % 2 != 0)
    throw std::invalid_argument("k_grid: chain length must be even and >= 4, got " + std::to_string(n_r));
  const double pi = std::numbers::pi;
  std::vector<double> ks;
  if (boundary == Boundary::Periodic) {
    for (int n = 1; n <= n_r / 2; ++n) ks.push_back((2 * n - 1) * pi / n_r);
  } else {
    for (int n = 1; n <= n_r / 2 - 1; ++n) ks.push_back(2 * n * pi / n_r);
  }
  return ks;
}

BlochVector rotate(const BlochVector& axis, double theta, const BlochVector& v) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) throw std::invalid_argument("rotate: axis is not a unit vector");
  return detail::rotate_unit(axis, theta, v);
}

BlochVector propagate_mode(const QaoaAngles& angles, double k) {
  const BlochVector b = BlochVector::coupling_axis(k);
  const BlochVector z = BlochVector::unit_z();
  BlochVector v = z;
  for (std::size_t m = 0; m < angles.depth(); ++m) {
    v = detail::rotate_unit(b, 4.0 * angles.gammas[m], v);
    v = detail::rotate_unit(z, 4.0 * angles.betas[m], v);
  }
  return v;
}

double mode_term(const BlochVector& tau, const BlochVector& target, double weight) {
  const BlochVector d = tau - target;
  return 0.5 * weight * d.dot(d);
}

double epsilon_k(const QaoaAngles& angles, double k) {
  return mode_term(propagate_mode(angles, k), BlochVector::coupling_axis(k), 1.0);
}

CostModel make_reduced_cost_model(const ChainSpec& chain, std::size_t depth) {
  chain.validate();
  CostModel model;
  const int n_r = static_cast<int>(2 * depth + 2);
  model.reduced = true;
  model.wavevectors = k_grid(Boundary::AntiPeriodic, n_r);
  for (double k : model.wavevectors) {
    model.targets.push_back(BlochVector::coupling_axis(k));
    model.weights.push_back(1.0);
  }
  model.constant = 1.0 / n_r;
  model.scale = 1.0 / n_r;
  model.e_min = -chain.n_sites;
  model.e_max = chain.n_sites;
  return model;
}

CostModel make_periodic_cost_model(double h, int n_eval) {
  CostModel model;
  model.wavevectors = k_grid(Boundary::Periodic, n_eval);
  double lambda_sum = 0.0;
  for (double k : model.wavevectors) {
    BlochVector target = BlochVector::coupling_axis(k);
    double lambda = 1.0;
    if (h != 0.0) {
      target.z += h;
      lambda = std::sqrt(1.0 + h * h + 2.0 * h * std::cos(k));
      target = target * (1.0 / lambda);
    }
    model.targets.push_back(target);
    model.weights.push_back(lambda);
    lambda_sum += lambda;
  }
  model.e_min = -2.0 * lambda_sum;
  model.e_max = 2.0 * lambda_sum;
  // eps = (E - E_min)/(E_max - E_min) with E = -2 sum_k Lambda_k target_k . tau_k
  model.scale = 2.0 / (model.e_max - model.e_min);
  model.constant = 0.0;
  return model;
}

CostModel make_cost_model(const ChainSpec& chain, std::size_t depth) {
  chain.validate();
  if (chain.field != 0.0) return make_periodic_cost_model(chain.field, chain.n_sites);
  if (2 * static_cast<long>(depth) < chain.n_sites) return make_reduced_cost_model(chain, depth);
  CostModel model = make_periodic_cost_model(0.0, chain.n_sites);
  return model;
}

double evaluate_excess(const CostModel& model, const QaoaAngles& angles) {
  double sum = 0.0;
  for (std::size_t i = 0; i < model.wavevectors.size(); ++i) {
    const BlochVector tau = propagate_mode(angles, model.wavevectors[i]);
    sum += mode_term(tau, model.targets[i], model.weights[i]);
  }
  return model.scale * sum;
}

double evaluate(const CostModel& model, const QaoaAngles& angles) {
  return model.constant + evaluate_excess(model, angles);
}

EnergyReport evaluate_report(const CostModel& model, const QaoaAngles& angles) {
  EnergyReport r;
  r.e_min = model.e_min;
  r.e_max = model.e_max;
  r.eps_res = evaluate(model, angles);
  r.energy = r.e_min + r.eps_res * (r.e_max - r.e_min);
  return r;
}

double cost(const QaoaAngles& angles, const ChainSpec& chain) {
  return evaluate(make_cost_model(chain, angles.depth()), angles);
}

EnergyReport residual_energy(const QaoaAngles& angles, const ChainSpec& chain) {
  angles.validate();
  chain.validate();
  if (chain.field != 0.0)
    throw std::invalid_argument("residual_energy: only valid for h = 0; use energy_expectation for h != 0");
  return evaluate_report(make_cost_model(chain, angles.depth()), angles);
}

EnergyReport report_from_modes(const CostModel& model, std::span<const BlochVector> taus) {
  if (taus.size() != model.wavevectors.size())
    throw std::invalid_argument("report_from_modes: one pseudo-spin per wave vector required");
  EnergyReport r;
  r.e_min = model.e_min;
  r.e_max = model.e_max;
  double energy = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    energy += -2.0 * model.weights[i] * model.targets[i].dot(taus[i]);
    sum += mode_term(taus[i], model.targets[i], model.weights[i]);
  }
  r.energy = energy;
  r.eps_res = model.constant + model.scale * sum;
  return r;
}

EnergyReport energy_expectation(const QaoaAngles& angles, const ChainSpec& chain, int n_eval) {
  angles.validate();
  if (!std::isfinite(chain.field) || chain.field < 0.0)
    throw std::invalid_argument("energy_expectation: field must be finite and >= 0");
  const CostModel model = make_periodic_cost_model(chain.field, n_eval);
  std::vector<BlochVector> taus;
  taus.reserve(model.wavevectors.size());
  for (double k : model.wavevectors) taus.push_back(propagate_mode(angles, k));
  return report_from_modes(model, taus);
}

QaoaAngles digitize(std::span<const double> s_values, std::span<const double> dt_values, double h) {
  if (s_values.size() != dt_values.size())
    throw std::invalid_argument("digitize: s and dt sequences differ in length");
  if (s_values.empty()) throw std::invalid_argument("digitize: empty schedule");
  QaoaAngles angles;
  for (std::size_t m = 0; m < s_values.size(); ++m) {
    const double s = s_values[m];
    const double dt = dt_values[m];
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("digitize: s_m must lie in (0, 1]");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("digitize: dt_m must be positive");
    angles.gammas.push_back(s * dt);
    angles.betas.push_back(((1.0 - s) + h * s) * dt);
  }
  return angles;
}

double schedule_duration(const QaoaAngles& angles, double h) {
  double tau = 0.0;
  for (std::size_t m = 0; m < angles.depth(); ++m) tau += angles.betas[m] + (1.0 - h) * angles.gammas[m];
  return tau;
}

std::vector<double> schedule_values(const QaoaAngles& angles, double h) {
  std::vector<double> s(angles.depth());
  for (std::size_t m = 0; m < angles.depth(); ++m)
    s[m] = angles.gammas[m] / (angles.betas[m] + (1.0 - h) * angles.gammas[m]);
  return s;
}

}  // namespace dqa
