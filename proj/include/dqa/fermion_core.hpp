#pragma once

// Exact energies of digitized annealing / QAOA circuits on the
// antiferromagnetic transverse-field Ising chain. After a Jordan-Wigner
// mapping every wave vector k carries an independent pseudo-spin whose
// Bloch vector starts at z and is rotated about b_k = (-sin k, 0, cos k)
// by 4*gamma_m and about z by 4*beta_m, step after step.

#include <span>
#include <vector>

#include "dqa/types.hpp"

namespace dqa {

/// Positive wave vectors of a chain of n_r spins.
/// Periodic: (2n-1)pi/n_r, n = 1..n_r/2. Anti-periodic: 2n pi/n_r, n = 1..n_r/2-1.
std::vector<double> k_grid(Boundary boundary, int n_r);

/// Right-handed Rodrigues rotation of v by theta about a unit axis.
BlochVector rotate(const BlochVector& axis, double theta, const BlochVector& v);

/// Pseudo-spin magnetization of mode k after the whole circuit; the m = 1
/// step acts first.
BlochVector propagate_mode(const QaoaAngles& angles, double k);

/// 1 - b_k . tau_k, in [0, 2]; evaluated as |tau_k - b_k|^2 / 2, which is
/// the same quantity on the unit sphere and keeps full relative precision
/// near zero.
double epsilon_k(const QaoaAngles& angles, double k);

/// Residual energy of the h = 0 chain. For 2P < N the reduced anti-periodic
/// chain of 2P+2 sites is used, otherwise the full periodic chain.
EnergyReport residual_energy(const QaoaAngles& angles, const ChainSpec& chain);

/// Energy of H_z + h H_x on a periodic chain of n_eval sites.
EnergyReport energy_expectation(const QaoaAngles& angles, const ChainSpec& chain, int n_eval);

/// Lowest-order Trotter angles of a step schedule.
QaoaAngles digitize(std::span<const double> s_values, std::span<const double> dt_values, double h);

/// Total annealing time implied by the angles: sum of beta_m + (1-h) gamma_m.
double schedule_duration(const QaoaAngles& angles, double h);

/// Local schedule value s_m = gamma_m / (beta_m + (1-h) gamma_m), which
/// reduces to gamma_m / (gamma_m + beta_m) at h = 0.
std::vector<double> schedule_values(const QaoaAngles& angles, double h);

/// The residual energy in terms of the final pseudo-spins:
///   eps = constant + scale * sum_k weight_k |tau_k - target_k|^2 / 2
/// with unit targets. For the cost H_z + h H_x the target of mode k is the
/// direction of b_k + h z and the weight its length Lambda_k, so each term
/// equals Lambda_k - (b_k + h z) . tau_k. Shared by the forward evaluator and
/// the adjoint gradient so that both accumulate in the same order.
struct CostModel {
  std::vector<double> wavevectors;
  std::vector<BlochVector> targets;
  std::vector<double> weights;
  double constant = 0.0;
  double scale = 1.0;
  double e_min = 0.0;
  double e_max = 0.0;
  /// true when the anti-periodic reduced chain is in use.
  bool reduced = false;
};

/// Cost model used by the optimizer: residual_energy for h = 0, and
/// energy_expectation with n_eval = chain.n_sites otherwise.
CostModel make_cost_model(const ChainSpec& chain, std::size_t depth);
CostModel make_reduced_cost_model(const ChainSpec& chain, std::size_t depth);
CostModel make_periodic_cost_model(double h, int n_eval);

double evaluate(const CostModel& model, const QaoaAngles& angles);
/// eps - constant: the part of the cost that can be optimized away.
double evaluate_excess(const CostModel& model, const QaoaAngles& angles);
/// weight * |tau - target|^2 / 2 for one mode.
double mode_term(const BlochVector& tau, const BlochVector& target, double weight);
EnergyReport evaluate_report(const CostModel& model, const QaoaAngles& angles);

/// Energy report for final pseudo-spins given in the order of model.wavevectors.
/// The energy is -2 sum_k (b_k + h z) . tau_k.
EnergyReport report_from_modes(const CostModel& model, std::span<const BlochVector> taus);

/// Shorthand for evaluate(make_cost_model(chain, P), angles).
double cost(const QaoaAngles& angles, const ChainSpec& chain);

namespace detail {
// Unchecked Rodrigues rotation; axis must be unit norm.
inline BlochVector rotate_unit(const BlochVector& axis, double theta, const BlochVector& v) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}
}  // namespace detail

}  // namespace dqa
