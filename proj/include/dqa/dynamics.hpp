#pragma once

// Continuous-time annealing baselines. Each mode k of the periodic chain
// evolves as d tau_k/dt = 4 tau_k x c_k(s(t)), c_k(s) = s b_k + (1 - s + s h) z,
// which is the Heisenberg equation of H(s) = s (H_z + h H_x) + (1 - s) H_x
// restricted to the pseudo-spin of mode k.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dqa/fermion_core.hpp"

namespace dqa {

struct LinearRamp {};

/// Local-adiabatic ramp ds/dt = v (Delta(s)^2 + gap_floor^2) with
/// Delta(s) = 2|1 - 2s|; v is fixed by s(tau) = 1.
struct RolandCerfRamp {
  double velocity_scale = 0.0;
  double gap_floor = 1.0;
};

struct PiecewiseConstantRamp {
  std::vector<double> s_values;
  std::vector<double> dt_values;
};

class AnnealSchedule {
 public:
  using Variant = std::variant<LinearRamp, RolandCerfRamp, PiecewiseConstantRamp>;

  static AnnealSchedule linear(double tau);
  static AnnealSchedule piecewise_constant(std::vector<double> s_values, std::vector<double> dt_values);

  double total_time() const { return tau_; }
  const Variant& variant() const { return variant_; }
  bool is_piecewise() const { return std::holds_alternative<PiecewiseConstantRamp>(variant_); }
  std::string name() const;

  /// s(t) for t in [0, tau]; t is clamped to that range.
  double operator()(double t) const;

 private:
  friend AnnealSchedule roland_cerf_schedule(double tau, double gap_floor);
  AnnealSchedule(Variant v, double tau) : variant_(std::move(v)), tau_(tau) {}

  Variant variant_;
  double tau_;
};

/// The ds/dt equation integrates in closed form,
///   t(s) = [atan(2(2s-1)/g) + atan(2/g)] / (4 g v),
/// so the schedule is evaluated by direct inversion.
AnnealSchedule roland_cerf_schedule(double tau, double gap_floor);

/// Fixed RK4 step used by default: tau / max(1000, 100 tau).
double default_time_step(double tau);

struct EvolveResult {
  EnergyReport report;
  /// Largest | |tau_k| - 1 | seen before a renormalization.
  double max_norm_drift = 0.0;
  bool accuracy_warning = false;
  int n_steps = 0;
};

/// Integrates every mode of K_PBC(N) from z to t = tau with fixed-step RK4,
/// renormalizing after each step, and assembles the residual energy of
/// H_z + h H_x.
EvolveResult bloch_evolve(const AnnealSchedule& schedule, const ChainSpec& chain, double dt_step);

/// Samples s at interval midpoints (m - 1/2) dt_m. Piecewise-constant input
/// is returned unchanged.
AnnealSchedule step_discretize(const AnnealSchedule& schedule, double dt_m);

/// Trotterized angles of a piecewise-constant schedule.
QaoaAngles digitized_angles(const AnnealSchedule& schedule, double h);

struct ScalingFit {
  /// log eps = log prefactor + exponent * log tau
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  /// 1/eps = a tau + b
  double inverse_a = 0.0;
  double inverse_b = 0.0;
  double inverse_r_squared = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares fits over the points whose tau lies inside window (inclusive).
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points, std::pair<double, double> window);

struct CollapseCurve {
  std::size_t depth = 0;
  double tau = 0.0;
  /// t_m / tau at step midpoints.
  std::vector<double> x;
  /// (s_m - 1/2) tau
  std::vector<double> y;
};

/// Rescaled schedule of each angle set: s_m from the angles, dt_m from the
/// sum rule dt_m = beta_m + (1 - h) gamma_m.
std::vector<CollapseCurve> collapse_transform(const std::vector<QaoaAngles>& ladder, double h);

/// Max vertical distance between two curves on their common abscissa range,
/// both linearly interpolated.
double collapse_distance(const CollapseCurve& a, const CollapseCurve& b);

/// Same, with the abscissa range further restricted to window.
double collapse_distance(const CollapseCurve& a, const CollapseCurve& b, std::pair<double, double> window);

}  // namespace dqa
