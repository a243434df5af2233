#include "dqa/gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace dqa {

std::vector<double> Gradient::flatten() const {
  std::vector<double> g(d_gammas);
  g.insert(g.end(), d_betas.begin(), d_betas.end());
  return g;
}

double Gradient::norm() const {
  double s = 0.0;
  for (double v : d_gammas) s += v * v;
  for (double v : d_betas) s += v * v;
  return std::sqrt(s);
}

ValueAndGradient value_and_gradient(const QaoaAngles& angles, const CostModel& model) {
  angles.validate();
  const std::size_t depth = angles.depth();
  const BlochVector z = BlochVector::unit_z();

  ValueAndGradient out;
  out.gradient.d_gammas.assign(depth, 0.0);
  out.gradient.d_betas.assign(depth, 0.0);

  // after_gamma[m] = state right after the coupling rotation of step m,
  // after_beta[m] = state right after the driver rotation of step m.
  std::vector<BlochVector> after_gamma(depth);
  std::vector<BlochVector> after_beta(depth);

  double sum = 0.0;
  for (std::size_t i = 0; i < model.wavevectors.size(); ++i) {
    const BlochVector b = BlochVector::coupling_axis(model.wavevectors[i]);
    BlochVector v = z;
    for (std::size_t m = 0; m < depth; ++m) {
      v = detail::rotate_unit(b, 4.0 * angles.gammas[m], v);
      after_gamma[m] = v;
      v = detail::rotate_unit(z, 4.0 * angles.betas[m], v);
      after_beta[m] = v;
    }
    sum += mode_term(v, model.targets[i], model.weights[i]);

    // d eps / d tau_final
    BlochVector adj = (v - model.targets[i]) * (model.scale * model.weights[i]);
    for (std::size_t m = depth; m-- > 0;) {
      // d/dtheta R(theta) v = axis x (R(theta) v)
      out.gradient.d_betas[m] += 4.0 * adj.dot(z.cross(after_beta[m]));
      adj = detail::rotate_unit(z, -4.0 * angles.betas[m], adj);
      out.gradient.d_gammas[m] += 4.0 * adj.dot(b.cross(after_gamma[m]));
      adj = detail::rotate_unit(b, -4.0 * angles.gammas[m], adj);
    }
  }
  out.excess = model.scale * sum;
  out.eps_res = model.constant + out.excess;
  return out;
}

ValueAndGradient value_and_gradient(const QaoaAngles& angles, const ChainSpec& chain) {
  angles.validate();
  return value_and_gradient(angles, make_cost_model(chain, angles.depth()));
}

Gradient finite_diff_gradient(const QaoaAngles& angles, const ChainSpec& chain, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_gradient: step must be positive");
  angles.validate();
  const CostModel model = make_cost_model(chain, angles.depth());
  Gradient g;
  g.d_gammas.resize(angles.depth());
  g.d_betas.resize(angles.depth());
  QaoaAngles probe = angles;
  for (std::size_t m = 0; m < angles.depth(); ++m) {
    probe.gammas[m] = angles.gammas[m] + step;
    const double gp = evaluate(model, probe);
    probe.gammas[m] = angles.gammas[m] - step;
    const double gm = evaluate(model, probe);
    probe.gammas[m] = angles.gammas[m];
    g.d_gammas[m] = (gp - gm) / (2.0 * step);

    probe.betas[m] = angles.betas[m] + step;
    const double bp = evaluate(model, probe);
    probe.betas[m] = angles.betas[m] - step;
    const double bm = evaluate(model, probe);
    probe.betas[m] = angles.betas[m];
    g.d_betas[m] = (bp - bm) / (2.0 * step);
  }
  return g;
}

}  // namespace dqa
