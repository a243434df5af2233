#pragma once

#include <vector>

#include "dqa/fermion_core.hpp"

namespace dqa {

struct Gradient {
  std::vector<double> d_gammas;
  std::vector<double> d_betas;

  std::vector<double> flatten() const;
  double norm() const;
};

struct ValueAndGradient {
  double eps_res = 0.0;
  /// eps_res minus the model constant; same gradient.
  double excess = 0.0;
  Gradient gradient;
};

/// Residual energy and its exact derivative with respect to every angle.
/// One forward sweep per mode stores the intermediate pseudo-spins; one
/// adjoint sweep back through the rotations accumulates all 2P derivatives.
ValueAndGradient value_and_gradient(const QaoaAngles& angles, const CostModel& model);
ValueAndGradient value_and_gradient(const QaoaAngles& angles, const ChainSpec& chain);

/// Central differences of the forward evaluator.
Gradient finite_diff_gradient(const QaoaAngles& angles, const ChainSpec& chain, double step);

}  // namespace dqa
