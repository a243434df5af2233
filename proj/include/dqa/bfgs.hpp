#pragma once

#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace dqa {

struct OptimOptions {
  double grad_tol = 1e-9;
  int max_iters = 10000;
  /// Sufficient-decrease constant of the strong Wolfe conditions.
  double c1 = 1e-4;
  /// Curvature constant of the strong Wolfe conditions.
  double c2 = 0.9;
  int max_line_search = 60;
  /// Cap on the first trial step (max-norm) before any curvature is known.
  double initial_step = 0.1;

  void validate() const;
};

/// Returns f(x) and writes the gradient into grad.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int n_iterations = 0;
  int n_evaluations = 0;
  bool converged = false;
};

/// Raised when the objective returns a non-finite value or gradient.
/// Carries the last iterate at which everything was finite.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, Eigen::VectorXd last_good, double last_value)
      : std::runtime_error(what), last_good_(std::move(last_good)), last_value_(last_value) {}
  const Eigen::VectorXd& last_good() const { return last_good_; }
  double last_value() const { return last_value_; }

 private:
  Eigen::VectorXd last_good_;
  double last_value_;
};

/// Dense inverse-Hessian BFGS with a strong Wolfe line search.
BfgsResult bfgs_minimize(const Objective& objective, const Eigen::VectorXd& x0, const OptimOptions& opts);

}  // namespace dqa
