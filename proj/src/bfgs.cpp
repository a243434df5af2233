#include "dqa/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace dqa {

void OptimOptions::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("OptimOptions: grad_tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("OptimOptions: max_iters must be >= 1");
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) throw std::invalid_argument("OptimOptions: need 0 < c1 < c2 < 1");
}

namespace {

struct Probe {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative along the search direction
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
};

class LineSearch {
 public:
  LineSearch(const Objective& f, const Eigen::VectorXd& x0, double f0, const Eigen::VectorXd& dir, double d0,
             const OptimOptions& opts, int& n_eval)
      : f_(f), x0_(x0), f0_(f0), dir_(dir), d0_(d0), opts_(opts), n_eval_(n_eval) {
    // Values closer than this to f0 are indistinguishable from rounding.
    noise_ = 1e-14 * std::abs(f0) + 1e-300;
  }

  std::optional<Probe> run(double alpha0) {
    Probe prev{0.0, f0_, d0_, x0_, {}};
    double alpha = alpha0;
    for (int i = 0; i < opts_.max_line_search; ++i) {
      Probe cur = probe(alpha);
      if (accept_approx(cur)) return cur;
      if (in_noise(cur)) {
        // Values carry no information; bracket on the slope alone.
        if (cur.slope > 0.0) return zoom(prev, cur);
      } else {
        if (!armijo(cur) || (i > 0 && cur.value >= prev.value)) return zoom(prev, cur);
        if (std::abs(cur.slope) <= -opts_.c2 * d0_) return cur;
        if (cur.slope >= 0.0) return zoom(cur, prev);
      }
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return best_;
  }

 private:
  Probe probe(double alpha) {
    Probe p;
    p.alpha = alpha;
    p.x = x0_ + alpha * dir_;
    p.grad.resize(x0_.size());
    p.value = f_(p.x, p.grad);
    ++n_eval_;
    if (!std::isfinite(p.value) || !p.grad.allFinite())
      throw NumericalFailure("non-finite objective or gradient during line search", x0_, f0_);
    p.slope = p.grad.dot(dir_);
    if (p.value < f0_ && (!best_ || p.value < best_->value)) best_ = p;
    return p;
  }

  bool in_noise(const Probe& p) const { return std::abs(p.value - f0_) <= noise_; }

  bool armijo(const Probe& p) const { return p.value <= f0_ + opts_.c1 * p.alpha * d0_; }

  bool strong_wolfe(const Probe& p) const { return armijo(p) && std::abs(p.slope) <= -opts_.c2 * d0_; }

  // Approximate Wolfe conditions: once the decrease is below rounding
  // noise, judge the step by its slope alone.
  bool accept_approx(const Probe& p) const {
    return in_noise(p) && p.slope >= opts_.c2 * d0_ &&
           p.slope <= (2.0 * opts_.c1 - 1.0) * d0_;
  }

  std::optional<Probe> zoom(Probe lo, Probe hi) {
    for (int i = 0; i < opts_.max_line_search; ++i) {
      const double a = std::min(lo.alpha, hi.alpha);
      const double b = std::max(lo.alpha, hi.alpha);
      double alpha = cubic_min(lo, hi);
      const double margin = 0.1 * (b - a);
      if (!std::isfinite(alpha) || alpha < a + margin || alpha > b - margin) alpha = 0.5 * (a + b);
      if (b - a < 1e-16 * std::max(1.0, b)) break;
      Probe cur = probe(alpha);
      if (accept_approx(cur)) return cur;
      if (in_noise(cur) && in_noise(lo)) {
        if ((cur.slope > 0.0) == (hi.alpha > lo.alpha)) {
          hi = std::move(cur);
        } else {
          lo = std::move(cur);
        }
      } else if (!armijo(cur) || cur.value >= lo.value) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -opts_.c2 * d0_) return cur;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    return best_;
  }

  // Minimizer of the cubic through (alpha, value, slope) at both ends.
  static double cubic_min(const Probe& p0, const Probe& p1) {
    const double d1 = p0.slope + p1.slope - 3.0 * (p0.value - p1.value) / (p0.alpha - p1.alpha);
    const double disc = d1 * d1 - p0.slope * p1.slope;
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double sign = p1.alpha > p0.alpha ? 1.0 : -1.0;
    const double d2 = sign * std::sqrt(disc);
    return p1.alpha - (p1.alpha - p0.alpha) * (p1.slope + d2 - d1) / (p1.slope - p0.slope + 2.0 * d2);
  }

  const Objective& f_;
  const Eigen::VectorXd& x0_;
  double f0_;
  const Eigen::VectorXd& dir_;
  double d0_;
  const OptimOptions& opts_;
  int& n_eval_;
  double noise_;
  std::optional<Probe> best_;
};

}  // namespace

BfgsResult bfgs_minimize(const Objective& objective, const Eigen::VectorXd& x0, const OptimOptions& opts) {
  opts.validate();
  const auto n = x0.size();
  BfgsResult r;
  r.x = x0;
  Eigen::VectorXd g(n);
  r.value = objective(r.x, g);
  r.n_evaluations = 1;
  if (!std::isfinite(r.value) || !g.allFinite())
    throw NumericalFailure("non-finite objective or gradient at the initial point", x0, r.value);
  r.grad_norm = g.norm();

  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
  bool identity = true;

  while (r.grad_norm > opts.grad_tol && r.n_iterations < opts.max_iters) {
    Eigen::VectorXd dir = -inv_hessian * g;
    double d0 = g.dot(dir);
    if (!(d0 < 0.0)) {
      inv_hessian.setIdentity();
      identity = true;
      dir = -g;
      d0 = g.dot(dir);
    }
    double alpha0 = 1.0;
    if (identity) alpha0 = std::min(1.0, opts.initial_step / dir.lpNorm<Eigen::Infinity>());

    LineSearch search(objective, r.x, r.value, dir, d0, opts, r.n_evaluations);
    std::optional<Probe> step = search.run(alpha0);
    if (!step) {
      if (identity) break;  // no descent even along -g
      inv_hessian.setIdentity();
      identity = true;
      continue;
    }

    const Eigen::VectorXd s = step->x - r.x;
    const Eigen::VectorXd y = step->grad - g;
    r.x = std::move(step->x);
    r.value = step->value;
    g = std::move(step->grad);
    r.grad_norm = g.norm();
    ++r.n_iterations;

    const double ys = y.dot(s);
    if (ys > 1e-300 && ys > 1e-12 * y.norm() * s.norm()) {
      if (identity) inv_hessian *= ys / y.squaredNorm();
      const double rho = 1.0 / ys;
      const Eigen::VectorXd hy = inv_hessian * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded
      inv_hessian += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
      identity = false;
    }
  }
  r.converged = r.grad_norm <= opts.grad_tol;
  return r;
}

}  // namespace dqa
