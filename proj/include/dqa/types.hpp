#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace dqa {

enum class Boundary { Periodic, AntiPeriodic };

/// Variational parameters of a depth-P circuit. gammas[m] multiplies the
/// Ising coupling term, betas[m] the transverse driver, for step m+1.
struct QaoaAngles {
  std::vector<double> gammas;
  std::vector<double> betas;

  QaoaAngles() = default;
  QaoaAngles(std::vector<double> g, std::vector<double> b)
      : gammas(std::move(g)), betas(std::move(b)) {}

  static QaoaAngles zeros(std::size_t depth) {
    return {std::vector<double>(depth, 0.0), std::vector<double>(depth, 0.0)};
  }

  std::size_t depth() const { return gammas.size(); }

  /// Throws std::invalid_argument unless both sequences are equally long,
  /// non-empty and finite.
  void validate() const;

  /// Flattened (gamma_1..gamma_P, beta_1..beta_P).
  std::vector<double> flatten() const;
  static QaoaAngles unflatten(const std::vector<double>& x);

  friend bool operator==(const QaoaAngles&, const QaoaAngles&) = default;
};

/// Physical chain: N even sites, transverse field h >= 0.
struct ChainSpec {
  int n_sites = 4;
  double field = 0.0;
  Boundary boundary = Boundary::Periodic;

  void validate() const;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr BlochVector unit_z() { return {0.0, 0.0, 1.0}; }
  /// (-sin k, 0, cos k): axis of the coupling rotation for mode k.
  static BlochVector coupling_axis(double k) { return {-std::sin(k), 0.0, std::cos(k)}; }

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector cross(const BlochVector& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }

  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
  friend BlochVector operator*(double s, const BlochVector& v) { return v * s; }
};

struct EnergyReport {
  double energy = 0.0;
  double eps_res = 0.0;
  double e_min = 0.0;
  double e_max = 0.0;
};

}  // namespace dqa
