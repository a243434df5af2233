#include "dqa/ed_oracle.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include <Eigen/Dense>

namespace dqa {

namespace {

void check_sites(int n_sites, int cap) {
  if (n_sites < 4 || n_sites % 2 != 0)
    throw std::invalid_argument("ed oracle: n_sites must be even and >= 4, got " + std::to_string(n_sites));
  if (n_sites > cap)
    throw ResourceLimitError("ed oracle: " + std::to_string(n_sites) + " sites exceeds the cap of " +
                             std::to_string(cap));
}

std::size_t dimension(int n_sites) { return std::size_t{1} << n_sites; }

}  // namespace

std::vector<double> ising_diagonal(int n_sites) {
  const std::size_t dim = dimension(n_sites);
  std::vector<double> diag(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    double e = 0.0;
    for (int j = 0; j < n_sites; ++j) {
      const int next = (j + 1) % n_sites;
      const double sj = ((i >> j) & 1U) ? -1.0 : 1.0;
      const double sn = ((i >> next) & 1U) ? -1.0 : 1.0;
      e += sj * sn;
    }
    diag[i] = e;
  }
  return diag;
}

StateVector qaoa_state(const QaoaAngles& angles, int n_sites) {
  angles.validate();
  check_sites(n_sites, kMaxStateSites);
  const std::size_t dim = dimension(n_sites);
  const std::vector<double> hz = ising_diagonal(n_sites);
  StateVector psi(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  const std::complex<double> i_unit(0.0, 1.0);

  for (std::size_t m = 0; m < angles.depth(); ++m) {
    const double gamma = angles.gammas[m];
    for (std::size_t i = 0; i < dim; ++i) psi[i] *= std::exp(-i_unit * (gamma * hz[i]));

    // e^{-i beta H_x} = prod_j (cos beta + i sin beta sigma^x_j)
    const double c = std::cos(angles.betas[m]);
    const std::complex<double> is = i_unit * std::sin(angles.betas[m]);
    for (int j = 0; j < n_sites; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const std::complex<double> a0 = psi[i];
        const std::complex<double> a1 = psi[i | bit];
        psi[i] = c * a0 + is * a1;
        psi[i | bit] = is * a0 + c * a1;
      }
    }
  }
  return psi;
}

double state_norm(const StateVector& psi) {
  double s = 0.0;
  for (const auto& a : psi) s += std::norm(a);
  return std::sqrt(s);
}

double parity_expectation(const StateVector& psi, int n_sites) {
  const std::size_t mask = dimension(n_sites) - 1;
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(psi[i]) * psi[i ^ mask];
  return s.real();
}

double target_energy(const StateVector& psi, int n_sites, double h) {
  const std::vector<double> hz = ising_diagonal(n_sites);
  double ez = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) ez += std::norm(psi[i]) * hz[i];
  if (h == 0.0) return ez;
  double sx = 0.0;
  for (int j = 0; j < n_sites; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t i = 0; i < psi.size(); ++i) sx += (std::conj(psi[i]) * psi[i ^ bit]).real();
  }
  return ez - h * sx;
}

std::pair<double, double> target_spectrum_bounds(int n_sites, double h) {
  check_sites(n_sites, kMaxDenseSites);
  const std::size_t dim = dimension(n_sites);
  const std::vector<double> hz = ising_diagonal(n_sites);
  Eigen::MatrixXd hamiltonian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    hamiltonian(r, r) = hz[i];
    for (int j = 0; j < n_sites; ++j) hamiltonian(r, static_cast<Eigen::Index>(i ^ (std::size_t{1} << j))) -= h;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

EnergyReport eps_res_ed(const QaoaAngles& angles, int n_sites, double h) {
  check_sites(n_sites, kMaxStateSites);
  const StateVector psi = qaoa_state(angles, n_sites);
  EnergyReport r;
  r.energy = target_energy(psi, n_sites, h);
  if (h == 0.0) {
    r.e_min = -n_sites;
    r.e_max = n_sites;
  } else {
    static std::mutex cache_mutex;
    static std::map<std::pair<int, double>, std::pair<double, double>> cache;
    std::lock_guard lock(cache_mutex);
    auto it = cache.find({n_sites, h});
    if (it == cache.end()) it = cache.emplace(std::pair{n_sites, h}, target_spectrum_bounds(n_sites, h)).first;
    std::tie(r.e_min, r.e_max) = it->second;
  }
  r.eps_res = (r.energy - r.e_min) / (r.e_max - r.e_min);
  return r;
}

}  // namespace dqa
