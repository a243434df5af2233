#pragma once

// Brute-force state-vector simulation of the circuit on a periodic chain.
// Basis states are z-basis bit strings with site 0 in the least significant
// bit; bit value 0 is spin up (sigma^z = +1).

#include <complex>
#include <stdexcept>
#include <vector>

#include "dqa/types.hpp"

namespace dqa {

using StateVector = std::vector<std::complex<double>>;

class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

constexpr int kMaxStateSites = 14;
/// Largest chain for which E_min/E_max are obtained by dense diagonalization.
constexpr int kMaxDenseSites = 12;

/// |psi_P> = prod_m e^{-i beta_m H_x} e^{-i gamma_m H_z} |+...+>.
StateVector qaoa_state(const QaoaAngles& angles, int n_sites);

/// Diagonal of H_z = sum_j s_j s_{j+1} (periodic).
std::vector<double> ising_diagonal(int n_sites);

double state_norm(const StateVector& psi);

/// <prod_j sigma^x_j>
double parity_expectation(const StateVector& psi, int n_sites);

/// <H_z + h H_x> with H_x = -sum_j sigma^x_j.
double target_energy(const StateVector& psi, int n_sites, double h);

/// Extreme eigenvalues of H_z + h H_x from dense diagonalization.
std::pair<double, double> target_spectrum_bounds(int n_sites, double h);

/// Residual energy of the simulated state. For h = 0 the bounds are the
/// analytic -N, +N of the unfrustrated even ring.
EnergyReport eps_res_ed(const QaoaAngles& angles, int n_sites, double h);

}  // namespace dqa
