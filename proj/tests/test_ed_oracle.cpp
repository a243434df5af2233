#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dqa/ed_oracle.hpp"
#include "dqa/fermion_core.hpp"

using namespace dqa;

TEST_CASE("state vector values") {
  const auto r = eps_res_ed({{0.2, 0.45}, {0.6, 0.25}}, 8, 0.0);
  CHECK(r.eps_res == doctest::Approx(0.21673035276240932).epsilon(1e-12));
  CHECK(r.energy == doctest::Approx(-4.532314355801451).epsilon(1e-12));
  CHECK(r.e_min == -8.0);
  CHECK(r.e_max == 8.0);

  const auto f = eps_res_ed({{0.25, 0.35}, {0.55, 0.15}}, 6, 0.5);
  CHECK(f.eps_res == doctest::Approx(0.10742176758859014).epsilon(1e-12));
  CHECK(f.e_min == doctest::Approx(-6.38469456360367).epsilon(1e-12));
}

TEST_CASE("spectrum bounds") {
  const auto [lo0, hi0] = target_spectrum_bounds(8, 0.0);
  CHECK(lo0 == doctest::Approx(-8.0));
  CHECK(hi0 == doctest::Approx(8.0));

  // Free-fermion bounds -2 sum_k Lambda_k on the periodic k grid.
  const double h = 0.5;
  double sum = 0.0;
  for (double k : k_grid(Boundary::Periodic, 10)) sum += std::sqrt(1.0 + h * h + 2.0 * h * std::cos(k));
  const auto [lo, hi] = target_spectrum_bounds(10, h);
  CHECK(lo == doctest::Approx(-2.0 * sum).epsilon(1e-12));
  CHECK(hi == doctest::Approx(2.0 * sum).epsilon(1e-12));
}

TEST_CASE("Ising diagonal") {
  const auto d = ising_diagonal(4);
  CHECK(d[0] == 4.0);
  CHECK(d[0b0101] == -4.0);
  CHECK(d[0b0001] == 0.0);
}

TEST_CASE("norm and parity are conserved") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {4, 6, 8}) {
    QaoaAngles a = QaoaAngles::zeros(3);
    for (std::size_t m = 0; m < 3; ++m) {
      a.gammas[m] = u(rng);
      a.betas[m] = u(rng);
    }
    const StateVector psi = qaoa_state(a, n);
    CHECK(state_norm(psi) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(parity_expectation(psi, n) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("initial state energies") {
  const StateVector plus = qaoa_state(QaoaAngles::zeros(1), 6);
  CHECK(target_energy(plus, 6, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(target_energy(plus, 6, 1.0) == doctest::Approx(-6.0));
  CHECK(eps_res_ed(QaoaAngles::zeros(1), 6, 0.0).eps_res == doctest::Approx(0.5));
}

TEST_CASE("agreement with the pseudo-spin evaluator") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 2);
  for (double h : {0.0, 0.5}) {
    for (int n : {4, 6, 8}) {
      for (std::size_t p = 1; p <= 4; ++p) {
        QaoaAngles a = QaoaAngles::zeros(p);
        for (std::size_t m = 0; m < p; ++m) {
          a.gammas[m] = u(rng);
          a.betas[m] = u(rng);
        }
        const double fermion = cost(a, ChainSpec{n, h, Boundary::Periodic});
        CHECK(std::abs(fermion - eps_res_ed(a, n, h).eps_res) < 1e-10);
      }
    }
  }
}

TEST_CASE("resource limits") {
  CHECK_THROWS_AS(qaoa_state(QaoaAngles::zeros(1), kMaxStateSites + 2), ResourceLimitError);
  CHECK_THROWS_AS(target_spectrum_bounds(kMaxDenseSites + 2, 0.5), ResourceLimitError);
  CHECK_THROWS_AS(qaoa_state(QaoaAngles::zeros(1), 5), std::invalid_argument);
}
