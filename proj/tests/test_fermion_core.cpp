#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dqa/fermion_core.hpp"

using namespace dqa;

namespace {

QaoaAngles random_set(std::size_t p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 2.0);
  QaoaAngles a = QaoaAngles::zeros(p);
  for (std::size_t m = 0; m < p; ++m) {
    a.gammas[m] = u(rng);
    a.betas[m] = u(rng);
  }
  return a;
}

const ChainSpec kChain8{8, 0.0, Boundary::Periodic};

}  // namespace

TEST_CASE("k grids") {
  const auto pbc = k_grid(Boundary::Periodic, 8);
  REQUIRE(pbc.size() == 4);
  CHECK(pbc[0] == doctest::Approx(std::numbers::pi / 8));
  CHECK(pbc[3] == doctest::Approx(7 * std::numbers::pi / 8));

  const auto abc = k_grid(Boundary::AntiPeriodic, 8);
  REQUIRE(abc.size() == 3);
  CHECK(abc[0] == doctest::Approx(std::numbers::pi / 4));
  CHECK(abc[2] == doctest::Approx(3 * std::numbers::pi / 4));

  CHECK_THROWS_AS(k_grid(Boundary::Periodic, 7), std::invalid_argument);
  CHECK_THROWS_AS(k_grid(Boundary::Periodic, 2), std::invalid_argument);
}

TEST_CASE("rotation") {
  const BlochVector x{1, 0, 0};
  const BlochVector r = rotate(BlochVector::unit_z(), std::numbers::pi / 2, x);
  CHECK(r.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.y == doctest::Approx(1.0));
  CHECK_THROWS_AS(rotate(BlochVector{0, 0, 2}, 0.1, x), std::invalid_argument);
}

TEST_CASE("zero circuit leaves every mode at z") {
  const auto eps = residual_energy(QaoaAngles::zeros(3), ChainSpec{64, 0.0, Boundary::Periodic});
  CHECK(eps.eps_res == doctest::Approx(0.5).epsilon(1e-14));
  const BlochVector t = propagate_mode(QaoaAngles::zeros(2), 0.7);
  CHECK(t.z == 1.0);
}

TEST_CASE("residual energy matches state-vector values") {
  // Independent dense simulation with matrix exponentials.
  CHECK(residual_energy({{0.3}, {0.7}}, kChain8).eps_res == doctest::Approx(0.4219444876797094).epsilon(1e-12));
  CHECK(residual_energy({{0.2, 0.45}, {0.6, 0.25}}, kChain8).eps_res ==
        doctest::Approx(0.21673035276240932).epsilon(1e-12));
  CHECK(residual_energy({{0.3, 0.4, 0.5, 0.6}, {0.2, 0.3, 0.1, 0.05}}, kChain8).eps_res ==
        doctest::Approx(0.30918654123842404).epsilon(1e-12));
}

TEST_CASE("energy expectation with a longitudinal field matches state-vector values") {
  const auto r = energy_expectation({{0.1, 0.5, 0.3}, {0.4, 0.2, 0.9}}, ChainSpec{8, 0.5, Boundary::Periodic}, 8);
  CHECK(r.eps_res == doctest::Approx(0.4327456894500551).epsilon(1e-12));
  CHECK(r.energy == doctest::Approx(-1.1445449182742888).epsilon(1e-12));
  CHECK(r.e_min == doctest::Approx(-8.509082235140273).epsilon(1e-12));
  CHECK(r.e_max == doctest::Approx(8.50908223514027).epsilon(1e-12));

  const auto s = energy_expectation({{0.25, 0.35}, {0.55, 0.15}}, ChainSpec{6, 0.5, Boundary::Periodic}, 6);
  CHECK(s.eps_res == doctest::Approx(0.10742176758859014).epsilon(1e-12));
}

TEST_CASE("single-step optimum sits on the bound 1/4") {
  const double a = std::numbers::pi / 8;
  CHECK(residual_energy({{a}, {a}}, ChainSpec{50, 0.0, Boundary::Periodic}).eps_res ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("residual energy rejects a field") {
  CHECK_THROWS_AS(residual_energy(QaoaAngles::zeros(1), ChainSpec{8, 0.5, Boundary::Periodic}),
                  std::invalid_argument);
}

TEST_CASE("properties over random circuits") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const std::size_t p = 1 + static_cast<std::size_t>(i % 12);
    const QaoaAngles a = random_set(p, rng);
    CAPTURE(i);

    for (double k : k_grid(Boundary::Periodic, 32)) {
      CHECK(std::abs(propagate_mode(a, k).norm() - 1.0) < 1e-13);
      const double e = epsilon_k(a, k);
      CHECK(e >= 0.0);
      CHECK(e <= 2.0 + 1e-15);
    }

    const double eps = residual_energy(a, ChainSpec{64, 0.0, Boundary::Periodic}).eps_res;
    CHECK(eps >= 1.0 / (2.0 * p + 2.0) - 1e-13);
    CHECK(eps <= 1.0 + 1e-15);

    // Size independence for 2P < N, and agreement of the reduced
    // anti-periodic chain with a long periodic ring.
    CHECK(residual_energy(a, ChainSpec{128, 0.0, Boundary::Periodic}).eps_res == doctest::Approx(eps).epsilon(1e-13));
    CHECK(evaluate(make_periodic_cost_model(0.0, 4 * static_cast<int>(p) + 8), a) ==
          doctest::Approx(eps).epsilon(1e-12));

    // Both rotation families are pi/2 periodic.
    QaoaAngles shifted = a;
    shifted.gammas[p - 1] += std::numbers::pi / 2;
    shifted.betas[0] -= std::numbers::pi / 2;
    CHECK(std::abs(cost(shifted, ChainSpec{64, 0.0, Boundary::Periodic}) - eps) < 1e-13);
  }
}

TEST_CASE("full periodic chain once 2P >= N") {
  const QaoaAngles a{{0.3, 0.4, 0.5, 0.6}, {0.2, 0.3, 0.1, 0.05}};
  const CostModel model = make_cost_model(kChain8, 4);
  CHECK_FALSE(model.reduced);
  CHECK(model.wavevectors.size() == 4);
  CHECK(make_cost_model(kChain8, 3).reduced);
  CHECK(evaluate(model, a) == doctest::Approx(0.30918654123842404).epsilon(1e-12));
}

TEST_CASE("digitize and the schedule sum rule") {
  const std::vector<double> s{0.125, 0.375, 0.625, 0.875};
  const std::vector<double> dt{1.0, 1.0, 1.0, 1.0};
  const QaoaAngles a = digitize(s, dt, 0.0);
  CHECK(a.gammas == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  CHECK(a.betas == std::vector<double>{0.875, 0.625, 0.375, 0.125});
  CHECK(schedule_duration(a, 0.0) == doctest::Approx(4.0));
  const auto back = schedule_values(a, 0.0);
  for (std::size_t m = 0; m < s.size(); ++m) CHECK(back[m] == doctest::Approx(s[m]));

  const QaoaAngles f = digitize(s, dt, 0.5);
  CHECK(schedule_duration(f, 0.5) == doctest::Approx(4.0));
  const auto back_f = schedule_values(f, 0.5);
  for (std::size_t m = 0; m < s.size(); ++m) CHECK(back_f[m] == doctest::Approx(s[m]));

  CHECK_THROWS_AS(digitize(std::vector<double>{0.0}, std::vector<double>{1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(digitize(std::vector<double>{0.5}, std::vector<double>{-1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(digitize(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("angle validation") {
  CHECK_THROWS_AS(QaoaAngles({0.1}, {0.1, 0.2}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(QaoaAngles({}, {}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(QaoaAngles({NAN}, {0.1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ChainSpec{7, 0.0, Boundary::Periodic}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ChainSpec{8, -0.1, Boundary::Periodic}).validate(), std::invalid_argument);
}
