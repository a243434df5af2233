#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "dqa/optimizer.hpp"

using namespace dqa;

namespace {
const ChainSpec kChain50{50, 0.0, Boundary::Periodic};
constexpr double kHalfPi = std::numbers::pi / 2;
}  // namespace

TEST_CASE("bfgs on the Rosenbrock function") {
  const Objective rosen = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g.resize(2);
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  const auto r = bfgs_minimize(rosen, Eigen::Vector2d(-1.2, 1.0), OptimOptions{});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.n_iterations < 100);
}

TEST_CASE("bfgs reports non-finite objectives") {
  const Objective bad = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = Eigen::VectorXd::Ones(x.size());
    return x[0] < -0.05 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  };
  CHECK_THROWS_AS(bfgs_minimize(bad, Eigen::VectorXd::Zero(1), OptimOptions{}), NumericalFailure);
}

TEST_CASE("optimizer options are validated") {
  OptimOptions o;
  o.c2 = 1e-5;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = OptimOptions{};
  o.grad_tol = -1.0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
}

TEST_CASE("canonical angles") {
  const QaoaAngles c = canonicalize({{-0.1, kHalfPi + 0.3}, {std::numbers::pi, 0.2}});
  CHECK(c.gammas[0] == doctest::Approx(kHalfPi - 0.1));
  CHECK(c.gammas[1] == doctest::Approx(0.3));
  CHECK(c.betas[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.betas[1] == doctest::Approx(0.2));
  for (double v : c.flatten()) {
    CHECK(v >= 0.0);
    CHECK(v < kHalfPi);
  }
  CHECK(periodic_distance({{0.01}, {0.3}}, {{kHalfPi - 0.01}, {0.3}}) == doctest::Approx(0.02));
}

TEST_CASE("interpolation keeps both end steps") {
  const QaoaAngles a = interpolate_angles({{0.0, 1.0}, {1.0, 0.0}}, 3);
  CHECK(a.gammas[0] == 0.0);
  CHECK(a.gammas[1] == doctest::Approx(0.5));
  CHECK(a.gammas[2] == 1.0);
  CHECK(a.betas[1] == doctest::Approx(0.5));

  const QaoaAngles b = interpolate_angles({{0.2, 0.4, 0.8}, {0.1, 0.1, 0.1}}, 5);
  const std::vector<double> expected{0.2, 0.3, 0.4, 0.6, 0.8};
  for (std::size_t j = 0; j < 5; ++j) CHECK(b.gammas[j] == doctest::Approx(expected[j]));

  const QaoaAngles c = interpolate_angles({{0.3}, {0.6}}, 4);
  CHECK(c.gammas == std::vector<double>(4, 0.3));
  CHECK(c.betas == std::vector<double>(4, 0.6));
  CHECK_THROWS_AS(interpolate_angles({{0.3}, {0.6}}, 0), std::invalid_argument);
}

TEST_CASE("digitized linear start and regularity") {
  const QaoaAngles a = linear_initial_angles(3, 0.0);
  CHECK(a.gammas[0] == doctest::Approx(0.25));
  CHECK(a.betas[2] == doctest::Approx(0.25));
  CHECK(is_regular(a, 0.0));
  CHECK(is_regular({{0.2, 0.5}, {0.8, 0.5}}, 0.0));
  CHECK_FALSE(is_regular({{0.5, 0.2}, {0.5, 0.8}}, 0.0));
  CHECK_FALSE(is_regular({{0.3, 0.3}, {0.7, 0.7}}, 0.0));
}

TEST_CASE("single-step minimum") {
  const OptimResult r = minimize({{0.3}, {0.5}}, kChain50);
  CHECK(r.converged);
  CHECK(r.eps_res == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.grad_norm < 1e-9);
  const QaoaAngles c = canonicalize(r.angles);
  const double g = c.gammas[0], b = c.betas[0];
  const bool low = std::abs(g - std::numbers::pi / 8) < 1e-6 && std::abs(b - std::numbers::pi / 8) < 1e-6;
  const bool high = std::abs(g - 3 * std::numbers::pi / 8) < 1e-6 && std::abs(b - 3 * std::numbers::pi / 8) < 1e-6;
  CHECK((low || high));
  CHECK(variational_bound(1) == 0.25);
  CHECK(variational_bound(3) == 0.125);
}

TEST_CASE("incremental ladder saturates the bound") {
  std::vector<std::size_t> depths{1, 2, 3, 4, 5, 6};
  const auto ladder = optimize_ladder(depths, [](std::size_t) { return kChain50; });
  REQUIRE(ladder.size() == depths.size());
  for (const auto& level : ladder) {
    CAPTURE(level.result.depth());
    CHECK(level.result.converged);
    CHECK(std::abs(level.result.eps_res - variational_bound(level.result.depth())) < 1e-9);
    CHECK(is_regular(level.result.angles, 0.0));
    CHECK_FALSE(level.degraded);
  }
}

TEST_CASE("doubling ladder to P = 8") {
  const auto ladder = regular_schedule(8, ChainSpec{1024, 0.0, Boundary::Periodic});
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[0].tau == doctest::Approx(1.8987).epsilon(1e-4));
  CHECK(ladder[1].tau == doctest::Approx(4.3835).epsilon(1e-4));
  CHECK(ladder[2].tau == doctest::Approx(9.7642).epsilon(1e-4));

  const auto costs = cost_accounting(ladder);
  long cumulative = 0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    cumulative += costs[i].n_iterations;
    CHECK(costs[i].cumulative_iterations == cumulative);
    CHECK(costs[i].t_cc == static_cast<long>(costs[i].n_iterations) * static_cast<long>(costs[i].depth));
  }
}

TEST_CASE("zero residual once 2P >= N") {
  const ChainSpec chain{8, 0.0, Boundary::Periodic};
  const auto ladder = optimize_ladder({1, 2, 3, 4, 5}, [&](std::size_t) { return chain; });
  CHECK(ladder[3].result.eps_res < 1e-8);
  CHECK(ladder[4].result.eps_res < 1e-8);
}

TEST_CASE("degenerate minima, independent of the thread count") {
  const MinimaSet one = enumerate_minima(2, kChain50, 60, 7, 1e-4, {}, 1);
  const MinimaSet three = enumerate_minima(2, kChain50, 60, 7, 1e-4, {}, 3);
  CHECK(one.minima.size() == 4);
  REQUIRE(one.minima.size() == three.minima.size());
  for (std::size_t i = 0; i < one.minima.size(); ++i) {
    CHECK(one.minima[i].angles == three.minima[i].angles);
    CHECK(one.multiplicity[i] == three.multiplicity[i]);
    CHECK(std::abs(one.minima[i].eps_res - variational_bound(2)) < 1e-9);
  }
  int total = 0;
  for (int m : one.multiplicity) total += m;
  CHECK(total + one.n_dropped_local + one.n_dropped_unconverged == one.n_starts);
}

TEST_CASE("canonical form keeps the cost") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    QaoaAngles a = random_angles(5, seed);
    for (std::size_t m = 0; m < 5; ++m) {
      a.gammas[m] += static_cast<double>(seed % 3) * kHalfPi - 2.0 * kHalfPi;
      a.betas[m] += static_cast<double>(m) * kHalfPi;
    }
    const QaoaAngles c = canonicalize(a);
    CHECK(std::abs(cost(c, kChain50) - cost(a, kChain50)) < 1e-12);
    CHECK(canonicalize(c) == c);
  }
}

TEST_CASE("random angles are seeded") {
  CHECK(random_angles(4, 99) == random_angles(4, 99));
  CHECK_FALSE(random_angles(4, 99) == random_angles(4, 100));
}
