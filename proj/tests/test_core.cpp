#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ccopt/core.hpp"

using namespace ccopt;

namespace {

// Deterministic random feasible allocation: exponential weights normalized
// over types 0..K.
TypeAllocation random_allocation(int users, std::mt19937_64& rng) {
  std::vector<double> y(static_cast<std::size_t>(users) + 1);
  double sum = 0.0;
  for (auto& v : y) {
    const double u =
        (static_cast<double>(rng()) + 1.0) / 18446744073709551616.0;
    v = -std::log(u);
    sum += v;
  }
  double coded = 0.0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    y[t] /= sum;
    coded += y[t];
  }
  y[0] = 1.0 - coded;
  return TypeAllocation(y);
}

}  // namespace

TEST_CASE("binom small values and error paths") {
  CHECK(binom(5, 2) == 10);
  CHECK(binom(5, 0) == 1);
  CHECK(binom(8, 4) == 70);
  CHECK(binom(0, 0) == 1);
  CHECK(binom(64, 32) == 1832624140942590534ULL);
  CHECK_THROWS_AS(binom(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(binom(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(binom(65, 2), std::overflow_error);
}

TEST_CASE("binom satisfies Pascal's rule up to n = 64") {
  for (int n = 1; n <= 64; ++n) {
    for (int k = 1; k < n; ++k) {
      CHECK(binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k));
    }
  }
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(SystemConfig(1, 1, 0.0, 0.0));
  CHECK_NOTHROW(SystemConfig(5, 10, 1.0, 1.0));
  CHECK_THROWS_AS(SystemConfig(0, 5, 0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SystemConfig(5, 4, 0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SystemConfig(5, 10, -0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SystemConfig(5, 10, 1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SystemConfig(5, 10, 0.1, 1.5), std::invalid_argument);
  // The rho <= 1 bound is a modelling convention, not a mathematical one.
  CHECK_NOTHROW(SystemConfig(5, 10, 1.5, 0.5, /*allow_large_rho=*/true));
}

TEST_CASE("placement cost follows rho * r^alpha") {
  CHECK(placement_cost(SystemConfig(5, 10, 0.0, 0.5), 3) == 0.0);
  CHECK(placement_cost(SystemConfig(5, 10, 0.1, 1.0), 2) ==
        Catch::Approx(0.2).margin(1e-15));
  // Shared medium: alpha = 0 makes the cost independent of the fan-out.
  CHECK(placement_cost(SystemConfig(7, 10, 0.3, 0.0), 7) ==
        Catch::Approx(0.3).margin(1e-15));
  CHECK_THROWS_AS(placement_cost(SystemConfig(5, 10, 0.1, 0.5), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(placement_cost(SystemConfig(5, 10, 0.1, 0.5), 6),
                  std::invalid_argument);
}

TEST_CASE("allocation construction and per-subfile sizes") {
  const auto alloc = TypeAllocation::sparse(5, {{1, 0.5}, {2, 0.5}});
  CHECK(alloc.y(0) == 0.0);
  CHECK(alloc.x(1) == Catch::Approx(0.1).margin(1e-15));
  CHECK(alloc.x(2) == Catch::Approx(0.05).margin(1e-15));

  CHECK_THROWS_AS(TypeAllocation({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(TypeAllocation({1.2, -0.2}), std::invalid_argument);
  CHECK_THROWS_AS(TypeAllocation::sparse(3, {{4, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("placement rate examples") {
  const auto alloc = TypeAllocation::sparse(5, {{1, 0.5}, {2, 0.5}});
  CHECK(rate_placement(SystemConfig(5, 10, 0.0, 0.3), alloc) == 0.0);
  CHECK(rate_placement(SystemConfig(5, 10, 0.1, 1.0), alloc) ==
        Catch::Approx(1.5).margin(1e-12));
  const auto single = TypeAllocation::sparse(5, {{1, 5.0 / 6.0}});
  CHECK(rate_placement(SystemConfig(5, 10, 0.3, 0.9), single) ==
        Catch::Approx(2.5).margin(1e-12));
}

TEST_CASE("delivery rate examples") {
  const int k = 5;
  CHECK(rate_delivery(SystemConfig(k, 10, 0.1, 0.5),
                      TypeAllocation::sparse(k, {{k, 1.0}})) == 0.0);
  CHECK(rate_delivery(SystemConfig(k, 10, 0.1, 0.5),
                      TypeAllocation::sparse(k, {})) == Catch::Approx(5.0));
  CHECK(rate_delivery(SystemConfig(k, 10, 0.1, 0.5),
                      TypeAllocation::sparse(k, {{1, 0.5}, {2, 0.5}})) ==
        Catch::Approx(1.5).margin(1e-12));
}

TEST_CASE("delivery rate: direct sum agrees with the objective identity") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 12);
    const auto alloc = random_allocation(k, rng);
    const SystemConfig cfg(k, k, 0.2, 0.5);
    const double direct = rate_delivery(cfg, alloc);
    const double via_objective =
        rate_delivery_from_objective(k, objective_value(alloc));
    CHECK(std::abs(direct - via_objective) <= 1e-12 * (1.0 + k));
  }
}

TEST_CASE("threshold values for the worked configuration") {
  const auto th = thresholds(SystemConfig(5, 10, 0.1, 1.0));
  CHECK(th.gamma[0] == 1.0);
  CHECK(th.gamma[1] == Catch::Approx(0.2).margin(1e-15));
  CHECK(th.gamma[2] == Catch::Approx(0.05).margin(1e-15));
  CHECK(th.gamma[3] == Catch::Approx(1.0 / 60.0).margin(1e-15));
  CHECK(th.gamma[4] == Catch::Approx(0.005).margin(1e-15));
  CHECK(th.gamma[5] == 0.0);

  // sigma depends only on K.
  CHECK(th.sigma[0] == 1.0);
  CHECK(th.sigma[1] == Catch::Approx(0.415037499278843819).margin(1e-12));
  CHECK(th.sigma[2] == Catch::Approx(0.290488708648545223).margin(1e-12));
  CHECK(th.sigma[3] == Catch::Approx(0.224339739308533470).margin(1e-12));
  CHECK(th.sigma[4] == Catch::Approx(0.182940507488712669).margin(1e-12));
  CHECK(th.sigma[5] == 0.0);

  // q for the worked instance: q_t = t(t+7) / (5(t+1)).
  CHECK(th.q[1] == Catch::Approx(0.8).margin(1e-12));
  CHECK(th.q[2] == Catch::Approx(1.2).margin(1e-12));
  CHECK(std::isnan(th.q[0]));
}

TEST_CASE("threshold endpoints hold for arbitrary configurations") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 16);
    const int n = k + static_cast<int>(rng() % 20);
    const double rho = static_cast<double>(rng() % 1000) / 1000.0;
    const double alpha = static_cast<double>(rng() % 1000) / 999.0;
    const auto th = thresholds(SystemConfig(k, n, rho, alpha));
    CHECK(th.gamma[0] == 1.0);
    CHECK(th.sigma[0] == 1.0);
    CHECK(th.gamma[static_cast<std::size_t>(k)] == 0.0);
    CHECK(th.sigma[static_cast<std::size_t>(k)] == 0.0);
    for (int t = 1; t < k; ++t) {
      CHECK(th.gamma[static_cast<std::size_t>(t)] >
            th.gamma[static_cast<std::size_t>(t + 1)]);
    }
  }
}

TEST_CASE("q is strictly increasing and concave in t") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 3 + static_cast<int>(rng() % 14);
    const int n = k + static_cast<int>(rng() % 30);
    const double rho = 0.001 + static_cast<double>(rng() % 999) / 1000.0;
    const double alpha = static_cast<double>(rng() % 1000) / 999.0;
    const auto th = thresholds(SystemConfig(k, n, rho, alpha));
    for (int t = 1; t < k; ++t) {
      CHECK(th.q[static_cast<std::size_t>(t + 1)] >
            th.q[static_cast<std::size_t>(t)]);
    }
    for (int t = 2; t < k; ++t) {
      const double second = th.q[static_cast<std::size_t>(t + 1)] -
                            2.0 * th.q[static_cast<std::size_t>(t)] +
                            th.q[static_cast<std::size_t>(t - 1)];
      CHECK(second < 0.0);
    }
  }
}

TEST_CASE("threshold duality: q_t vs 1 mirrors rho vs gamma_t") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 12);
    const int n = k + static_cast<int>(rng() % 25);
    const double rho = static_cast<double>(rng() % 10000) / 10000.0;
    const double alpha = static_cast<double>(rng() % 1000) / 999.0;
    const auto th = thresholds(SystemConfig(k, n, rho, alpha));
    for (int t = 1; t <= k; ++t) {
      const double dq = th.q[static_cast<std::size_t>(t)] - 1.0;
      const double dg = rho - th.gamma[static_cast<std::size_t>(t)];
      if (std::abs(dq) <= 1e-12 || std::abs(dg) <= 1e-12) {
        // Boundary configuration: both sides must be at their crossing.
        CHECK(std::abs(dq) <= 1e-9);
        CHECK(std::abs(dg) <= 1e-9);
      } else {
        CHECK((dq > 0) == (dg > 0));
      }
    }
  }
}
