#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "ccopt/solver.hpp"
#include "ccopt/sweep.hpp"

using namespace ccopt;

namespace {

std::set<int> coded_support(const OptimalSolution& sol) {
  std::set<int> s(sol.support.begin(), sol.support.end());
  s.erase(0);
  return s;
}

}  // namespace

TEST_CASE("regime classification for the worked configurations") {
  CHECK(classify_regime(SystemConfig(5, 10, 0.3, 0.5)).tag ==
        RegimeTag::kCostLimited);
  CHECK(classify_regime(SystemConfig(5, 10, 0.0, 0.5)).tag ==
        RegimeTag::kFreePlacement);
  const auto arch = classify_regime(SystemConfig(5, 10, 0.1, 1.0));
  CHECK(arch.tag == RegimeTag::kArchitectureLimited);
  CHECK(*arch.a == 1);
  CHECK(*arch.b == 2);
}

TEST_CASE("q_1 = 1 exactly classifies as architecture-limited with a = 1") {
  // gamma_1 = (K-1)/(2N) is independent of alpha: 0.2 for K=5, N=10.
  const auto r = classify_regime(SystemConfig(5, 10, 0.2, 0.7));
  CHECK(r.tag == RegimeTag::kArchitectureLimited);
  CHECK(*r.a == 1);
  CHECK(*r.b == 2);
}

TEST_CASE("cost-limited boundary is rho = (K-1)/(2N)") {
  const double edge = 4.0 / 20.0;
  CHECK(classify_regime(SystemConfig(5, 10, edge + 1e-6, 0.3)).tag ==
        RegimeTag::kCostLimited);
  CHECK(classify_regime(SystemConfig(5, 10, edge - 1e-6, 0.3)).tag ==
        RegimeTag::kArchitectureLimited);
}

TEST_CASE("single-type selection by the sigma intervals") {
  const auto th = thresholds(SystemConfig(5, 10, 0.3, 0.5));
  CHECK(optimal_type_single(th, 1, 5, 0.9) == 1);
  CHECK(optimal_type_single(th, 1, 5, 0.25) == 3);
  CHECK(optimal_type_single(th, 1, 5, 0.1) == 5);
  // Clamping for ranges that do not start at 1 or end at K.
  CHECK(optimal_type_single(th, 2, 5, 0.9) == 2);
  CHECK(optimal_type_single(th, 1, 4, 0.01) == 4);
  CHECK_THROWS_AS(optimal_type_single(th, 0, 5, 0.5), std::invalid_argument);
}

TEST_CASE("alpha = 1 selects type 1 despite the half-open top interval") {
  const SystemConfig cfg(5, 10, 0.3, 1.0);
  const auto sol = solve(cfg);
  CHECK(coded_support(sol) == std::set<int>{1});
}

TEST_CASE("worked instance: two-type split at K=5, N=10, rho=0.1, alpha=1") {
  const SystemConfig cfg(5, 10, 0.1, 1.0);
  const auto sol = solve(cfg);
  validate_solution(cfg, sol);
  CHECK(sol.regime.tag == RegimeTag::kArchitectureLimited);
  CHECK(sol.allocation.y(1) == Catch::Approx(0.5).margin(1e-9));
  CHECK(sol.allocation.y(2) == Catch::Approx(0.5).margin(1e-9));
  CHECK(sol.allocation.y(0) == Catch::Approx(0.0).margin(1e-9));
  CHECK(sol.r_delivery == Catch::Approx(1.5).margin(1e-9));
  CHECK(sol.r_placement == Catch::Approx(1.5).margin(1e-9));
  CHECK(sol.objective == Catch::Approx(7.0 / 12.0).margin(1e-12));
  // Both constraints are tight at a genuine two-type solution.
  const auto th = thresholds(cfg);
  const double budget = th.q[1] * sol.allocation.y(1) +
                        th.q[2] * sol.allocation.y(2);
  CHECK(budget == Catch::Approx(1.0).margin(1e-9));
  CHECK(sol.allocation.y(1) + sol.allocation.y(2) ==
        Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("worked instance: free placement caches everything") {
  for (double alpha : {0.0, 0.4, 1.0}) {
    const SystemConfig cfg(5, 10, 0.0, alpha);
    const auto sol = solve(cfg);
    CHECK(sol.regime.tag == RegimeTag::kFreePlacement);
    CHECK(sol.allocation.y(5) == Catch::Approx(1.0).margin(1e-12));
    CHECK(sol.r_delivery == Catch::Approx(0.0).margin(1e-12));
    CHECK(sol.r_placement == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("worked instance: cost-limited single type at rho=0.3, alpha=0.9") {
  const SystemConfig cfg(5, 10, 0.3, 0.9);
  const auto sol = solve(cfg);
  validate_solution(cfg, sol);
  CHECK(sol.regime.tag == RegimeTag::kCostLimited);
  CHECK(sol.allocation.y(1) == Catch::Approx(5.0 / 6.0).margin(1e-9));
  CHECK(sol.allocation.y(0) == Catch::Approx(1.0 / 6.0).margin(1e-9));
  CHECK(sol.r_delivery == Catch::Approx(2.5).margin(1e-9));
  CHECK(sol.r_placement == Catch::Approx(2.5).margin(1e-9));
}

TEST_CASE("frozen instance: two-type split at K=8, N=20, rho=0.05, alpha=0.8") {
  const SystemConfig cfg(8, 20, 0.05, 0.8);
  const auto sol = solve(cfg);
  CHECK(sol.regime.tag == RegimeTag::kArchitectureLimited);
  CHECK(*sol.regime.a == 2);
  CHECK(*sol.regime.b == 3);
  CHECK(sol.allocation.y(2) ==
        Catch::Approx(0.817306774825362328).margin(1e-12));
  CHECK(sol.allocation.y(3) ==
        Catch::Approx(0.182693225174637672).margin(1e-12));
  CHECK(sol.objective == Catch::Approx(0.681891102097886473).margin(1e-12));
  CHECK(sol.r_delivery == Catch::Approx(1.86298008111902175).margin(1e-11));
  CHECK(sol.r_placement == Catch::Approx(1.86298008111902175).margin(1e-11));
}

TEST_CASE("degenerate K=1: cost-limited for any rho > 0") {
  const SystemConfig cfg(1, 1, 0.5, 0.0);
  const auto sol = solve(cfg);
  CHECK(sol.regime.tag == RegimeTag::kCostLimited);
  CHECK(sol.allocation.y(1) == Catch::Approx(2.0 / 3.0).margin(1e-12));
  CHECK(sol.objective == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(solve(SystemConfig(1, 3, 0.0, 0.9)).regime.tag ==
        RegimeTag::kFreePlacement);
}

TEST_CASE("uncoded-optimality corollary predicate") {
  CHECK(uncoded_is_optimal(SystemConfig(5, 10, 0.3, 0.1)));
  CHECK_FALSE(uncoded_is_optimal(SystemConfig(5, 10, 0.3, 0.5)));
  CHECK(uncoded_is_optimal(SystemConfig(2, 4, 0.3, 0.0)));
  CHECK(uncoded_is_optimal(SystemConfig(1, 2, 0.7, 1.0)));
  // The boundary alpha = sigma_{K-1} itself is uncoded-optimal.
  const auto th = thresholds(SystemConfig(5, 10, 0.1, 0.5));
  CHECK(uncoded_is_optimal(SystemConfig(5, 10, 0.1, th.sigma[4])));
}

TEST_CASE("uncoded_is_optimal implies support within {0, K}") {
  for (int k = 2; k <= 8; ++k) {
    const int n = 2 * k;
    const auto sig = thresholds(SystemConfig(k, n, 0.1, 0.5)).sigma;
    for (int ai = 0; ai <= 20; ++ai) {
      const double alpha = sig[static_cast<std::size_t>(k - 1)] * ai / 20.0;
      for (int ri = 0; ri <= 20; ++ri) {
        const double rho = 0.5 * ri / 20.0;
        const SystemConfig cfg(k, n, rho, alpha);
        REQUIRE(uncoded_is_optimal(cfg));
        const auto s = coded_support(solve(cfg));
        INFO("K=" << k << " rho=" << rho << " alpha=" << alpha);
        CHECK((s.empty() || s == std::set<int>{k}));
      }
    }
  }
}

TEST_CASE("exact sigma boundary ties prefer the larger coded type") {
  // In the cost-limited regime types t and t+1 have equal objective value
  // exactly at alpha = sigma_t.
  const SystemConfig probe(5, 10, 0.3, 0.5);
  const auto th = thresholds(probe);
  for (int t = 1; t <= 4; ++t) {
    const SystemConfig cfg(5, 10, 0.3, th.sigma[static_cast<std::size_t>(t)]);
    const auto sol = solve(cfg);
    CHECK(coded_support(sol) == std::set<int>{t + 1});
  }
}

TEST_CASE("solution invariants on a dense (rho, alpha) grid") {
  for (int k = 2; k <= 8; ++k) {
    const int n = 2 * k;
    for (int ri = 0; ri < 100; ++ri) {
      for (int ai = 0; ai < 100; ++ai) {
        const double rho = 1.0 * ri / 99.0;
        const double alpha = 1.0 * ai / 99.0;
        const SystemConfig cfg(k, n, rho, alpha);
        const auto sol = solve(cfg);
        REQUIRE_NOTHROW(validate_solution(cfg, sol));
        REQUIRE(coded_support(sol).size() <= 2);
        // Two coded types force both constraints tight.
        if (coded_support(sol).size() == 2) {
          const auto th = thresholds(cfg);
          double budget = 0.0;
          double mass = 0.0;
          for (int t = 1; t <= k; ++t) {
            budget += th.q[static_cast<std::size_t>(t)] * sol.allocation.y(t);
            mass += sol.allocation.y(t);
          }
          REQUIRE(budget == Catch::Approx(1.0).margin(1e-9));
          REQUIRE(mass == Catch::Approx(1.0).margin(1e-9));
        }
      }
    }
  }
}

TEST_CASE("optimal coded type never increases as rho grows") {
  const int k = 5;
  const int n = 10;
  for (int ai = 0; ai <= 10; ++ai) {
    const double alpha = ai / 10.0;
    int prev = k + 1;
    for (int ri = 0; ri <= 400; ++ri) {
      const double rho = ri / 400.0;
      const auto sol = solve(SystemConfig(k, n, rho, alpha));
      const int dom = dominant_type(sol.allocation);
      INFO("alpha=" << alpha << " rho=" << rho);
      CHECK(dom <= prev);
      prev = dom;
    }
  }
}
