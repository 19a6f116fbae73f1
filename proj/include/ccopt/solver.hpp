#pragma once

// Closed-form optimal caching decision.
//
// Minimizing the delivery rate subject to the placement-budget condition
// R_o <= R_p reduces to a two-constraint LP over the aggregate type
// fractions y_1..y_K:
//
//   max  sum t/(t+1) y_t
//   s.t. sum q_t y_t <= 1        (placement budget)
//        sum y_t     <= 1        (file partition)
//        y >= 0
//
// Which constraints can bind is decided entirely by where rho sits relative
// to the gamma thresholds, and the winning vertex by where alpha sits
// relative to the sigma thresholds. The solver below evaluates that case
// analysis directly; lp_oracle.hpp re-derives the same answer by brute
// force for cross-checking.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccopt/core.hpp"

namespace ccopt {

enum class RegimeTag {
  kCostLimited,          ///< q_1 > 1: only the budget constraint can bind
  kFreePlacement,        ///< q_K <= 1 (rho = 0): only the partition binds
  kArchitectureLimited,  ///< q_a <= 1 < q_{a+1}: both can bind
};

inline const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::kCostLimited: return "cost-limited";
    case RegimeTag::kFreePlacement: return "free-placement";
    case RegimeTag::kArchitectureLimited: return "architecture-limited";
  }
  return "?";
}

/// Regime of a configuration. a and b = a+1 are populated only for the
/// architecture-limited case: a is the largest type with q_a <= 1.
struct Regime {
  RegimeTag tag = RegimeTag::kFreePlacement;
  std::optional<int> a;
  std::optional<int> b;

  bool operator==(const Regime& o) const = default;
};

inline Regime classify_regime(const SystemConfig& cfg, const Thresholds& th) {
  const int k = cfg.users;
  int a = 0;
  while (a < k && th.q[static_cast<std::size_t>(a + 1)] <= 1.0 + kBoundaryTol) {
    ++a;  // q is increasing in t, so the first failure ends the scan
  }
  if (a == 0) return {RegimeTag::kCostLimited, {}, {}};
  if (a == k) return {RegimeTag::kFreePlacement, {}, {}};
  return {RegimeTag::kArchitectureLimited, a, a + 1};
}

inline Regime classify_regime(const SystemConfig& cfg) {
  return classify_regime(cfg, thresholds(cfg));
}

/// Best single caching type within the contiguous range lo..hi: the type t
/// whose alpha-interval [sigma_t, sigma_{t-1}) contains alpha, clamped to
/// the range ends. An alpha within kBoundaryTol of sigma_t is an exact
/// objective tie between t and t+1; the larger type wins it.
inline int optimal_type_single(const Thresholds& th, int lo, int hi,
                               double alpha) {
  if (lo < 1 || hi >= static_cast<int>(th.sigma.size()) || lo > hi) {
    throw std::invalid_argument("optimal_type_single: bad range");
  }
  for (int t = lo; t < hi; ++t) {
    if (th.sigma[static_cast<std::size_t>(t)] <= alpha - kBoundaryTol) {
      return t;
    }
  }
  return hi;
}

/// Full solution record: the allocation, how it was classified, which types
/// carry mass, the LP objective and both transmission rates.
struct OptimalSolution {
  TypeAllocation allocation;
  Regime regime;
  std::vector<int> support;  ///< ascending type indices with y_t > 0
  double objective = 0.0;
  double r_placement = 0.0;
  double r_delivery = 0.0;
};

namespace detail {

inline OptimalSolution finish_solution(const SystemConfig& cfg,
                                       std::vector<double> y,
                                       const Regime& regime) {
  // Guard against boundary-classification residue: q_a within tolerance of 1
  // can put a few ulps of negative mass on a type.
  double coded = 0.0;
  for (int t = 1; t <= cfg.users; ++t) {
    auto& v = y[static_cast<std::size_t>(t)];
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    coded += v;
  }
  y[0] = std::max(0.0, 1.0 - coded);

  TypeAllocation alloc(std::move(y));
  OptimalSolution sol{alloc, regime, {}, 0.0, 0.0, 0.0};
  for (int t = 0; t <= cfg.users; ++t) {
    if (alloc.y(t) > 0.0) sol.support.push_back(t);
  }
  sol.objective = objective_value(alloc);
  sol.r_placement = rate_placement(cfg, alloc);
  sol.r_delivery = rate_delivery_from_objective(cfg.users, sol.objective);
  return sol;
}

}  // namespace detail

/// Optimal caching decision for a configuration.
///
/// Free placement caches everything everywhere (y_K = 1). Cost-limited
/// configurations put mass on the single type selected by the sigma
/// intervals, sized so the placement budget is tight. Architecture-limited
/// configurations split between the straddling types a and a+1 when alpha
/// is large enough (both constraints tight) and otherwise fall back to a
/// single type from b..K. At an exact objective tie the solution with the
/// larger coded type is reported.
inline OptimalSolution solve(const SystemConfig& cfg) {
  const Thresholds th = thresholds(cfg);
  const Regime regime = classify_regime(cfg, th);
  const int k = cfg.users;
  std::vector<double> y(static_cast<std::size_t>(k) + 1, 0.0);

  switch (regime.tag) {
    case RegimeTag::kFreePlacement: {
      y[static_cast<std::size_t>(k)] = 1.0;
      break;
    }
    case RegimeTag::kCostLimited: {
      const int t = optimal_type_single(th, 1, k, cfg.alpha);
      y[static_cast<std::size_t>(t)] = 1.0 / th.q[static_cast<std::size_t>(t)];
      break;
    }
    case RegimeTag::kArchitectureLimited: {
      const int a = *regime.a;
      const int b = *regime.b;
      const double qa = th.q[static_cast<std::size_t>(a)];
      const double qb = th.q[static_cast<std::size_t>(b)];
      if (cfg.alpha > th.sigma[static_cast<std::size_t>(a)] + kBoundaryTol) {
        // Intersection of both constraints; alpha = sigma_a exactly would
        // tie with the single-type-b vertex, which the tie rule hands to
        // the branch below.
        y[static_cast<std::size_t>(a)] = (qb - 1.0) / (qb - qa);
        y[static_cast<std::size_t>(b)] = (1.0 - qa) / (qb - qa);
      } else {
        const int j = optimal_type_single(th, b, k, cfg.alpha);
        y[static_cast<std::size_t>(j)] =
            1.0 / th.q[static_cast<std::size_t>(j)];
      }
      break;
    }
  }
  return detail::finish_solution(cfg, std::move(y), regime);
}

/// Checks the contract every reported solution must satisfy: at most two
/// coded types, both LP constraints within tolerance, rates consistent
/// with the allocation and with each other. Throws std::logic_error with
/// a description of the first violation.
inline void validate_solution(const SystemConfig& cfg,
                              const OptimalSolution& sol) {
  const Thresholds th = thresholds(cfg);
  int coded = 0;
  double budget = 0.0;
  double partition = 0.0;
  for (int t = 1; t <= cfg.users; ++t) {
    const double yt = sol.allocation.y(t);
    if (yt > 0.0) ++coded;
    budget += th.q[static_cast<std::size_t>(t)] * yt;
    partition += yt;
  }
  if (coded > 2) throw std::logic_error("solution uses >2 coded types");
  if (budget > 1.0 + kBoundaryTol) {
    throw std::logic_error("placement-budget constraint violated");
  }
  if (partition > 1.0 + kBoundaryTol) {
    throw std::logic_error("partition constraint violated");
  }
  if (std::abs(sol.objective - objective_value(sol.allocation)) >
      16 * kSumTol) {
    throw std::logic_error("objective inconsistent with allocation");
  }
  if (std::abs(sol.r_delivery - rate_delivery(cfg, sol.allocation)) > 1e-9) {
    throw std::logic_error("delivery rate inconsistent with allocation");
  }
  if (sol.r_placement > sol.r_delivery + kBoundaryTol) {
    throw std::logic_error("placement rate exceeds delivery rate");
  }
}

/// True when caching whole files at every user (type K, uncoded delivery)
/// is optimal for every rho: alpha <= sigma_{K-1}.
inline bool uncoded_is_optimal(const SystemConfig& cfg) {
  if (cfg.users == 1) return true;  // types {0,1} = {0,K}
  const Thresholds th = thresholds(cfg);
  return cfg.alpha <=
         th.sigma[static_cast<std::size_t>(cfg.users - 1)] + kBoundaryTol;
}

/// Best allocation restricted to support {0, K}: the uncoded-delivery
/// baseline y_K = min(1, 1/q_K) that the caching gain is measured against.
inline OptimalSolution uncoded_baseline(const SystemConfig& cfg) {
  const Thresholds th = thresholds(cfg);
  const int k = cfg.users;
  std::vector<double> y(static_cast<std::size_t>(k) + 1, 0.0);
  y[static_cast<std::size_t>(k)] =
      std::min(1.0, 1.0 / th.q[static_cast<std::size_t>(k)]);
  return detail::finish_solution(cfg, std::move(y), classify_regime(cfg, th));
}

}  // namespace ccopt
