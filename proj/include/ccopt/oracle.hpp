#pragma once

// Brute-force ground truth for the reduced LP. With only two non-trivial
// constraints every corner point of the feasible region is the origin, a
// single-type point where one constraint binds, or the intersection of
// both constraints restricted to a pair of types — so the optimum can be
// found by enumerating all O(K^2) of them and taking the best feasible
// one. Nothing here shares logic with the closed-form solver.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccopt/core.hpp"
#include "ccopt/solver.hpp"

namespace ccopt {

enum class VertexKind { kOrigin, kSingleType, kPairIntersection };

/// A candidate corner point of the reduced LP.
struct Vertex {
  VertexKind kind = VertexKind::kOrigin;
  std::vector<int> types;      ///< zero, one, or two type indices
  std::vector<double> values;  ///< matching y entries
  double objective = 0.0;
  bool feasible = false;
};

/// All corner points: the origin, K single-type vertices with
/// y_t = min(1, 1/q_t), and the C(K,2) pairwise constraint intersections
/// (marked infeasible unless both solved values are strictly positive).
inline std::vector<Vertex> enumerate_vertices(const SystemConfig& cfg) {
  const Thresholds th = thresholds(cfg);
  const int k = cfg.users;
  std::vector<Vertex> out;
  out.reserve(1 + static_cast<std::size_t>(k) +
              static_cast<std::size_t>(k) * (k - 1) / 2);

  out.push_back({VertexKind::kOrigin, {}, {}, 0.0, true});

  auto coeff = [](int t) { return static_cast<double>(t) / (t + 1); };

  for (int t = 1; t <= k; ++t) {
    const double qt = th.q[static_cast<std::size_t>(t)];
    const double yt = std::min(1.0, 1.0 / qt);
    out.push_back(
        {VertexKind::kSingleType, {t}, {yt}, coeff(t) * yt, true});
  }

  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      const double qi = th.q[static_cast<std::size_t>(i)];
      const double qj = th.q[static_cast<std::size_t>(j)];
      Vertex v{VertexKind::kPairIntersection, {i, j}, {0.0, 0.0}, 0.0, false};
      if (std::abs(qj - qi) > 1e-12) {  // parallel constraints cannot give
        const double yi = (qj - 1.0) / (qj - qi);  // two positive values
        const double yj = (1.0 - qi) / (qj - qi);
        v.values = {yi, yj};
        if (yi > 0.0 && yj > 0.0) {
          v.feasible = true;
          v.objective = coeff(i) * yi + coeff(j) * yj;
        }
      }
      out.push_back(v);
    }
  }
  return out;
}

namespace detail {

// Tie key: larger maximum coded type wins, then larger minimum type
// (a single-type vertex beats the pair that shares its top type). Matches
// the closed form's boundary conventions.
inline std::pair<int, int> tie_key(const Vertex& v) {
  if (v.types.empty()) return {-1, -1};
  return {v.types.back(), v.types.front()};
}

}  // namespace detail

/// Exhaustive maximization over the vertex list, reported in the same form
/// as the closed-form solver.
inline OptimalSolution oracle_solve(const SystemConfig& cfg) {
  const auto vertices = enumerate_vertices(cfg);
  const Vertex* best = nullptr;
  for (const auto& v : vertices) {
    if (!v.feasible) continue;
    if (best == nullptr || v.objective > best->objective + kSumTol ||
        (v.objective > best->objective - kSumTol &&
         detail::tie_key(v) > detail::tie_key(*best))) {
      best = &v;
    }
  }
  // The origin is always feasible, so best is never null.
  std::vector<double> y(static_cast<std::size_t>(cfg.users) + 1, 0.0);
  for (std::size_t i = 0; i < best->types.size(); ++i) {
    y[static_cast<std::size_t>(best->types[i])] = best->values[i];
  }
  return detail::finish_solution(cfg, std::move(y), classify_regime(cfg));
}

/// Vertex-set checks of the three structural claims behind the two-type
/// solution, for architecture-limited configurations:
///  (i)  with the lower pair index fixed at any i <= a, the best upper
///       index is b,
///  (ii) with the upper index fixed at any j >= b, the best lower index
///       is a,
///  (iii) the (a,b) intersection beats parking everything on type a.
struct ClaimsReport {
  bool best_upper_is_b = false;
  bool best_lower_is_a = false;
  bool pair_beats_single_a = false;
  bool all() const {
    return best_upper_is_b && best_lower_is_a && pair_beats_single_a;
  }
};

inline ClaimsReport check_claims(const SystemConfig& cfg) {
  const Regime regime = classify_regime(cfg);
  if (regime.tag != RegimeTag::kArchitectureLimited) {
    throw std::invalid_argument(
        "check_claims: configuration is not architecture-limited");
  }
  const int a = *regime.a;
  const int b = *regime.b;
  const auto vertices = enumerate_vertices(cfg);

  auto pair_objective = [&](int i, int j) -> double {
    for (const auto& v : vertices) {
      if (v.kind == VertexKind::kPairIntersection && v.types[0] == i &&
          v.types[1] == j) {
        return v.feasible ? v.objective : -1.0;
      }
    }
    return -1.0;
  };

  ClaimsReport rep;
  rep.best_upper_is_b = true;
  rep.best_lower_is_a = true;
  for (int i = 1; i <= a; ++i) {
    const double at_b = pair_objective(i, b);
    for (int j = b; j <= cfg.users; ++j) {
      if (pair_objective(i, j) > at_b + kSumTol) rep.best_upper_is_b = false;
    }
  }
  for (int j = b; j <= cfg.users; ++j) {
    const double at_a = pair_objective(a, j);
    for (int i = 1; i <= a; ++i) {
      if (pair_objective(i, j) > at_a + kSumTol) rep.best_lower_is_a = false;
    }
  }

  // f(1,0) = a/(a+1) vs f(y_a~, y_b~). Strictness is only meaningful while
  // the intersection is genuinely two-typed; at rho = gamma_a it collapses
  // onto the single-type point and the comparison degenerates to equality.
  const double single_a = static_cast<double>(a) / (a + 1);
  const double at_pair = pair_objective(a, b);
  double yb_mass = 0.0;
  for (const auto& v : vertices) {
    if (v.kind == VertexKind::kPairIntersection && v.types[0] == a &&
        v.types[1] == b && v.feasible) {
      yb_mass = v.values[1];
    }
  }
  if (yb_mass > kBoundaryTol) {
    rep.pair_beats_single_a = at_pair > single_a;
  } else {
    rep.pair_beats_single_a = at_pair >= single_a - kSumTol;
  }
  return rep;
}

}  // namespace ccopt
