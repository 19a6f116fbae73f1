#pragma once

// Core problem model for coded caching with a priced placement phase:
// the system configuration (K users, N files, cost parameters rho/alpha),
// per-type caching allocations, the placement/delivery rate formulas and
// the threshold quantities the optimal-solution characterization is
// built from.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccopt {

/// Absolute tolerance for regime boundary comparisons ("q_t <= 1" and the
/// alpha-interval edges). Single knob so the closed form and the LP oracle
/// classify boundary configurations identically.
inline constexpr double kBoundaryTol = 1e-9;

/// Tolerance for exact-identity checks (allocation sums, algebraic
/// reformulations that must agree bit-for-bit up to rounding).
inline constexpr double kSumTol = 1e-12;

/// Largest n for which binomial coefficients are computed exactly in 64-bit
/// integers. C(64,32) still fits; beyond that we refuse rather than wrap.
inline constexpr int kMaxBinomN = 64;

/// C(n,k) in exact integer arithmetic.
/// Throws std::overflow_error when n exceeds kMaxBinomN and
/// std::invalid_argument when k > n or either argument is negative.
inline std::uint64_t binom(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("binom: require 0 <= k <= n");
  }
  if (n > kMaxBinomN) {
    throw std::overflow_error("binom: n > 64 would overflow 64-bit integers");
  }
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n-k+i) < 2^128 for n <= 64, and the division is exact:
    // after this step r == C(n-k+i, i).
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(r);
}

/// t^alpha for integer t >= 1. 1^alpha is 1 exactly; larger bases go through
/// exp(alpha*ln t) to sidestep pow()'s platform-dependent corner cases.
inline double pow_alpha(int t, double alpha) {
  if (t < 1) throw std::invalid_argument("pow_alpha: t must be >= 1");
  if (t == 1) return 1.0;
  return std::exp(alpha * std::log(static_cast<double>(t)));
}

/// Problem instance: a service provider with N files, K users with
/// unlimited caches, and a placement-phase transmission cost of
/// c_r = rho * r^alpha per unit sent to r users.
struct SystemConfig {
  int users = 0;     ///< K
  int files = 0;     ///< N, with K <= N
  double rho = 0.0;  ///< linear cost multiplier, in [0,1] unless overridden
  double alpha = 0.0;///< architecture cost exponent, in [0,1]

  /// allow_large_rho lifts the rho <= 1 range check; nothing in the math
  /// requires it, the bound is just the modelling convention.
  SystemConfig(int users_, int files_, double rho_, double alpha_,
               bool allow_large_rho = false)
      : users(users_), files(files_), rho(rho_), alpha(alpha_) {
    if (users < 1) throw std::invalid_argument("config: users must be >= 1");
    if (files < users) {
      throw std::invalid_argument("config: requires users <= files");
    }
    if (!(rho >= 0.0) || (!allow_large_rho && rho > 1.0)) {
      throw std::invalid_argument("config: rho outside [0,1]");
    }
    if (!(alpha >= 0.0) || alpha > 1.0) {
      throw std::invalid_argument("config: alpha outside [0,1]");
    }
  }
};

/// Placement cost per unit for a multicast to r users: c_r = rho * r^alpha.
inline double placement_cost(const SystemConfig& cfg, int r) {
  if (r < 1 || r > cfg.users) {
    throw std::invalid_argument("placement_cost: r outside 1..K");
  }
  if (cfg.rho == 0.0) return 0.0;
  return cfg.rho * pow_alpha(r, cfg.alpha);
}

/// Caching decision in aggregate form: y_t is the fraction of each file
/// occupied by all type-t subfiles combined (t users cache a type-t
/// subfile; type 0 is the reactive part, cached nowhere). Entries are
/// non-negative and sum to one.
class TypeAllocation {
 public:
  explicit TypeAllocation(std::vector<double> y) : y_(std::move(y)) {
    if (y_.size() < 2) {
      throw std::invalid_argument("allocation: need entries for types 0..K");
    }
    double sum = 0.0;
    for (double v : y_) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("allocation: negative entry");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 16 * kSumTol) {
      throw std::invalid_argument("allocation: entries must sum to 1, got " +
                                  std::to_string(sum));
    }
  }

  /// Builds an allocation for K users from (type, value) pairs; whatever
  /// mass is unassigned goes to the reactive type 0.
  static TypeAllocation sparse(
      int users, const std::vector<std::pair<int, double>>& entries) {
    std::vector<double> y(static_cast<std::size_t>(users) + 1, 0.0);
    double assigned = 0.0;
    for (const auto& [t, v] : entries) {
      if (t < 0 || t > users) {
        throw std::invalid_argument("allocation: type outside 0..K");
      }
      y[static_cast<std::size_t>(t)] += v;
      assigned += v;
    }
    y[0] += 1.0 - assigned;
    if (y[0] < 0.0 && y[0] > -kSumTol) y[0] = 0.0;
    return TypeAllocation(std::move(y));
  }

  int users() const { return static_cast<int>(y_.size()) - 1; }
  double y(int t) const { return y_.at(static_cast<std::size_t>(t)); }
  const std::vector<double>& raw() const { return y_; }

  /// Per-subfile size x_t = y_t / C(K,t).
  double x(int t) const {
    return y(t) / static_cast<double>(binom(users(), t));
  }

 private:
  std::vector<double> y_;
};

/// Placement-phase rate R_o = N * sum_t c_t y_t, in multiples of one file.
inline double rate_placement(const SystemConfig& cfg,
                             const TypeAllocation& alloc) {
  if (alloc.users() != cfg.users) {
    throw std::invalid_argument("rate_placement: K mismatch");
  }
  if (cfg.rho == 0.0) return 0.0;
  double s = 0.0;
  for (int t = 1; t <= cfg.users; ++t) {
    s += placement_cost(cfg, t) * alloc.y(t);
  }
  return cfg.files * s;
}

/// LP objective sum_{t>=1} t/(t+1) * y_t. The delivery rate is an affine
/// function of this value.
inline double objective_value(const TypeAllocation& alloc) {
  double s = 0.0;
  for (int t = 1; t <= alloc.users(); ++t) {
    s += static_cast<double>(t) / (t + 1) * alloc.y(t);
  }
  return s;
}

/// Delivery-phase rate, direct form: R_p = sum_{t=0..K-1} (K-t)/(t+1) y_t.
inline double rate_delivery(const SystemConfig& cfg,
                            const TypeAllocation& alloc) {
  if (alloc.users() != cfg.users) {
    throw std::invalid_argument("rate_delivery: K mismatch");
  }
  const int k = cfg.users;
  double s = 0.0;
  for (int t = 0; t < k; ++t) {
    s += static_cast<double>(k - t) / (t + 1) * alloc.y(t);
  }
  return s;
}

/// Delivery rate recovered from the LP objective: R_p = K - (K+1)*objective.
/// Algebraically identical to rate_delivery for any unit-sum allocation.
inline double rate_delivery_from_objective(int users, double objective) {
  return users - (users + 1) * objective;
}

/// The three threshold families of the optimal-solution characterization:
///  - gamma_t: the rho value at which the constraint coefficient q_t
///    crosses 1 (q_t <= 1 iff rho <= gamma_t),
///  - sigma_t: the alpha boundary between adjacent optimal single types,
///  - q_t: the placement-budget constraint coefficients themselves.
/// gamma and sigma are indexed 0..K; q is only defined for t = 1..K and
/// holds NaN at index 0.
struct Thresholds {
  std::vector<double> gamma;
  std::vector<double> sigma;
  std::vector<double> q;
};

inline Thresholds thresholds(const SystemConfig& cfg) {
  const int k = cfg.users;
  const double n = cfg.files;
  Thresholds th;
  th.gamma.assign(static_cast<std::size_t>(k) + 1, 0.0);
  th.sigma.assign(static_cast<std::size_t>(k) + 1, 0.0);
  th.q.assign(static_cast<std::size_t>(k) + 1,
              std::numeric_limits<double>::quiet_NaN());

  th.gamma[0] = 1.0;
  th.sigma[0] = 1.0;
  for (int t = 1; t <= k; ++t) {
    th.gamma[static_cast<std::size_t>(t)] =
        (k - t) / (pow_alpha(t, cfg.alpha) * (t + 1) * n);
    const double ct = cfg.rho * pow_alpha(t, cfg.alpha);
    th.q[static_cast<std::size_t>(t)] =
        (ct * n * (t + 1) + t * (k + 1)) / (static_cast<double>(k) * (t + 1));
  }
  // sigma_t = 1 + ln((t+1)/(t+2)) / ln((t+1)/t), stable change-of-base form.
  for (int t = 1; t < k; ++t) {
    const double tt = t;
    th.sigma[static_cast<std::size_t>(t)] =
        1.0 + std::log((tt + 1) / (tt + 2)) / std::log((tt + 1) / tt);
  }
  th.sigma[static_cast<std::size_t>(k)] = 0.0;
  return th;
}

}  // namespace ccopt
