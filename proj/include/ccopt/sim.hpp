#pragma once

// Bit-level simulation of the caching scheme itself. Files are split into
// powerset-indexed subfiles (label S = the set of users that cache it,
// type t = |S|), pushed during placement as one multicast per (file,
// subset), and served during delivery with one XOR-coded message per
// non-empty subset. Costs are measured from the actual transmitted bytes
// so they can be compared against the closed-form rate expressions.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccopt/core.hpp"

namespace ccopt {

/// Simulation sizes stay addressable with 32-bit subset masks.
inline constexpr int kMaxSimUsers = 20;

struct QuantizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integer realization of an allocation at file length F: s_t is the size
/// in units of every type-t subfile, with sum_t C(K,t) s_t == F exactly.
struct QuantizedAllocation {
  std::uint64_t file_length = 0;   ///< F
  std::vector<std::uint64_t> s;    ///< per-subfile units, indexed by type

  int users() const { return static_cast<int>(s.size()) - 1; }

  /// Fraction of a file realized by type t: a_t s_t / F.
  double realized_y(int t) const {
    return static_cast<double>(binom(users(), t) *
                               s[static_cast<std::size_t>(t)]) /
           static_cast<double>(file_length);
  }

  /// Units the reactive type absorbed beyond its ideal share; zero whenever
  /// every x_t * F is an integer.
  double reactive_residue(const TypeAllocation& alloc) const {
    return static_cast<double>(s[0]) -
           alloc.y(0) * static_cast<double>(file_length);
  }
};

namespace sim_detail {

// Subset-sum table over the candidate bump costs, used to land the total
// of the rounded-up types as close to the ideal as the combinatorics allow.
// Returns the bitmask over items of the best reachable sum <= cap.
inline std::uint32_t best_subset(const std::vector<std::uint64_t>& costs,
                                 double target, std::uint64_t cap) {
  std::uint64_t total = 0;
  for (auto c : costs) total += c;
  if (cap > total) cap = total;
  const auto limit = static_cast<std::size_t>(cap);
  std::vector<std::uint32_t> mask(limit + 1, 0);
  std::vector<bool> reach(limit + 1, false);
  reach[0] = true;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    const auto c = static_cast<std::size_t>(costs[i]);
    if (c > limit) continue;
    for (std::size_t v = limit; v >= c; --v) {
      if (reach[v - c] && !reach[v]) {
        reach[v] = true;
        mask[v] = mask[v - c] | (1u << i);
      }
    }
  }
  std::size_t best = 0;
  double best_gap = target;
  for (std::size_t v = 0; v <= limit; ++v) {
    if (!reach[v]) continue;
    const double gap = std::abs(static_cast<double>(v) - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = v;
    }
  }
  return mask[best];
}

}  // namespace sim_detail

/// Rounds an allocation to whole units at file length F.
///
/// Each type-t subfile gets floor(x_t * F) units; the lost fractional mass
/// is paid back by bumping whole types (+1 unit per subfile, so C(K,t)
/// units at once) chosen by subset-sum to best match the ideal total, and
/// whatever cannot be matched lands on the reactive type s_0. Coded types
/// are always within one unit of x_t * F; s_0 can absorb more when the
/// fractions do not add up to a reachable subset sum.
///
/// Throws QuantizationError when F cannot give every meaningfully positive
/// type (y_t * F >= 1) at least one unit.
inline QuantizedAllocation quantize(const TypeAllocation& alloc,
                                    std::uint64_t F) {
  const int k = alloc.users();
  if (k > kMaxSimUsers) {
    throw std::invalid_argument("quantize: simulation supports K <= 20");
  }
  int positive_types = 0;
  for (int t = 0; t <= k; ++t) {
    if (alloc.y(t) > kBoundaryTol) ++positive_types;
  }
  if (F < static_cast<std::uint64_t>(positive_types)) {
    throw QuantizationError("file length smaller than the support size");
  }

  QuantizedAllocation q;
  q.file_length = F;
  q.s.assign(static_cast<std::size_t>(k) + 1, 0);

  std::vector<double> ideal(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<int> bump_type;
  std::vector<std::uint64_t> bump_cost;
  std::uint64_t used = 0;
  for (int t = 0; t <= k; ++t) {
    const double at = static_cast<double>(binom(k, t));
    double v = alloc.y(t) * static_cast<double>(F) / at;
    if (std::abs(v - std::round(v)) < 1e-6) v = std::round(v);  // de-noise
    ideal[static_cast<std::size_t>(t)] = v;
    if (t == 0) continue;
    const auto base = static_cast<std::uint64_t>(v);
    q.s[static_cast<std::size_t>(t)] = base;
    used += base * static_cast<std::uint64_t>(binom(k, t));
    if (v - static_cast<double>(base) > 0.0) {
      bump_type.push_back(t);
      bump_cost.push_back(binom(k, t));
    }
  }

  const std::uint64_t budget = F - used;  // >= 0 since floors under-count
  const double deficit =
      static_cast<double>(budget) - ideal[0];  // == sum a_t frac_t
  if (!bump_cost.empty() && deficit > 0.0) {
    const std::uint32_t chosen =
        sim_detail::best_subset(bump_cost, deficit, budget);
    for (std::size_t i = 0; i < bump_type.size(); ++i) {
      if (chosen & (1u << i)) {
        const int t = bump_type[i];
        q.s[static_cast<std::size_t>(t)] += 1;
        used += binom(k, t);
      }
    }
  }
  q.s[0] = F - used;

  for (int t = 1; t <= k; ++t) {
    if (q.s[static_cast<std::size_t>(t)] == 0 &&
        alloc.y(t) * static_cast<double>(F) >= 1.0 - kBoundaryTol) {
      throw QuantizationError("file length too small to represent type " +
                              std::to_string(t));
    }
  }
  return q;
}

/// N files of F seeded pseudorandom units (bytes) each. Random payloads
/// make XOR bookkeeping mistakes visible as content mismatches.
struct Library {
  std::uint64_t file_length = 0;
  std::vector<std::vector<std::uint8_t>> files;

  static Library generate(int n_files, std::uint64_t file_length,
                          std::uint64_t seed) {
    Library lib;
    lib.file_length = file_length;
    lib.files.resize(static_cast<std::size_t>(n_files));
    std::uint64_t state = seed;
    auto next = [&state]() {  // splitmix64: stable across toolchains
      state += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    };
    for (auto& f : lib.files) {
      f.resize(file_length);
      std::size_t i = 0;
      while (i < f.size()) {
        std::uint64_t w = next();
        for (int b = 0; b < 8 && i < f.size(); ++b, ++i) {
          f[i] = static_cast<std::uint8_t>(w >> (8 * b));
        }
      }
    }
    return lib;
  }
};

/// Byte layout of one file: subfiles are laid out in ascending subset-mask
/// order, with the empty set (reactive part) first. Identical for every
/// file since subfile sizes are uniform per type.
class SubfileLayout {
 public:
  explicit SubfileLayout(const QuantizedAllocation& q)
      : sizes_(q.s), offsets_(std::size_t{1} << q.users(), 0) {
    std::uint64_t off = 0;
    for (std::uint32_t m = 0; m < offsets_.size(); ++m) {
      offsets_[m] = off;
      off += size(m);
    }
    // off == F by the partition constraint
  }

  std::uint64_t size(std::uint32_t mask) const {
    return sizes_[static_cast<std::size_t>(std::popcount(mask))];
  }
  std::uint64_t offset(std::uint32_t mask) const {
    return offsets_[mask];
  }

 private:
  std::vector<std::uint64_t> sizes_;
  std::vector<std::uint64_t> offsets_;
};

enum class Phase { kPlacement, kDelivery };

/// One recorded multicast. recipients is a user bitmask (bit k-1 = user k);
/// file is the library index for placement transmissions and 0 for coded
/// delivery messages.
struct Transmission {
  std::uint32_t recipients = 0;
  int file = 0;
  std::vector<std::uint8_t> payload;
};

struct Transcript {
  Phase phase = Phase::kPlacement;
  std::uint64_t file_length = 0;
  std::vector<Transmission> transmissions;
  double measured_cost = 0.0;
};

/// Per-user cache contents, keyed by (file, subset label).
class UserCaches {
 public:
  UserCaches(int users, int files)
      : store_(static_cast<std::size_t>(users) *
               static_cast<std::size_t>(files)),
        users_(users),
        files_(files) {}

  void insert(int user, int file, std::uint32_t mask,
              const std::vector<std::uint8_t>& bytes) {
    store_[slot(user, file)].emplace(mask, bytes);
  }

  const std::vector<std::uint8_t>* find(int user, int file,
                                        std::uint32_t mask) const {
    const auto& m = store_[slot(user, file)];
    auto it = m.find(mask);
    return it == m.end() ? nullptr : &it->second;
  }

  /// Total cached units user holds of one file (conservation checks).
  std::uint64_t cached_units(int user, int file) const {
    std::uint64_t total = 0;
    for (const auto& [mask, bytes] : store_[slot(user, file)]) {
      total += bytes.size();
    }
    return total;
  }

  int users() const { return users_; }
  int files() const { return files_; }

 private:
  std::size_t slot(int user, int file) const {
    if (user < 1 || user > users_ || file < 1 || file > files_) {
      throw std::invalid_argument("cache: user or file index out of range");
    }
    return static_cast<std::size_t>(user - 1) *
               static_cast<std::size_t>(files_) +
           static_cast<std::size_t>(file - 1);
  }

  std::vector<std::map<std::uint32_t, std::vector<std::uint8_t>>> store_;
  int users_ = 0;
  int files_ = 0;
};

struct PlacementResult {
  Transcript transcript;
  UserCaches caches;
};

/// Placement phase: one multicast of W_{n,S} to the users in S for every
/// file n and non-empty subset S with a positive subfile size; each
/// recipient stores the payload. The measured cost prices every unit sent
/// to |S| users at c_{|S|}.
inline PlacementResult run_placement(const SystemConfig& cfg,
                                     const Library& lib,
                                     const QuantizedAllocation& q) {
  const int k = cfg.users;
  if (k > kMaxSimUsers) {
    throw std::invalid_argument("placement: simulation supports K <= 20");
  }
  if (q.users() != k) throw std::invalid_argument("placement: K mismatch");
  if (static_cast<int>(lib.files.size()) != cfg.files ||
      lib.file_length != q.file_length) {
    throw std::invalid_argument("placement: library shape mismatch");
  }
  const SubfileLayout layout(q);
  const std::uint32_t full = (1u << k) - 1u;

  PlacementResult result{Transcript{Phase::kPlacement, q.file_length, {}, 0.0},
                         UserCaches(k, cfg.files)};
  // Exact unit counts per multicast size; the cost weights are applied once
  // at the end so millions of tiny additions cannot erode the comparison
  // against the rate formula.
  std::vector<std::uint64_t> units_by_size(static_cast<std::size_t>(k) + 1, 0);
  for (int n = 1; n <= cfg.files; ++n) {
    const auto& file = lib.files[static_cast<std::size_t>(n - 1)];
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const std::uint64_t len = layout.size(mask);
      if (len == 0) continue;
      const auto begin =
          file.begin() + static_cast<std::ptrdiff_t>(layout.offset(mask));
      std::vector<std::uint8_t> payload(begin,
                                        begin + static_cast<std::ptrdiff_t>(len));
      for (int u = 1; u <= k; ++u) {
        if (mask & (1u << (u - 1))) {
          result.caches.insert(u, n, mask, payload);
        }
      }
      units_by_size[static_cast<std::size_t>(std::popcount(mask))] += len;
      result.transcript.transmissions.push_back(
          Transmission{mask, n, std::move(payload)});
    }
  }
  double cost = 0.0;
  for (int r = 1; r <= k; ++r) {
    const auto u = units_by_size[static_cast<std::size_t>(r)];
    if (u != 0) cost += static_cast<double>(u) * placement_cost(cfg, r);
  }
  result.transcript.measured_cost = cost / static_cast<double>(q.file_length);
  return result;
}

inline void validate_demand(const SystemConfig& cfg,
                            const std::vector<int>& demand) {
  if (static_cast<int>(demand.size()) != cfg.users) {
    throw std::invalid_argument("demand: need one request per user");
  }
  std::vector<bool> seen(static_cast<std::size_t>(cfg.files) + 1, false);
  for (int d : demand) {
    if (d < 1 || d > cfg.files) {
      throw std::invalid_argument("demand: file index out of range");
    }
    if (seen[static_cast<std::size_t>(d)]) {
      throw std::invalid_argument(
          "demand: repeated request (only distinct worst-case demands are "
          "supported)");
    }
    seen[static_cast<std::size_t>(d)] = true;
  }
}

/// Delivery phase under worst-case (all-distinct) demand: for every
/// non-empty subset S one multicast carrying the XOR of W_{D_k, S\{k}}
/// over k in S. Every operand has the uniform type-(|S|-1) size.
inline Transcript run_delivery(const SystemConfig& cfg, const Library& lib,
                               const QuantizedAllocation& q,
                               const std::vector<int>& demand) {
  const int k = cfg.users;
  if (q.users() != k) throw std::invalid_argument("delivery: K mismatch");
  validate_demand(cfg, demand);
  const SubfileLayout layout(q);
  const std::uint32_t full = (1u << k) - 1u;

  Transcript out{Phase::kDelivery, q.file_length, {}, 0.0};
  std::uint64_t cost_units = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint64_t len =
        q.s[static_cast<std::size_t>(std::popcount(mask) - 1)];
    if (len == 0) continue;
    std::vector<std::uint8_t> payload(len, 0);
    for (int u = 1; u <= k; ++u) {
      if (!(mask & (1u << (u - 1)))) continue;
      const std::uint32_t part = mask & ~(1u << (u - 1));
      const auto& file =
          lib.files[static_cast<std::size_t>(demand[static_cast<std::size_t>(
                        u - 1)] - 1)];
      const std::uint64_t off = layout.offset(part);
      for (std::uint64_t i = 0; i < len; ++i) {
        payload[i] ^= file[off + i];
      }
    }
    cost_units += len;
    out.transmissions.push_back(Transmission{mask, 0, std::move(payload)});
  }
  out.measured_cost =
      static_cast<double>(cost_units) / static_cast<double>(q.file_length);
  return out;
}

/// Reconstructs every user's requested file from its cache plus the coded
/// delivery messages alone (the library is not consulted). For a message
/// labelled S containing user k, XORing out the cached W_{D_j, S\{j}} for
/// the other j in S leaves exactly the missing subfile W_{D_k, S\{k}}.
inline std::vector<std::vector<std::uint8_t>> decode_all(
    const SystemConfig& cfg, const QuantizedAllocation& q,
    const UserCaches& caches, const Transcript& delivery,
    const std::vector<int>& demand) {
  const int k = cfg.users;
  validate_demand(cfg, demand);
  if (delivery.phase != Phase::kDelivery) {
    throw std::invalid_argument("decode: not a delivery transcript");
  }
  const SubfileLayout layout(q);
  std::unordered_map<std::uint32_t, const std::vector<std::uint8_t>*> by_set;
  for (const auto& tx : delivery.transmissions) {
    by_set.emplace(tx.recipients, &tx.payload);
  }

  std::vector<std::vector<std::uint8_t>> decoded(
      static_cast<std::size_t>(k));
  const std::uint32_t full = (1u << k) - 1u;
  for (int u = 1; u <= k; ++u) {
    const int want = demand[static_cast<std::size_t>(u - 1)];
    auto& out = decoded[static_cast<std::size_t>(u - 1)];
    out.assign(q.file_length, 0);
    const std::uint32_t self = 1u << (u - 1);
    for (std::uint32_t label = 0; label <= full; ++label) {
      const std::uint64_t len = layout.size(label);
      if (len == 0) continue;
      const std::uint64_t off = layout.offset(label);
      if (label & self) {
        const auto* cached = caches.find(u, want, label);
        if (cached == nullptr) {
          throw DecodeError("user " + std::to_string(u) +
                            " is missing a cached subfile it should hold");
        }
        std::copy(cached->begin(), cached->end(),
                  out.begin() + static_cast<std::ptrdiff_t>(off));
        continue;
      }
      const std::uint32_t message = label | self;
      auto it = by_set.find(message);
      if (it == by_set.end()) {
        throw DecodeError("missing delivery message for a needed subset");
      }
      std::vector<std::uint8_t> value(*it->second);
      for (int j = 1; j <= k; ++j) {
        if (j == u || !(message & (1u << (j - 1)))) continue;
        const auto* cached = caches.find(
            u, demand[static_cast<std::size_t>(j - 1)],
            message & ~(1u << (j - 1)));
        if (cached == nullptr) {
          throw DecodeError("user " + std::to_string(u) +
                            " cannot strip a peer subfile from a message");
        }
        for (std::uint64_t i = 0; i < len; ++i) value[i] ^= (*cached)[i];
      }
      std::copy(value.begin(), value.end(),
                out.begin() + static_cast<std::ptrdiff_t>(off));
    }
  }
  return decoded;
}

/// decode_all plus a unit-for-unit comparison against the library.
inline std::vector<bool> verify_decode(
    const SystemConfig& cfg, const Library& lib, const QuantizedAllocation& q,
    const UserCaches& caches, const Transcript& delivery,
    const std::vector<int>& demand) {
  const auto decoded = decode_all(cfg, q, caches, delivery, demand);
  std::vector<bool> ok(decoded.size());
  for (std::size_t u = 0; u < decoded.size(); ++u) {
    ok[u] = decoded[u] == lib.files[static_cast<std::size_t>(demand[u] - 1)];
  }
  return ok;
}

}  // namespace ccopt
