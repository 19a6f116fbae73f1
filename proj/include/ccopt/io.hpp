#pragma once

// JSON views of the toolkit's value types, used by the CLI and by the
// transcript-export surface. Payload bytes are never embedded; transcripts
// carry a 64-bit FNV-1a digest per transmission instead.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccopt/core.hpp"
#include "ccopt/oracle.hpp"
#include "ccopt/sim.hpp"
#include "ccopt/solver.hpp"

#ifndef CCOPT_VERSION
#define CCOPT_VERSION "dev"
#endif

namespace ccopt {

inline std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

inline std::vector<int> mask_to_users(std::uint32_t mask) {
  std::vector<int> users;
  for (int u = 1; mask != 0; ++u, mask >>= 1) {
    if (mask & 1u) users.push_back(u);
  }
  return users;
}

inline nlohmann::json to_json(const SystemConfig& cfg) {
  return {{"users", cfg.users},
          {"files", cfg.files},
          {"rho", cfg.rho},
          {"alpha", cfg.alpha}};
}

inline nlohmann::json to_json(const Regime& regime) {
  nlohmann::json j{{"tag", to_string(regime.tag)}};
  if (regime.a) j["a"] = *regime.a;
  if (regime.b) j["b"] = *regime.b;
  return j;
}

inline nlohmann::json to_json(const SystemConfig& cfg,
                              const OptimalSolution& sol) {
  std::vector<double> x;
  for (int t = 0; t <= cfg.users; ++t) x.push_back(sol.allocation.x(t));
  return {{"config", to_json(cfg)},
          {"regime", to_json(sol.regime)},
          {"support", sol.support},
          {"y", sol.allocation.raw()},
          {"x", x},
          {"objective", sol.objective},
          {"rate_placement", sol.r_placement},
          {"rate_delivery", sol.r_delivery},
          {"uncoded_optimal", uncoded_is_optimal(cfg)}};
}

inline nlohmann::json to_json(const QuantizedAllocation& q) {
  return {{"file_length", q.file_length}, {"subfile_units", q.s}};
}

inline nlohmann::json to_json(const Transcript& tr) {
  nlohmann::json txns = nlohmann::json::array();
  for (const auto& tx : tr.transmissions) {
    nlohmann::json j{{"recipients", mask_to_users(tx.recipients)},
                     {"length", tx.payload.size()},
                     {"digest", hex64(fnv1a64(tx.payload))}};
    if (tr.phase == Phase::kPlacement) j["file"] = tx.file;
    txns.push_back(std::move(j));
  }
  return {{"phase",
           tr.phase == Phase::kPlacement ? "placement" : "delivery"},
          {"file_length", tr.file_length},
          {"measured_cost", tr.measured_cost},
          {"transmissions", std::move(txns)}};
}

}  // namespace ccopt
