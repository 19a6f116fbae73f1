#pragma once

// Parameter-sweep engine behind the `sweep` subcommand: evaluates the
// closed form over a two-axis grid and emits one CSV row per point plus a
// JSON manifest describing exactly what was run. Row order is row-major
// over (outer axis, inner axis) and the CSV is byte-deterministic for a
// fixed spec and tool version.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccopt/io.hpp"
#include "ccopt/solver.hpp"

namespace ccopt {

enum class AxisName { kAlpha, kRho, kFiles };

inline const char* to_string(AxisName a) {
  switch (a) {
    case AxisName::kAlpha: return "alpha";
    case AxisName::kRho: return "rho";
    case AxisName::kFiles: return "files";
  }
  return "?";
}

/// One sweep axis: either a linear range (min, max, steps) or an explicit
/// value list (the usual choice for integer file counts).
struct Axis {
  AxisName name = AxisName::kAlpha;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;
  std::vector<double> list;

  std::vector<double> values() const {
    if (!list.empty()) return list;
    if (!(min < max) || steps < 2) {
      throw std::invalid_argument("sweep axis: need min < max and steps >= 2");
    }
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      v[static_cast<std::size_t>(i)] =
          min + (max - min) * static_cast<double>(i) / (steps - 1);
    }
    return v;
  }
};

struct SweepSpec {
  int users = 0;
  int files = 0;        ///< fixed N; ignored when files is an axis
  double rho = 0.0;     ///< fixed rho; ignored when rho is an axis
  double alpha = 0.0;   ///< fixed alpha; ignored when alpha is an axis
  Axis outer;
  Axis inner;
  bool allow_large_rho = false;

  void validate() const {
    if (outer.name == inner.name) {
      throw std::invalid_argument("sweep: the two axes must differ");
    }
    outer.values();  // throws on degenerate ranges
    inner.values();
    if (users < 1) throw std::invalid_argument("sweep: users must be >= 1");
  }
};

/// Delivery-rate comparison against the best uncoded-delivery allocation
/// (support restricted to {0, K}).
struct GainRecord {
  double r_delivery_opt = 0.0;
  double r_delivery_uncoded = 0.0;
  double gain = 0.0;  ///< uncoded minus optimal, always >= 0 up to tolerance
};

inline GainRecord gain_record(const SystemConfig& cfg,
                              const OptimalSolution& sol) {
  const OptimalSolution base = uncoded_baseline(cfg);
  GainRecord g{sol.r_delivery, base.r_delivery,
               base.r_delivery - sol.r_delivery};
  if (g.gain < -kBoundaryTol) {
    throw std::logic_error("gain: optimal solution worse than uncoded");
  }
  return g;
}

inline GainRecord gain_record(const SystemConfig& cfg) {
  return gain_record(cfg, solve(cfg));
}

/// Coded type carrying the most mass (ties to the larger type); 0 when the
/// allocation is fully reactive.
inline int dominant_type(const TypeAllocation& alloc) {
  int best = 0;
  double best_mass = 0.0;
  for (int t = 1; t <= alloc.users(); ++t) {
    if (alloc.y(t) >= best_mass && alloc.y(t) > 0.0) {
      best = t;
      best_mass = alloc.y(t);
    }
  }
  return best;
}

struct SweepRow {
  int users = 0;
  int files = 0;
  double rho = 0.0;
  double alpha = 0.0;
  Regime regime;
  std::vector<int> support;
  int dominant = 0;
  double r_placement = 0.0;
  double r_delivery = 0.0;
  double r_delivery_uncoded = 0.0;
  double gain = 0.0;
};

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  const auto outer_vals = spec.outer.values();
  const auto inner_vals = spec.inner.values();
  rows.reserve(outer_vals.size() * inner_vals.size());

  for (double ov : outer_vals) {
    for (double iv : inner_vals) {
      int files = spec.files;
      double rho = spec.rho;
      double alpha = spec.alpha;
      auto apply = [&](AxisName name, double v) {
        switch (name) {
          case AxisName::kAlpha: alpha = v; break;
          case AxisName::kRho: rho = v; break;
          case AxisName::kFiles:
            files = static_cast<int>(v + 0.5);
            break;
        }
      };
      apply(spec.outer.name, ov);
      apply(spec.inner.name, iv);

      const SystemConfig cfg(spec.users, files, rho, alpha,
                             spec.allow_large_rho);
      const OptimalSolution sol = solve(cfg);
      validate_solution(cfg, sol);  // re-validated at emit time
      const GainRecord g = gain_record(cfg, sol);

      rows.push_back(SweepRow{cfg.users, cfg.files, cfg.rho, cfg.alpha,
                              sol.regime, sol.support,
                              dominant_type(sol.allocation), sol.r_placement,
                              sol.r_delivery, g.r_delivery_uncoded, g.gain});
    }
  }
  return rows;
}

/// %.12g rendering: 12 significant digits round-trip the 1e-9 tolerances,
/// '.' decimal separator regardless of locale.
inline std::string format_sig12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string regime_cell(const Regime& r) {
  std::string s = to_string(r.tag);
  if (r.a) {
    s += "(a=" + std::to_string(*r.a) + ";b=" + std::to_string(*r.b) + ")";
  }
  return s;
}

inline std::string support_cell(const std::vector<int>& support) {
  std::string s;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i > 0) s += ';';
    s += std::to_string(support[i]);
  }
  return s;
}

inline const char* kSweepCsvHeader =
    "K,N,rho,alpha,regime,support,dominant_type,R_o,R_p,R_p_uncoded,gain";

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.users);
    out += ',';
    out += std::to_string(r.files);
    out += ',';
    out += format_sig12(r.rho);
    out += ',';
    out += format_sig12(r.alpha);
    out += ',';
    out += regime_cell(r.regime);
    out += ',';
    out += support_cell(r.support);
    out += ',';
    out += std::to_string(r.dominant);
    out += ',';
    out += format_sig12(r.r_placement);
    out += ',';
    out += format_sig12(r.r_delivery);
    out += ',';
    out += format_sig12(r.r_delivery_uncoded);
    out += ',';
    out += format_sig12(r.gain);
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const Axis& axis) {
  nlohmann::json j{{"name", to_string(axis.name)}};
  if (!axis.list.empty()) {
    j["list"] = axis.list;
  } else {
    j["min"] = axis.min;
    j["max"] = axis.max;
    j["steps"] = axis.steps;
  }
  return j;
}

inline nlohmann::json to_json(const SweepSpec& spec) {
  return {{"users", spec.users},
          {"files", spec.files},
          {"rho", spec.rho},
          {"alpha", spec.alpha},
          {"outer", to_json(spec.outer)},
          {"inner", to_json(spec.inner)},
          {"allow_large_rho", spec.allow_large_rho}};
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json sweep_manifest(const SweepSpec& spec,
                                     std::size_t row_count) {
  return {{"spec", to_json(spec)},
          {"version", CCOPT_VERSION},
          {"timestamp", utc_timestamp()},
          {"row_count", row_count}};
}

/// Writes rows to `path` and the manifest next to it (path + ".manifest.json").
inline void write_sweep(const SweepSpec& spec,
                        const std::vector<SweepRow>& rows,
                        const std::string& path) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open output file: " + path);
  csv << to_csv(rows);
  if (!csv.flush()) throw std::runtime_error("failed writing: " + path);

  const std::string mpath = path + ".manifest.json";
  std::ofstream manifest(mpath, std::ios::binary);
  if (!manifest) throw std::runtime_error("cannot open output file: " + mpath);
  manifest << sweep_manifest(spec, rows.size()).dump(2) << '\n';
  if (!manifest.flush()) throw std::runtime_error("failed writing: " + mpath);
}

}  // namespace ccopt
