// ccopt command-line front end.
//
// Subcommands:
//   solve     — optimal caching decision for one configuration
//   verify    — closed form vs. LP-oracle agreement over a parameter grid
//   simulate  — bit-level placement/delivery run at the closed-form optimum
//   sweep     — CSV dataset over a two-axis parameter grid
//
// Exit codes: 0 success, 1 usage, 2 verification/decode failure, 3 I/O.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccopt/ccopt.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& p : split(s, ',')) out.push_back(std::stoi(p));
  return out;
}

// "min:max:steps" linear range, or a comma-separated explicit list.
ccopt::Axis parse_axis(ccopt::AxisName name, const std::string& text) {
  ccopt::Axis axis;
  axis.name = name;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw UsageError("axis must be min:max:steps, got '" + text + "'");
    }
    axis.min = std::stod(parts[0]);
    axis.max = std::stod(parts[1]);
    axis.steps = std::stoi(parts[2]);
  } else {
    for (const auto& p : split(text, ',')) axis.list.push_back(std::stod(p));
    if (axis.list.empty()) throw UsageError("axis list is empty");
  }
  return axis;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open output file: " + path);
  out << content;
  if (!out.flush()) throw std::ios_base::failure("failed writing: " + path);
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_text(out_path, j.dump(2) + "\n");
  }
}

// Values shared by all subcommands, optionally preloaded from --config JSON
// (explicit flags win over file values).
struct CommonParams {
  int users = 5;
  int files = 10;
  double rho = 0.0;
  double alpha = 0.0;
  bool allow_large_rho = false;
};

void load_config_file(const std::string& path, CommonParams& p) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file: " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("users")) p.users = j["users"].get<int>();
  if (j.contains("files")) p.files = j["files"].get<int>();
  if (j.contains("rho")) p.rho = j["rho"].get<double>();
  if (j.contains("alpha")) p.alpha = j["alpha"].get<double>();
  if (j.contains("allow_rho_gt_1")) {
    p.allow_large_rho = j["allow_rho_gt_1"].get<bool>();
  }
}

void add_common_flags(CLI::App* cmd, CommonParams& p, std::string& config) {
  cmd->add_option("--config", config, "JSON config file (flags win)");
  cmd->add_option("-k,--users", p.users, "number of users K");
  cmd->add_option("-n,--files", p.files, "number of files N (K <= N)");
  cmd->add_option("--rho", p.rho, "placement cost multiplier");
  cmd->add_option("--alpha", p.alpha, "placement architecture exponent");
  cmd->add_flag("--allow-rho-gt-1", p.allow_large_rho,
                "accept rho values above 1");
}

int cmd_solve(const CommonParams& p, bool json, const std::string& out) {
  const ccopt::SystemConfig cfg(p.users, p.files, p.rho, p.alpha,
                                p.allow_large_rho);
  const ccopt::OptimalSolution sol = ccopt::solve(cfg);
  ccopt::validate_solution(cfg, sol);

  if (json || !out.empty()) {
    emit(ccopt::to_json(cfg, sol), out);
    if (!json && !out.empty()) {
      std::cout << "wrote " << out << '\n';
    }
    if (json || out.empty()) return kExitOk;
  }
  if (json) return kExitOk;

  std::printf("K=%d N=%d rho=%g alpha=%g\n", cfg.users, cfg.files, cfg.rho,
              cfg.alpha);
  std::printf("regime:  %s", to_string(sol.regime.tag));
  if (sol.regime.a) {
    std::printf(" (a=%d, b=%d)", *sol.regime.a, *sol.regime.b);
  }
  std::printf("\nsupport: {%s}\n", ccopt::support_cell(sol.support).c_str());
  std::printf("%4s %18s %18s\n", "t", "y_t", "x_t");
  for (int t = 0; t <= cfg.users; ++t) {
    if (sol.allocation.y(t) == 0.0 && t != 0) continue;
    std::printf("%4d %18.12g %18.12g\n", t, sol.allocation.y(t),
                sol.allocation.x(t));
  }
  std::printf("objective:        %.12g\n", sol.objective);
  std::printf("R_o (placement):  %.12g\n", sol.r_placement);
  std::printf("R_p (delivery):   %.12g\n", sol.r_delivery);
  std::printf("uncoded delivery optimal for every rho: %s\n",
              ccopt::uncoded_is_optimal(cfg) ? "yes" : "no");
  return kExitOk;
}

struct VerifyStats {
  long points = 0;
  long arch_points = 0;
  long claims_passed = 0;
  long allocation_mismatches = 0;
  double max_gap = 0.0;
  std::string worst;
  std::vector<std::string> violations;
};

int cmd_verify(int users_min, int users_max, const std::vector<int>& mults,
               std::optional<int> files, double rho_min, double rho_max,
               double alpha_min, double alpha_max, int steps, bool json,
               const std::string& out) {
  if (steps < 2 || !(rho_min < rho_max) || !(alpha_min < alpha_max) ||
      users_min < 1 || users_min > users_max) {
    throw UsageError("verify: need a non-degenerate grid (steps >= 2, "
                     "min < max, 1 <= users-min <= users-max)");
  }
  VerifyStats st;
  for (int k = users_min; k <= users_max; ++k) {
    std::vector<int> n_values;
    if (files) {
      n_values.push_back(*files);
    } else {
      for (int m : mults) n_values.push_back(m * k);
    }
    for (int n : n_values) {
      if (n < k) throw UsageError("verify: files must be >= users");
      for (int i = 0; i < steps; ++i) {
        const double rho =
            rho_min + (rho_max - rho_min) * static_cast<double>(i) / (steps - 1);
        for (int j = 0; j < steps; ++j) {
          const double alpha = alpha_min + (alpha_max - alpha_min) *
                                               static_cast<double>(j) /
                                               (steps - 1);
          const ccopt::SystemConfig cfg(k, n, rho, alpha);
          const auto cf = ccopt::solve(cfg);
          const auto lp = ccopt::oracle_solve(cfg);
          ++st.points;

          char where[128];
          std::snprintf(where, sizeof(where), "K=%d N=%d rho=%.12g alpha=%.12g",
                        k, n, rho, alpha);
          const double gap = std::abs(cf.objective - lp.objective);
          if (gap > st.max_gap) {
            st.max_gap = gap;
            st.worst = where;
          }
          if (gap > 1e-9) {
            st.violations.push_back(std::string("objective gap at ") + where);
          }
          bool same_alloc = true;
          for (int t = 0; t <= k; ++t) {
            if (std::abs(cf.allocation.y(t) - lp.allocation.y(t)) > 1e-9) {
              same_alloc = false;
            }
          }
          if (!same_alloc && gap > 1e-12) ++st.allocation_mismatches;

          if (cf.regime.tag == ccopt::RegimeTag::kArchitectureLimited) {
            ++st.arch_points;
            const auto rep = ccopt::check_claims(cfg);
            if (rep.all()) {
              ++st.claims_passed;
            } else {
              st.violations.push_back(std::string("claims failed at ") + where);
            }
          }
        }
      }
    }
  }

  nlohmann::json j{{"points", st.points},
                   {"max_objective_gap", st.max_gap},
                   {"worst_point", st.worst},
                   {"allocation_mismatches_beyond_ties",
                    st.allocation_mismatches},
                   {"architecture_limited_points", st.arch_points},
                   {"claims_passed", st.claims_passed},
                   {"violations", st.violations}};
  if (json || !out.empty()) {
    emit(j, out);
  } else {
    std::printf("grid points checked:        %ld\n", st.points);
    std::printf("max objective gap:          %.3e (at %s)\n", st.max_gap,
                st.worst.c_str());
    std::printf("allocation mismatches:      %ld (beyond objective ties)\n",
                st.allocation_mismatches);
    std::printf("claims checked/passed:      %ld/%ld\n", st.arch_points,
                st.claims_passed);
    std::printf("violations:                 %zu\n", st.violations.size());
    for (const auto& v : st.violations) std::printf("  %s\n", v.c_str());
  }
  return st.violations.empty() ? kExitOk : kExitVerification;
}

int cmd_simulate(const CommonParams& p, std::uint64_t file_length,
                 std::uint64_t seed, std::string demand_text, bool json,
                 const std::string& out) {
  const ccopt::SystemConfig cfg(p.users, p.files, p.rho, p.alpha,
                                p.allow_large_rho);
  if (file_length == 0) {
    file_length = 2520ULL * static_cast<std::uint64_t>(cfg.users);
  }
  std::vector<int> demand(static_cast<std::size_t>(cfg.users));
  std::iota(demand.begin(), demand.end(), 1);
  if (!demand_text.empty()) demand = parse_int_list(demand_text);

  const ccopt::OptimalSolution sol = ccopt::solve(cfg);
  ccopt::QuantizedAllocation q;
  try {
    q = ccopt::quantize(sol.allocation, file_length);
  } catch (const ccopt::QuantizationError& e) {
    throw UsageError(std::string("quantization failed: ") + e.what());
  }

  const auto lib = ccopt::Library::generate(cfg.files, file_length, seed);
  auto placement = ccopt::run_placement(cfg, lib, q);
  auto delivery = ccopt::run_delivery(cfg, lib, q, demand);
  const auto decoded =
      ccopt::verify_decode(cfg, lib, q, placement.caches, delivery, demand);

  // Rates the formulas predict at the exact allocation the simulator ran
  // (the quantized one) and at the requested real-valued optimum.
  std::vector<double> yq;
  for (int t = 0; t <= cfg.users; ++t) yq.push_back(q.realized_y(t));
  const ccopt::TypeAllocation realized(yq);
  const double ro_q = ccopt::rate_placement(cfg, realized);
  const double rp_q = ccopt::rate_delivery(cfg, realized);

  const double d_place = std::abs(placement.transcript.measured_cost - ro_q);
  const double d_deliver = std::abs(delivery.measured_cost - rp_q);
  const bool all_decoded =
      std::all_of(decoded.begin(), decoded.end(), [](bool b) { return b; });
  const bool ok = all_decoded && d_place <= 1e-9 && d_deliver <= 1e-9;

  nlohmann::json report{
      {"config", ccopt::to_json(cfg)},
      {"seed", seed},
      {"demand", demand},
      {"allocation", sol.allocation.raw()},
      {"quantized", ccopt::to_json(q)},
      {"reactive_residue_units", q.reactive_residue(sol.allocation)},
      {"placement",
       {{"measured", placement.transcript.measured_cost},
        {"formula_at_quantized", ro_q},
        {"formula_at_optimum", sol.r_placement},
        {"delta", d_place}}},
      {"delivery",
       {{"measured", delivery.measured_cost},
        {"formula_at_quantized", rp_q},
        {"formula_at_optimum", sol.r_delivery},
        {"delta", d_deliver}}},
      {"decoded", decoded},
      {"ok", ok},
      {"placement_transcript", ccopt::to_json(placement.transcript)},
      {"delivery_transcript", ccopt::to_json(delivery)}};

  if (json || !out.empty()) {
    emit(report, out);
  } else {
    std::printf("K=%d N=%d rho=%g alpha=%g  F=%llu seed=%llu\n", cfg.users,
                cfg.files, cfg.rho, cfg.alpha,
                static_cast<unsigned long long>(file_length),
                static_cast<unsigned long long>(seed));
    std::printf("quantized units per subfile:");
    for (auto s : q.s) std::printf(" %llu", static_cast<unsigned long long>(s));
    std::printf("\nplacement: measured %.12g, formula %.12g, delta %.3e\n",
                placement.transcript.measured_cost, ro_q, d_place);
    std::printf("delivery:  measured %.12g, formula %.12g, delta %.3e\n",
                delivery.measured_cost, rp_q, d_deliver);
    std::printf("drift from real-valued optimum: placement %.3e, delivery "
                "%.3e\n",
                std::abs(placement.transcript.measured_cost - sol.r_placement),
                std::abs(delivery.measured_cost - sol.r_delivery));
    int okc = 0;
    for (bool b : decoded) okc += b ? 1 : 0;
    std::printf("decode: %d/%d users reconstructed their file exactly\n", okc,
                cfg.users);
  }
  return ok ? kExitOk : kExitVerification;
}

int cmd_sweep(const CommonParams& p, const std::string& alpha_axis,
              const std::string& rho_axis, const std::string& files_axis,
              const std::string& out) {
  ccopt::SweepSpec spec;
  spec.users = p.users;
  spec.files = p.files;
  spec.rho = p.rho;
  spec.alpha = p.alpha;
  spec.allow_large_rho = p.allow_large_rho;

  std::vector<ccopt::Axis> axes;
  if (!alpha_axis.empty()) {
    axes.push_back(parse_axis(ccopt::AxisName::kAlpha, alpha_axis));
  }
  if (!rho_axis.empty()) {
    axes.push_back(parse_axis(ccopt::AxisName::kRho, rho_axis));
  }
  if (!files_axis.empty()) {
    axes.push_back(parse_axis(ccopt::AxisName::kFiles, files_axis));
  }
  if (axes.size() != 2) {
    throw UsageError("sweep: exactly two of --sweep-alpha/--sweep-rho/"
                     "--sweep-files are required");
  }
  spec.outer = axes[0];
  spec.inner = axes[1];

  const auto rows = ccopt::run_sweep(spec);
  ccopt::write_sweep(spec, rows, out);
  std::printf("wrote %zu rows to %s (+ manifest)\n", rows.size(), out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded-caching placement/delivery optimizer with a priced "
               "placement phase"};
  app.set_version_flag("--version", CCOPT_VERSION);
  app.require_subcommand(1);

  CommonParams params;
  std::string config_path;
  bool as_json = false;
  std::string out_path;

  auto* solve_cmd = app.add_subcommand("solve", "solve one configuration");
  add_common_flags(solve_cmd, params, config_path);
  solve_cmd->add_flag("--json", as_json, "emit JSON instead of a table");
  solve_cmd->add_option("--out", out_path, "write JSON to a file");

  auto* verify_cmd = app.add_subcommand(
      "verify", "cross-check the closed form against the LP oracle");
  int users_min = 2;
  int users_max = 8;
  std::optional<int> files_opt;
  std::string mults_text = "1,2,5";
  double rho_min = 0.0, rho_max = 0.5, alpha_min = 0.0, alpha_max = 1.0;
  int steps = 50;
  verify_cmd->add_option("--users-min", users_min, "smallest K");
  verify_cmd->add_option("--users-max", users_max, "largest K");
  verify_cmd->add_option("-k,--users", [&](const CLI::results_t& r) {
    users_min = users_max = std::stoi(r[0]);
    return true;
  }, "single K (sets both bounds)");
  verify_cmd->add_option("-n,--files",
                         [&](const CLI::results_t& r) {
                           files_opt = std::stoi(r[0]);
                           return true;
                         },
                         "fixed N (otherwise multiples of K are used)");
  verify_cmd->add_option("--files-mults", mults_text,
                         "comma list of N/K multipliers");
  verify_cmd->add_option("--rho-min", rho_min, "grid lower rho");
  verify_cmd->add_option("--rho-max", rho_max, "grid upper rho");
  verify_cmd->add_option("--alpha-min", alpha_min, "grid lower alpha");
  verify_cmd->add_option("--alpha-max", alpha_max, "grid upper alpha");
  verify_cmd->add_option("--steps", steps, "points per axis");
  verify_cmd->add_flag("--json", as_json, "emit JSON summary");
  verify_cmd->add_option("--out", out_path, "write JSON summary to a file");

  auto* sim_cmd = app.add_subcommand(
      "simulate", "bit-level scheme run at the closed-form optimum");
  add_common_flags(sim_cmd, params, config_path);
  std::uint64_t file_length = 0;  // 0 -> default 2520*K
  std::uint64_t seed = 1;
  std::string demand_text;
  sim_cmd->add_option("--file-length", file_length,
                      "file length F in units (default 2520*K)");
  sim_cmd->add_option("--seed", seed, "library PRNG seed");
  sim_cmd->add_option("--demand", demand_text,
                      "comma list of requested files, one per user");
  sim_cmd->add_flag("--json", as_json, "emit JSON report");
  sim_cmd->add_option("--out", out_path, "write JSON report to a file");

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "emit a CSV dataset over a two-axis parameter grid");
  add_common_flags(sweep_cmd, params, config_path);
  std::string alpha_axis, rho_axis, files_axis;
  sweep_cmd->add_option("--sweep-alpha", alpha_axis,
                        "alpha axis as min:max:steps or a comma list");
  sweep_cmd->add_option("--sweep-rho", rho_axis,
                        "rho axis as min:max:steps or a comma list");
  sweep_cmd->add_option("--sweep-files", files_axis,
                        "files axis as min:max:steps or a comma list");
  std::string sweep_out = "sweep.csv";
  sweep_cmd->add_option("--out", sweep_out, "CSV output path");

  try {
    // --config values act as defaults: load before parsing so explicit
    // flags overwrite them.
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        load_config_file(argv[i + 1], params);
      } else if (arg.rfind("--config=", 0) == 0) {
        load_config_file(arg.substr(9), params);
      }
    }
    app.parse(argc, argv);

    if (solve_cmd->parsed()) return cmd_solve(params, as_json, out_path);
    if (verify_cmd->parsed()) {
      std::vector<int> mults = parse_int_list(mults_text);
      return cmd_verify(users_min, users_max, mults, files_opt, rho_min,
                        rho_max, alpha_min, alpha_max, steps, as_json,
                        out_path);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(params, file_length, seed, demand_text, as_json,
                          out_path);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(params, alpha_axis, rho_axis, files_axis, sweep_out);
    }
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ccopt::DecodeError& e) {
    std::cerr << "decode failure: " << e.what() << '\n';
    return kExitVerification;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
