// Command-line front end: solve one instance, run Monte-Carlo sweeps, check
// the pipeline against the small-instance exhaustive search, or certify a
// solve with the multiplier report. Exit codes: 0 success, 1 input error,
// 2 nonconvergence.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpmec/benchmarks.hpp"
#include "wpmec/config.hpp"
#include "wpmec/experiments.hpp"
#include "wpmec/oracle.hpp"
#include "wpmec/solver.hpp"

using nlohmann::json;
using namespace wpmec;

namespace {

// One user per line, 2N whitespace-separated complex entries written as
// "re,im": the N downlink entries first, then the N uplink entries.
ChannelSet read_channels_file(const std::string& path, const SystemConfig& cfg) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot open channels file: " + path);
  std::vector<std::vector<cdouble>> h, g;
  std::string raw;
  int line = 0;
  while (std::getline(file, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    std::istringstream in(hash == std::string::npos ? raw : raw.substr(0, hash));
    std::vector<cdouble> entries;
    std::string token;
    while (in >> token) {
      const size_t comma = token.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("channels line " + std::to_string(line) +
                                    ": entry '" + token + "' is not re,im");
      try {
        size_t used = 0;
        const double re = std::stod(token.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("");
        const std::string rest = token.substr(comma + 1);
        const double im = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
        entries.push_back({re, im});
      } catch (const std::exception&) {
        throw std::invalid_argument("channels line " + std::to_string(line) +
                                    ": malformed complex entry '" + token + "'");
      }
    }
    if (entries.empty()) continue;  // blank or comment-only line
    if (static_cast<int>(entries.size()) != 2 * cfg.antenna_count)
      throw std::invalid_argument(
          "channels line " + std::to_string(line) + ": expected " +
          std::to_string(2 * cfg.antenna_count) + " entries, got " +
          std::to_string(entries.size()));
    h.emplace_back(entries.begin(), entries.begin() + cfg.antenna_count);
    g.emplace_back(entries.begin() + cfg.antenna_count, entries.end());
  }
  if (static_cast<int>(h.size()) != cfg.user_count)
    throw std::invalid_argument("channels file has " + std::to_string(h.size()) +
                                " user lines, config expects " +
                                std::to_string(cfg.user_count));
  return ChannelSet(std::move(h), std::move(g));
}

Instance build_instance(const ExperimentConfig& ec, const std::string& channels_path,
                        std::uint64_t seed) {
  Instance inst;
  inst.cfg = ec.base;
  inst.profiles.assign(inst.cfg.user_count, ec.profile);
  inst.channels = channels_path.empty()
                      ? generate_channels(seed, 0, inst.cfg)
                      : read_channels_file(channels_path, inst.cfg);
  inst.validate();
  return inst;
}

json config_json(const ExperimentConfig& ec) {
  return json{
      {"system",
       {{"antenna_count", ec.base.antenna_count},
        {"user_count", ec.base.user_count},
        {"block_seconds", ec.base.block_seconds},
        {"max_transmit_power", ec.base.max_transmit_power},
        {"bandwidth_hz", ec.base.bandwidth_hz},
        {"noise_power", ec.base.noise_power},
        {"energy_efficiency", ec.base.energy_efficiency},
        {"capacity_gap", ec.base.capacity_gap},
        {"mec_capacity_bits", ec.base.mec_capacity_bits},
        {"weights", ec.base.weights}}},
      {"users",
       {{"cycles_per_bit", ec.profile.cycles_per_bit},
        {"switched_capacitance", ec.profile.switched_capacitance},
        {"max_cpu_hz", ec.profile.max_cpu_hz},
        {"circuit_power", ec.profile.circuit_power}}},
      {"solver",
       {{"dual_tol", ec.solver.dual_tol},
        {"dual_max_iter", ec.solver.dual_max_iter},
        {"sdp_tol", ec.solver.sdp_tol},
        {"sdp_max_iter", ec.solver.sdp_max_iter},
        {"gap_tol", ec.solver.gap_tol}}}};
}

json allocation_json(const Allocation& alloc, const Instance& inst) {
  std::vector<double> cov;  // row-major interleaved re/im
  const std::vector<cdouble> q = alloc.covariance.to_row_major();
  cov.reserve(2 * q.size());
  for (const cdouble& z : q) {
    cov.push_back(z.real());
    cov.push_back(z.imag());
  }
  std::vector<double> rates(inst.cfg.user_count), freqs(inst.cfg.user_count);
  for (int i = 0; i < inst.cfg.user_count; ++i) {
    rates[i] = alloc.rate(i);
    freqs[i] = inst.profiles[i].cycles_per_bit * alloc.local_bits[i] /
               inst.cfg.block_seconds;
  }
  return json{{"covariance_re_im_row_major", cov},
              {"slot_seconds", alloc.slot_seconds},
              {"offload_bits", alloc.offload_bits},
              {"local_bits", alloc.local_bits},
              {"rates_bps", rates},
              {"cpu_frequencies_hz", freqs}};
}

json report_json(const SolveReport& rep) {
  return json{{"status", to_string(rep.status)},
              {"primal_objective", rep.primal_objective},
              {"dual_bound", rep.dual_bound},
              {"relative_gap", rep.relative_gap},
              {"iterations", rep.iterations},
              {"eh_slack", rep.eh_slack},
              {"time_slack", rep.time_slack},
              {"capacity_slack", rep.capacity_slack},
              {"trace_slack", rep.trace_slack},
              {"covariance_spectrum", rep.covariance_spectrum}};
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open for writing: " + path);
  file.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!file) throw std::invalid_argument("write failed: " + path);
}

int run_solve(const std::string& config_path, const std::string& channels_path,
              std::uint64_t seed, bool seed_given, const std::string& scheme_name,
              const std::string& out_path) {
  ExperimentConfig ec = load_config(config_path);
  const Instance inst =
      build_instance(ec, channels_path, seed_given ? seed : ec.seed);
  const SchemeId id = scheme_from_string(scheme_name);
  const SchemeResult res = solve_scheme(id, inst, ec.solver);
  json doc{{"scheme", to_string(id)},
           {"allocation", allocation_json(res.alloc, inst)},
           {"report", report_json(res.report)},
           {"config", config_json(ec)}};
  if (channels_path.empty())
    doc["channels_seed"] = seed_given ? seed : ec.seed;
  else
    doc["channels_file"] = channels_path;
  write_text(out_path, doc.dump(2) + "\n");
  return res.report.status == SolveStatus::converged ? 0 : 2;
}

int run_sweep_cmd(SweepVariable variable, const std::string& config_path,
                  const std::string& out_path, int trials_override,
                  std::uint64_t seed, bool seed_given) {
  ExperimentConfig ec = load_config(config_path);
  ec.variable = variable;
  if (ec.sweep_values.empty()) {
    if (variable == SweepVariable::transmit_power_dbm)
      ec.sweep_values = {20, 25, 30, 35, 40, 45, 50, 55, 60};
    else
      ec.sweep_values = {2, 4, 6, 8, 10, 12, 14};
  }
  if (trials_override > 0) ec.trials = trials_override;
  if (seed_given) ec.seed = seed;
  const SweepResult res = run_sweep(ec);
  emit_csv(res, out_path);
  for (const SweepPoint& p : res.points)
    if (p.trials_ok == 0) {
      std::cerr << "no converged trial for " << to_string(p.scheme) << " at "
                << p.sweep_value << "\n";
      return 2;
    }
  return 0;
}

int run_validate(std::uint64_t seed, int cases) {
  ExperimentConfig ec = default_experiment();
  double worst = 0.0;
  std::printf("%-6s %-3s %-18s %-18s %-12s\n", "case", "K", "oracle", "pipeline",
              "deviation");
  for (int i = 0; i < cases; ++i) {
    const int users = 1 + (i & 1);
    SystemConfig cfg = ec.base;
    cfg.antenna_count = 1;
    cfg.user_count = users;
    cfg.weights.assign(users, 1.0 / users);
    Instance inst;
    inst.cfg = cfg;
    inst.profiles.assign(users, ec.profile);
    inst.channels = generate_channels(seed, i, cfg);
    inst.validate();
    const auto [oracle_alloc, oracle_value] = brute_force(inst);
    const JointSolution sol = solve_joint(inst, ec.solver);
    const double dev = std::abs(oracle_value - sol.report.primal_objective) /
                       std::max(oracle_value, 1e-12);
    worst = std::max(worst, dev);
    std::printf("%-6d %-3d %-18.12e %-18.12e %-12.3e\n", i, users, oracle_value,
                sol.report.primal_objective, dev);
  }
  std::printf("max deviation %.3e (tolerance 1e-2)\n", worst);
  return worst <= 1e-2 ? 0 : 2;
}

int run_certify(const std::string& config_path, const std::string& channels_path,
                std::uint64_t seed, bool seed_given) {
  ExperimentConfig ec = load_config(config_path);
  const Instance inst =
      build_instance(ec, channels_path, seed_given ? seed : ec.seed);
  const JointSolution sol = solve_joint(inst, ec.solver);
  const KktReport kkt = kkt_check(sol.alloc, sol.dual, inst);
  std::printf("status                     %s\n", to_string(sol.report.status).c_str());
  std::printf("primal objective           %.15e\n", sol.report.primal_objective);
  std::printf("dual bound                 %.15e\n", sol.report.dual_bound);
  std::printf("relative gap               %.3e (tolerance 1e-3)\n",
              sol.report.relative_gap);
  std::printf("local bits stationarity    %.3e\n", kkt.local_bits_stationarity);
  std::printf("rate stationarity          %.3e\n", kkt.rate_stationarity);
  std::printf("slot stationarity          %.3e\n", kkt.slot_stationarity);
  std::printf("complementary slackness    %.3e\n", kkt.complementary_slackness);
  std::printf("covariance alignment       %.3e\n", kkt.covariance_alignment);
  std::printf("max violation              %.3e (tolerance 1e-4)\n", kkt.max_violation);
  const bool ok = sol.report.status == SolveStatus::converged &&
                  sol.report.relative_gap <= 1e-3 && kkt.max_violation <= 1e-4;
  std::printf("certificate                %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wireless-powered MEC offloading: joint energy beamforming and "
               "time/bits allocation"};
  app.require_subcommand(1);

  std::string config_path, channels_path, scheme_name = "joint", out_path;
  std::uint64_t seed = 0;
  int cases = 20, trials_override = 0;

  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("config", config_path, "config file")->required();
  CLI::Option* solve_seed = solve->add_option("--seed", seed, "channel draw seed");
  solve->add_option("--channels", channels_path,
                    "channels file: one user per line, re,im entries, downlink "
                    "then uplink");
  solve->add_option("--scheme", scheme_name,
                    "joint | local-only | offload-only | isotropic");
  solve->add_option("--out", out_path, "result JSON path (default stdout)");

  CLI::App* sweep_power =
      app.add_subcommand("sweep-power", "sweep the power budget (dBm)");
  CLI::App* sweep_users = app.add_subcommand("sweep-users", "sweep the user count");
  CLI::Option *sp_seed = nullptr, *su_seed = nullptr;
  for (CLI::App* sub : {sweep_power, sweep_users}) {
    sub->add_option("config", config_path, "config file")->required();
    sub->add_option("--out", out_path, "output CSV path")->required();
    sub->add_option("--trials", trials_override, "override the trial count")
        ->check(CLI::PositiveNumber);
    CLI::Option* opt = sub->add_option("--seed", seed, "override the seed");
    (sub == sweep_power ? sp_seed : su_seed) = opt;
  }

  CLI::App* validate =
      app.add_subcommand("validate", "compare the pipeline against the "
                                     "exhaustive search on small instances");
  validate->add_option("--seed", seed, "base seed")->default_val(7);
  validate->add_option("--cases", cases, "number of instances")
      ->check(CLI::PositiveNumber);

  CLI::App* certify = app.add_subcommand(
      "certify", "solve and print the duality/multiplier certificate");
  certify->add_option("config", config_path, "config file")->required();
  CLI::Option* certify_seed = certify->add_option("--seed", seed, "channel draw seed");
  certify->add_option("--channels", channels_path, "channels file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed())
      return run_solve(config_path, channels_path, seed, solve_seed->count() > 0,
                       scheme_name, out_path);
    if (sweep_power->parsed())
      return run_sweep_cmd(SweepVariable::transmit_power_dbm, config_path,
                           out_path, trials_override, seed, sp_seed->count() > 0);
    if (sweep_users->parsed())
      return run_sweep_cmd(SweepVariable::user_count, config_path, out_path,
                           trials_override, seed, su_seed->count() > 0);
    if (validate->parsed()) return run_validate(seed, cases);
    if (certify->parsed())
      return run_certify(config_path, channels_path, seed,
                         certify_seed->count() > 0);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
