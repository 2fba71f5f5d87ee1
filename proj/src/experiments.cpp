#include "wpmec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace wpmec {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// (0, 1]: the +1 keeps log() away from zero.
double uniform01(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

void ExperimentConfig::validate() const {
  base.validate();
  profile.validate();
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (sweep_values.empty())
    throw std::invalid_argument("experiment: sweep value list must not be empty");
  for (size_t i = 1; i < sweep_values.size(); ++i)
    if (!(sweep_values[i] > sweep_values[i - 1]))
      throw std::invalid_argument("experiment: sweep values must be strictly increasing");
  if (variable == SweepVariable::user_count)
    for (double v : sweep_values)
      if (v < 1.0 || v != std::floor(v))
        throw std::invalid_argument("experiment: user counts must be positive integers");
}

ChannelSet generate_channels(std::uint64_t seed, std::uint64_t trial_index,
                             const SystemConfig& cfg) {
  // Initial state: splitmix64 finalizer of seed + (trial+1) * golden stride.
  // Both maps are bijections, so distinct trials occupy distinct streams.
  std::uint64_t state = seed + (trial_index + 1) * 0x9e3779b97f4a7c15ULL;
  {
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    state = z ^ (z >> 31);
  }
  const double part_sigma = std::sqrt(2.5e-6);
  const double two_pi = 8.0 * std::atan(1.0);
  auto entry = [&]() -> cdouble {
    const double u1 = uniform01(splitmix64(state));
    const double u2 = uniform01(splitmix64(state));
    const double rad = part_sigma * std::sqrt(-2.0 * std::log(u1));
    return {rad * std::cos(two_pi * u2), rad * std::sin(two_pi * u2)};
  };
  std::vector<std::vector<cdouble>> h(cfg.user_count), g(cfg.user_count);
  for (int i = 0; i < cfg.user_count; ++i) {
    h[i].resize(cfg.antenna_count);
    g[i].resize(cfg.antenna_count);
    for (int a = 0; a < cfg.antenna_count; ++a) h[i][a] = entry();
    for (int a = 0; a < cfg.antenna_count; ++a) g[i][a] = entry();
  }
  return ChannelSet(std::move(h), std::move(g));
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

int worker_count() {
  if (const char* env = std::getenv("WPMEC_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0)
      return static_cast<int>(std::min(v, 256L));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(std::min(hc, 64u)) : 1;
}

namespace {

Instance instance_for(const ExperimentConfig& ec, double value,
                      std::uint64_t trial) {
  Instance inst;
  inst.cfg = ec.base;
  if (ec.variable == SweepVariable::transmit_power_dbm)
    inst.cfg.max_transmit_power = dbm_to_watts(value);
  else
    inst.cfg.user_count = static_cast<int>(value);
  if (static_cast<int>(inst.cfg.weights.size()) != inst.cfg.user_count)
    inst.cfg.weights.assign(inst.cfg.user_count, 1.0 / inst.cfg.user_count);
  inst.profiles.assign(inst.cfg.user_count, ec.profile);
  inst.channels = generate_channels(ec.seed, trial, inst.cfg);
  inst.validate();
  return inst;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& ec) {
  ec.validate();
  std::vector<SchemeId> schemes = ec.schemes;
  if (schemes.empty())
    schemes = {SchemeId::joint, SchemeId::local_only, SchemeId::offload_only,
               SchemeId::isotropic};
  std::sort(schemes.begin(), schemes.end(),
            [](SchemeId a, SchemeId b) { return to_string(a) < to_string(b); });
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());

  const int pts = static_cast<int>(ec.sweep_values.size());
  const int ns = static_cast<int>(schemes.size());
  const int total = pts * ec.trials;
  struct Cell {
    double value = 0.0;
    bool ok = false;
  };
  std::vector<Cell> cells(static_cast<size_t>(total) * ns);

  std::atomic<int> cursor{0};
  auto work = [&] {
    for (int task = cursor.fetch_add(1); task < total;
         task = cursor.fetch_add(1)) {
      const int p = task / ec.trials;
      const int trial = task % ec.trials;
      const Instance inst =
          instance_for(ec, ec.sweep_values[p], static_cast<std::uint64_t>(trial));
      for (int s = 0; s < ns; ++s) {
        const SchemeResult r = solve_scheme(schemes[s], inst, ec.solver);
        Cell& cell = cells[static_cast<size_t>(task) * ns + s];
        cell.ok = r.report.status == SolveStatus::converged;
        cell.value = objective(r.alloc, inst.cfg);
      }
    }
  };
  const int workers = std::min(worker_count(), total);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  SweepResult out;
  out.variable = ec.variable;
  for (int p = 0; p < pts; ++p)
    for (int s = 0; s < ns; ++s) {
      SweepPoint pt;
      pt.sweep_value = ec.sweep_values[p];
      pt.scheme = schemes[s];
      double sum = 0.0;
      for (int trial = 0; trial < ec.trials; ++trial) {
        const Cell& cell =
            cells[(static_cast<size_t>(p) * ec.trials + trial) * ns + s];
        if (cell.ok) {
          sum += cell.value;
          ++pt.trials_ok;
        } else {
          ++pt.trials_failed;
        }
      }
      if (pt.trials_ok > 0) {
        pt.mean_bits_per_user = sum / pt.trials_ok;
        if (pt.trials_ok > 1) {
          double ss = 0.0;
          for (int trial = 0; trial < ec.trials; ++trial) {
            const Cell& cell =
                cells[(static_cast<size_t>(p) * ec.trials + trial) * ns + s];
            if (cell.ok) {
              const double d = cell.value - pt.mean_bits_per_user;
              ss += d * d;
            }
          }
          pt.stderr_bits = std::sqrt(ss / (pt.trials_ok - 1)) /
                           std::sqrt(static_cast<double>(pt.trials_ok));
        }
      }
      out.points.push_back(pt);
    }
  return out;
}

std::string csv_string(const SweepResult& result) {
  std::string out =
      "sweep_var,sweep_value,scheme,mean_bits_per_user,stderr,trials_ok,"
      "trials_failed\n";
  const char* var = result.variable == SweepVariable::transmit_power_dbm
                        ? "p_max_dbm"
                        : "users";
  char buf[256];
  for (const SweepPoint& p : result.points) {
    std::snprintf(buf, sizeof buf, "%s,%.12g,%s,%.14e,%.14e,%d,%d\n", var,
                  p.sweep_value, to_string(p.scheme).c_str(),
                  p.mean_bits_per_user, p.stderr_bits, p.trials_ok,
                  p.trials_failed);
    out += buf;
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  const std::string body = csv_string(result);
  file.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace wpmec
