#include "wpmec/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpmec {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void SystemConfig::validate() const {
  require(antenna_count >= 1, "config: antenna count must be >= 1");
  require(user_count >= 1, "config: user count must be >= 1");
  require(finite(block_seconds) && block_seconds > 0, "config: block duration must be > 0");
  require(finite(max_transmit_power) && max_transmit_power > 0,
          "config: transmit power budget must be > 0");
  require(finite(bandwidth_hz) && bandwidth_hz > 0, "config: bandwidth must be > 0");
  require(finite(noise_power) && noise_power > 0, "config: noise power must be > 0");
  require(finite(energy_efficiency) && energy_efficiency > 0 && energy_efficiency <= 1,
          "config: energy conversion efficiency must lie in (0, 1]");
  require(finite(capacity_gap) && capacity_gap >= 1, "config: capacity gap must be >= 1");
  require(finite(mec_capacity_bits) && mec_capacity_bits >= 0,
          "config: MEC capacity must be >= 0");
  require(weights.size() == static_cast<size_t>(user_count),
          "config: weight list length must equal the user count");
  for (double w : weights)
    require(finite(w) && w > 0, "config: every weight must be > 0");
}

void UserProfile::validate() const {
  require(finite(cycles_per_bit) && cycles_per_bit > 0, "profile: cycles/bit must be > 0");
  require(finite(switched_capacitance) && switched_capacitance > 0,
          "profile: capacitance coefficient must be > 0");
  require(finite(max_cpu_hz) && max_cpu_hz > 0, "profile: max CPU frequency must be > 0");
  require(finite(circuit_power) && circuit_power > 0, "profile: circuit power must be > 0");
}

ChannelSet::ChannelSet(std::vector<std::vector<cdouble>> downlink,
                       std::vector<std::vector<cdouble>> uplink)
    : h_(std::move(downlink)), g_(std::move(uplink)) {
  require(!h_.empty() && h_.size() == g_.size(),
          "channels: need matching nonempty downlink/uplink lists");
  const size_t n = h_[0].size();
  require(n >= 1, "channels: antenna dimension must be >= 1");
  outer_.reserve(h_.size());
  g_gain_.reserve(h_.size());
  h_gain_.reserve(h_.size());
  for (size_t i = 0; i < h_.size(); ++i) {
    require(h_[i].size() == n && g_[i].size() == n, "channels: inconsistent vector lengths");
    double hg = 0.0, gg = 0.0;
    for (size_t k = 0; k < n; ++k) {
      require(finite(h_[i][k].real()) && finite(h_[i][k].imag()) && finite(g_[i][k].real()) &&
                  finite(g_[i][k].imag()),
              "channels: non-finite entry");
      hg += std::norm(h_[i][k]);
      gg += std::norm(g_[i][k]);
    }
    outer_.push_back(HermitianMatrix::outer(h_[i]));
    h_gain_.push_back(hg);
    g_gain_.push_back(gg);
  }
}

void Instance::validate() const {
  cfg.validate();
  require(profiles.size() == static_cast<size_t>(cfg.user_count),
          "instance: profile list length must equal the user count");
  for (const UserProfile& p : profiles) p.validate();
  require(channels.user_count() == cfg.user_count,
          "instance: channel list length must equal the user count");
  require(channels.antenna_count() == cfg.antenna_count,
          "instance: channel dimension must equal the antenna count");
}

Allocation Allocation::zeros(int antenna_count, int user_count) {
  Allocation a;
  a.covariance = HermitianMatrix(antenna_count);
  a.slot_seconds.assign(user_count, 0.0);
  a.offload_bits.assign(user_count, 0.0);
  a.local_bits.assign(user_count, 0.0);
  return a;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_limit: return "iteration-limit";
    case SolveStatus::infeasible_input: return "infeasible-input";
  }
  return "unknown";
}

double beta(double rate, const SystemConfig& cfg) {
  if (!(rate >= 0.0)) throw std::domain_error("beta: rate must be >= 0");
  return cfg.noise_power * std::expm1(std::numbers::ln2 * rate / cfg.bandwidth_hz);
}

double beta_prime(double rate, const SystemConfig& cfg) {
  if (!(rate >= 0.0)) throw std::domain_error("beta_prime: rate must be >= 0");
  return cfg.noise_power * (std::numbers::ln2 / cfg.bandwidth_hz) *
         std::exp2(rate / cfg.bandwidth_hz);
}

double harvested_energy(const HermitianMatrix& q_cov, const HermitianMatrix& rank_one,
                        const SystemConfig& cfg) {
  return cfg.block_seconds * cfg.energy_efficiency * trace_product(q_cov, rank_one);
}

double local_energy(double local_bits, const UserProfile& profile, const SystemConfig& cfg) {
  if (!(local_bits >= 0.0)) throw std::domain_error("local_energy: bits must be >= 0");
  const double c = profile.cycles_per_bit;
  return profile.switched_capacitance * c * c * c * local_bits * local_bits * local_bits /
         (cfg.block_seconds * cfg.block_seconds);
}

double offload_energy(double slot_seconds, double offload_bits, double uplink_gain,
                      const UserProfile& profile, const SystemConfig& cfg) {
  if (!(slot_seconds >= 0.0) || !(offload_bits >= 0.0))
    throw std::domain_error("offload_energy: negative input");
  if (slot_seconds == 0.0) {
    if (offload_bits > 0.0)
      throw std::domain_error("offload_energy: positive bits in an empty slot");
    return 0.0;
  }
  double e = profile.circuit_power * slot_seconds;
  if (offload_bits > 0.0) {
    const double g_eff = uplink_gain / cfg.capacity_gap;
    e += slot_seconds / g_eff * beta(offload_bits / slot_seconds, cfg);
  }
  return e;
}

double objective(const Allocation& alloc, const SystemConfig& cfg) {
  const size_t k = cfg.weights.size();
  if (alloc.local_bits.size() != k || alloc.offload_bits.size() != k)
    throw std::invalid_argument("objective: allocation size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < k; ++i)
    s += cfg.weights[i] * (alloc.local_bits[i] + alloc.offload_bits[i]);
  return s;
}

FeasibilityReport check_feasibility(const Allocation& alloc, const Instance& inst,
                                    const FeasibilityTolerances& tol) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  if (alloc.covariance.dim() != cfg.antenna_count ||
      alloc.slot_seconds.size() != static_cast<size_t>(k) ||
      alloc.offload_bits.size() != static_cast<size_t>(k) ||
      alloc.local_bits.size() != static_cast<size_t>(k))
    throw std::invalid_argument("check_feasibility: allocation shape mismatch");

  FeasibilityReport rep;
  rep.feasible = true;
  const double energy_budget = cfg.block_seconds * cfg.max_transmit_power;

  EigDecomposition ed = eig(alloc.covariance);
  rep.covariance_min_eig = ed.values.front();
  const double q_scale = std::max(1.0, alloc.covariance.frobenius_norm());
  if (rep.covariance_min_eig < -tol.psd_rel * q_scale) rep.feasible = false;

  rep.trace_slack = energy_budget - alloc.covariance.trace();
  if (rep.trace_slack < -(tol.energy_abs + tol.energy_rel * energy_budget)) rep.feasible = false;

  double t_sum = 0.0, ell_sum = 0.0;
  rep.eh_slack.resize(k);
  rep.local_cap_slack.resize(k);
  for (int i = 0; i < k; ++i) {
    const double t = alloc.slot_seconds[i];
    const double ell = alloc.offload_bits[i];
    const double q = alloc.local_bits[i];
    t_sum += t;
    ell_sum += ell;
    if (t < -tol.time_abs || t > cfg.block_seconds + tol.time_abs) rep.feasible = false;
    if (ell < -tol.bits_abs || ell > cfg.mec_capacity_bits + tol.bits_abs) rep.feasible = false;
    if (q < -tol.bits_abs) rep.feasible = false;
    rep.local_cap_slack[i] = inst.local_cap_bits(i) - q;
    if (rep.local_cap_slack[i] < -tol.bits_abs) rep.feasible = false;

    const double harvested =
        harvested_energy(alloc.covariance, inst.channels.rank_one(i), cfg);
    double consumed;
    if (t <= 0.0 && ell > tol.bits_abs) {
      rep.feasible = false;
      consumed = std::numeric_limits<double>::infinity();
    } else {
      consumed = local_energy(std::max(q, 0.0), inst.profiles[i], cfg) +
                 offload_energy(std::max(t, 0.0), t > 0.0 ? ell : 0.0,
                                inst.channels.uplink_gain(i), inst.profiles[i], cfg);
    }
    rep.eh_slack[i] = harvested - consumed;
    const double scale = std::max(harvested, std::min(consumed, 1e300));
    if (rep.eh_slack[i] < -(tol.energy_abs + tol.energy_rel * scale)) rep.feasible = false;
  }
  rep.time_slack = cfg.block_seconds - t_sum;
  if (rep.time_slack < -tol.time_abs) rep.feasible = false;
  rep.capacity_slack = cfg.mec_capacity_bits - ell_sum;
  if (rep.capacity_slack < -tol.bits_abs) rep.feasible = false;
  return rep;
}

}  // namespace wpmec
