#pragma once

#include <string>
#include <vector>

#include "wpmec/hermitian.hpp"

namespace wpmec {

/// Global physical and resource parameters of one transmission block.
struct SystemConfig {
  int antenna_count = 1;          // N
  int user_count = 1;             // K
  double block_seconds = 0.1;     // T
  double max_transmit_power = 1;  // P_max, watts
  double bandwidth_hz = 2e6;      // B
  double noise_power = 1e-9;      // sigma^2, watts
  double energy_efficiency = 1;   // eta in (0,1]
  double capacity_gap = 1;        // Gamma >= 1
  double mec_capacity_bits = 0;   // L_max
  std::vector<double> weights;    // omega_i, length K

  void validate() const;  // throws std::invalid_argument
};

/// Per-user computation hardware description.
struct UserProfile {
  double cycles_per_bit = 1e3;         // C
  double switched_capacitance = 1e-28; // zeta
  double max_cpu_hz = 1e8;             // f_max
  double circuit_power = 1e-4;         // p_c, watts

  void validate() const;
};

/// Downlink/uplink channel vectors per user plus cached derived quantities.
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(std::vector<std::vector<cdouble>> downlink,
             std::vector<std::vector<cdouble>> uplink);

  int user_count() const { return static_cast<int>(h_.size()); }
  int antenna_count() const { return h_.empty() ? 0 : static_cast<int>(h_[0].size()); }
  const std::vector<cdouble>& downlink(int i) const { return h_[i]; }
  const std::vector<cdouble>& uplink(int i) const { return g_[i]; }
  /// h_i h_i^H, cached.
  const HermitianMatrix& rank_one(int i) const { return outer_[i]; }
  /// ||g_i||^2
  double uplink_gain(int i) const { return g_gain_[i]; }
  /// ||h_i||^2
  double downlink_gain(int i) const { return h_gain_[i]; }

 private:
  std::vector<std::vector<cdouble>> h_, g_;
  std::vector<HermitianMatrix> outer_;
  std::vector<double> g_gain_, h_gain_;
};

/// A complete problem instance.
struct Instance {
  SystemConfig cfg;
  std::vector<UserProfile> profiles;
  ChannelSet channels;

  void validate() const;
  /// Uplink gain with the capacity gap folded in: ||g_i||^2 / Gamma.
  double effective_uplink_gain(int i) const {
    return channels.uplink_gain(i) / cfg.capacity_gap;
  }
  /// Largest locally computable bit count: T f_max / C.
  double local_cap_bits(int i) const {
    return cfg.block_seconds * profiles[i].max_cpu_hz / profiles[i].cycles_per_bit;
  }
};

/// Full primal decision: energy covariance plus per-user time/bits split.
struct Allocation {
  HermitianMatrix covariance;        // Q, trace budgeted by T * P_max
  std::vector<double> slot_seconds;  // t_i
  std::vector<double> offload_bits;  // ell_i
  std::vector<double> local_bits;    // q_i

  static Allocation zeros(int antenna_count, int user_count);
  /// ell_i / t_i, or 0 when the slot is empty.
  double rate(int i) const {
    return slot_seconds[i] > 0.0 ? offload_bits[i] / slot_seconds[i] : 0.0;
  }
};

enum class SolveStatus { converged, iteration_limit, infeasible_input };

std::string to_string(SolveStatus s);

/// Objective, bound, gap and constraint slacks of one solve.
struct SolveReport {
  double primal_objective = 0.0;
  double dual_bound = 0.0;
  double relative_gap = 0.0;
  std::vector<double> eh_slack;  // joules, per user
  double time_slack = 0.0;       // seconds
  double capacity_slack = 0.0;   // bits
  double trace_slack = 0.0;      // joules
  std::vector<double> covariance_spectrum;  // ascending eigenvalues of Q
  int iterations = 0;
  SolveStatus status = SolveStatus::converged;
};

/// Absolute/relative slack tolerances, scaled per constraint unit.
struct FeasibilityTolerances {
  double energy_abs = 1e-12;  // joules
  double energy_rel = 1e-8;
  double time_abs = 1e-9;     // seconds
  double bits_abs = 1e-6;     // bits
  double psd_rel = 1e-9;      // on the covariance spectrum
};

struct FeasibilityReport {
  bool feasible = false;
  double covariance_min_eig = 0.0;
  double trace_slack = 0.0;
  double time_slack = 0.0;
  double capacity_slack = 0.0;
  std::vector<double> eh_slack;
  std::vector<double> local_cap_slack;
};

/// Transmit power needed to sustain rate x over bandwidth B at noise sigma^2:
/// sigma^2 (2^{x/B} - 1).
double beta(double rate, const SystemConfig& cfg);
/// d beta / dx = sigma^2 (ln2 / B) 2^{x/B}.
double beta_prime(double rate, const SystemConfig& cfg);

/// T eta tr(Q H_i).
double harvested_energy(const HermitianMatrix& q_cov, const HermitianMatrix& rank_one,
                        const SystemConfig& cfg);
/// zeta C^3 q^3 / T^2.
double local_energy(double local_bits, const UserProfile& profile, const SystemConfig& cfg);
/// (t / (g_tilde/Gamma)) beta(ell/t) + p_c t, with the beta term 0 when ell or t is 0.
double offload_energy(double slot_seconds, double offload_bits, double uplink_gain,
                      const UserProfile& profile, const SystemConfig& cfg);
/// Weighted bit total: sum_i omega_i (q_i + ell_i).
double objective(const Allocation& alloc, const SystemConfig& cfg);

FeasibilityReport check_feasibility(const Allocation& alloc, const Instance& inst,
                                    const FeasibilityTolerances& tol = {});

}  // namespace wpmec
