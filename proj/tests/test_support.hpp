#pragma once

// Shared instance builders for the test suites: the simulation parameter set
// (N=4, eta=0.8, C=1e3, zeta=1e-28, p_c=1e-4, sigma2=1e-9, B=2 MHz,
// L_max=2e5 bits, f_max=1e8 Hz, T=0.1 s, uniform weights) plus deterministic
// channel fixtures with prescribed gains.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wpmec/model.hpp"

namespace testsupport {

inline wpmec::SystemConfig sim_config(int user_count, int antenna_count,
                                        double p_max_watts = 10.0) {
  wpmec::SystemConfig cfg;
  cfg.antenna_count = antenna_count;
  cfg.user_count = user_count;
  cfg.block_seconds = 0.1;
  cfg.max_transmit_power = p_max_watts;
  cfg.bandwidth_hz = 2e6;
  cfg.noise_power = 1e-9;
  cfg.energy_efficiency = 0.8;
  cfg.capacity_gap = 1.0;
  cfg.mec_capacity_bits = 2e5;
  cfg.weights.assign(user_count, 1.0 / user_count);
  return cfg;
}

inline wpmec::UserProfile sim_profile() {
  wpmec::UserProfile p;
  p.cycles_per_bit = 1e3;
  p.switched_capacitance = 1e-28;
  p.max_cpu_hz = 1e8;
  p.circuit_power = 1e-4;
  return p;
}

// One user with ||h||^2 = downlink_gain and ||g||^2 = uplink_gain, spread over
// antennas with fixed unit phases so N>1 fixtures are not axis-aligned.
inline void push_user(std::vector<std::vector<wpmec::cdouble>>& h,
                      std::vector<std::vector<wpmec::cdouble>>& g, int antennas,
                      double downlink_gain, double uplink_gain) {
  std::vector<wpmec::cdouble> hv(antennas), gv(antennas);
  for (int a = 0; a < antennas; ++a) {
    const double ph = 0.7 * (a + 1) + 0.3 * static_cast<double>(h.size() + 1);
    const double pg = 1.1 * (a + 1) - 0.2 * static_cast<double>(g.size() + 1);
    hv[a] = std::sqrt(downlink_gain / antennas) *
            wpmec::cdouble{std::cos(ph), std::sin(ph)};
    gv[a] = std::sqrt(uplink_gain / antennas) * wpmec::cdouble{std::cos(pg), std::sin(pg)};
  }
  h.push_back(hv);
  g.push_back(gv);
}

inline wpmec::ChannelSet fixed_gain_channels(int user_count, int antenna_count,
                                             double gain = 5e-6) {
  std::vector<std::vector<wpmec::cdouble>> h, g;
  for (int i = 0; i < user_count; ++i) push_user(h, g, antenna_count, gain, gain);
  return wpmec::ChannelSet(std::move(h), std::move(g));
}

inline wpmec::Instance sim_instance(int user_count, int antenna_count,
                                      double p_max_watts = 10.0, double gain = 5e-6) {
  wpmec::Instance inst;
  inst.cfg = sim_config(user_count, antenna_count, p_max_watts);
  inst.profiles.assign(user_count, sim_profile());
  inst.channels = fixed_gain_channels(user_count, antenna_count, gain);
  inst.validate();
  return inst;
}

// Rayleigh draw around the 5e-6 average path loss, mt19937-based (tests only;
// the experiments module has its own counter-based generator).
inline wpmec::ChannelSet random_channels(int user_count, int antenna_count, unsigned seed,
                                         double avg_gain = 5e-6) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, std::sqrt(avg_gain / 2.0));
  std::vector<std::vector<wpmec::cdouble>> h(user_count), g(user_count);
  for (int i = 0; i < user_count; ++i) {
    h[i].resize(antenna_count);
    g[i].resize(antenna_count);
    for (int a = 0; a < antenna_count; ++a) {
      h[i][a] = wpmec::cdouble{nd(rng), nd(rng)};
      g[i][a] = wpmec::cdouble{nd(rng), nd(rng)};
    }
  }
  return wpmec::ChannelSet(std::move(h), std::move(g));
}

inline wpmec::Instance random_instance(int user_count, int antenna_count, unsigned seed,
                                       double p_max_watts = 10.0) {
  wpmec::Instance inst;
  inst.cfg = sim_config(user_count, antenna_count, p_max_watts);
  inst.profiles.assign(user_count, sim_profile());
  inst.channels = random_channels(user_count, antenna_count, seed);
  inst.validate();
  return inst;
}

}  // namespace testsupport
