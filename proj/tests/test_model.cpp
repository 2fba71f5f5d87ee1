#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_support.hpp"
#include "wpmec/model.hpp"

using namespace wpmec;
using testsupport::sim_config;
using testsupport::sim_instance;
using testsupport::sim_profile;

TEST_CASE("config and profile validation") {
  SystemConfig cfg = sim_config(2, 4);
  CHECK_NOTHROW(cfg.validate());
  SystemConfig bad = cfg;
  bad.max_transmit_power = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.weights = {0.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.energy_efficiency = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.capacity_gap = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  UserProfile p = sim_profile();
  CHECK_NOTHROW(p.validate());
  p.max_cpu_hz = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("beta values") {
  SystemConfig cfg = sim_config(1, 1);
  CHECK(beta(0.0, cfg) == 0.0);
  CHECK(beta(cfg.bandwidth_hz, cfg) == doctest::Approx(1e-9).epsilon(1e-13));
  CHECK(beta(2.0 * cfg.bandwidth_hz, cfg) == doctest::Approx(3e-9).epsilon(1e-13));
  CHECK_THROWS_AS(beta(-1.0, cfg), std::domain_error);
}

TEST_CASE("beta convexity") {
  SystemConfig cfg = sim_config(1, 1);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ux(0.0, 6.0 * cfg.bandwidth_hz);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    double x = ux(rng), y = ux(rng), a = ua(rng);
    double lhs = beta(a * x + (1 - a) * y, cfg);
    double rhs = a * beta(x, cfg) + (1 - a) * beta(y, cfg);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("beta_prime values and finite differences") {
  SystemConfig cfg = sim_config(1, 1);
  CHECK(beta_prime(0.0, cfg) ==
        doctest::Approx(1e-9 * std::log(2.0) / 2e6).epsilon(1e-12));
  CHECK(beta_prime(cfg.bandwidth_hz, cfg) ==
        doctest::Approx(2.0 * beta_prime(0.0, cfg)).epsilon(1e-12));
  CHECK_THROWS_AS(beta_prime(-0.5, cfg), std::domain_error);
  const double delta = 1e-3 * cfg.bandwidth_hz;
  for (double x : {delta, 1e5, 7.7e6, 2e7}) {
    double fd = (beta(x + delta, cfg) - beta(x - delta, cfg)) / (2.0 * delta);
    CHECK(beta_prime(x, cfg) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("harvested energy values and linearity") {
  Instance inst = sim_instance(1, 4);
  const SystemConfig& cfg = inst.cfg;
  const HermitianMatrix& h1 = inst.channels.rank_one(0);
  CHECK(inst.channels.downlink_gain(0) == doctest::Approx(5e-6).epsilon(1e-12));

  HermitianMatrix zero(4);
  CHECK(harvested_energy(zero, h1, cfg) == 0.0);

  HermitianMatrix iso = HermitianMatrix::identity(4);
  iso *= cfg.block_seconds * cfg.max_transmit_power / 4.0;
  CHECK(harvested_energy(iso, h1, cfg) == doctest::Approx(1.0e-7).epsilon(1e-10));

  HermitianMatrix aligned = HermitianMatrix::outer(inst.channels.downlink(0));
  aligned *= cfg.block_seconds * cfg.max_transmit_power / inst.channels.downlink_gain(0);
  CHECK(harvested_energy(aligned, h1, cfg) == doctest::Approx(4.0e-7).epsilon(1e-10));

  HermitianMatrix sum = iso;
  sum += aligned;
  CHECK(harvested_energy(sum, h1, cfg) ==
        doctest::Approx(harvested_energy(iso, h1, cfg) + harvested_energy(aligned, h1, cfg))
            .epsilon(1e-12));
}

TEST_CASE("local energy cubic law") {
  SystemConfig cfg = sim_config(1, 1);
  UserProfile p = sim_profile();
  CHECK(local_energy(0.0, p, cfg) == 0.0);
  CHECK(local_energy(1e4, p, cfg) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(local_energy(2e4, p, cfg) == doctest::Approx(8e-5).epsilon(1e-12));
  CHECK_THROWS_AS(local_energy(-1.0, p, cfg), std::domain_error);
}

TEST_CASE("offload energy") {
  SystemConfig cfg = sim_config(1, 1);
  UserProfile p = sim_profile();
  CHECK(offload_energy(0.01, 0.0, 5e-6, p, cfg) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(offload_energy(0.01, 2e4, 5e-6, p, cfg) == doctest::Approx(3e-6).epsilon(1e-10));
  CHECK(offload_energy(0.0, 0.0, 5e-6, p, cfg) == 0.0);
  CHECK_THROWS_AS(offload_energy(0.0, 100.0, 5e-6, p, cfg), std::domain_error);
  // Linear in t at a fixed rate.
  double r = 1.3e6;
  double e1 = offload_energy(0.02, r * 0.02, 5e-6, p, cfg);
  double e2 = offload_energy(0.04, r * 0.04, 5e-6, p, cfg);
  CHECK(e2 == doctest::Approx(2.0 * e1).epsilon(1e-10));
  // Capacity gap scales the β term: Gamma=2 doubles the radio energy part.
  SystemConfig gapped = cfg;
  gapped.capacity_gap = 2.0;
  double base = offload_energy(0.01, 2e4, 5e-6, p, cfg);
  double with_gap = offload_energy(0.01, 2e4, 5e-6, p, gapped);
  CHECK(with_gap - 1e-6 == doctest::Approx(2.0 * (base - 1e-6)).epsilon(1e-10));
}

TEST_CASE("objective linear form") {
  SystemConfig cfg = sim_config(2, 1);
  cfg.weights = {0.5, 0.5};
  Allocation a = Allocation::zeros(1, 2);
  CHECK(objective(a, cfg) == 0.0);
  a.local_bits = {100.0, 200.0};
  a.offload_bits = {300.0, 400.0};
  a.slot_seconds = {0.01, 0.01};
  CHECK(objective(a, cfg) == doctest::Approx(500.0));
  Allocation scaled = a;
  for (double& v : scaled.local_bits) v *= 3.0;
  for (double& v : scaled.offload_bits) v *= 3.0;
  CHECK(objective(scaled, cfg) == doctest::Approx(1500.0));
  Allocation wrong = Allocation::zeros(1, 3);
  CHECK_THROWS_AS(objective(wrong, cfg), std::invalid_argument);
}

TEST_CASE("feasibility checking") {
  Instance inst = sim_instance(2, 2);
  Allocation zero = Allocation::zeros(2, 2);
  auto rep = check_feasibility(zero, inst);
  CHECK(rep.feasible);
  CHECK(rep.trace_slack == doctest::Approx(1.0));
  CHECK(rep.time_slack == doctest::Approx(0.1));
  CHECK(rep.capacity_slack == doctest::Approx(2e5));

  // Local cap exceeded by one bit.
  Allocation overcap = zero;
  overcap.local_bits[0] = inst.local_cap_bits(0) + 1.0;
  CHECK_FALSE(check_feasibility(overcap, inst).feasible);

  // Offloaded bits require a slot.
  Allocation no_slot = zero;
  no_slot.offload_bits[1] = 10.0;
  CHECK_FALSE(check_feasibility(no_slot, inst).feasible);

  // Time budget violation.
  Allocation over_time = zero;
  over_time.slot_seconds = {0.08, 0.08};
  CHECK_FALSE(check_feasibility(over_time, inst).feasible);

  // Trace budget violation.
  Allocation over_power = zero;
  over_power.covariance = HermitianMatrix::identity(2);
  CHECK_FALSE(check_feasibility(over_power, inst).feasible);

  // EH violation: local bits with zero harvested energy.
  Allocation hungry = zero;
  hungry.local_bits[0] = 100.0;
  auto hungry_rep = check_feasibility(hungry, inst);
  CHECK_FALSE(hungry_rep.feasible);
  CHECK(hungry_rep.eh_slack[0] < 0.0);

  // A consistent nonzero allocation: full-budget isotropic covariance and a
  // modest local-bit load well under the harvested energy.
  Allocation ok = zero;
  ok.covariance = HermitianMatrix::identity(2);
  ok.covariance *= inst.cfg.block_seconds * inst.cfg.max_transmit_power / 2.0;
  double harvested = harvested_energy(ok.covariance, inst.channels.rank_one(0), inst.cfg);
  CHECK(harvested > 0.0);
  ok.local_bits = {1000.0, 1000.0};
  ok.slot_seconds = {0.001, 0.001};
  ok.offload_bits = {100.0, 100.0};
  auto ok_rep = check_feasibility(ok, inst);
  CHECK(ok_rep.feasible);
  for (double s : ok_rep.eh_slack) CHECK(s > 0.0);

  // Negative covariance eigenvalue is rejected.
  Allocation indef = zero;
  indef.covariance.set(0, 0, 0.02);
  indef.covariance.set(1, 1, -0.01);
  CHECK_FALSE(check_feasibility(indef, inst).feasible);
}

TEST_CASE("instance validation") {
  Instance inst = sim_instance(2, 2);
  CHECK_NOTHROW(inst.validate());
  Instance bad = inst;
  bad.profiles.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  Instance wrong_dims = inst;
  wrong_dims.cfg.antenna_count = 3;
  CHECK_THROWS_AS(wrong_dims.validate(), std::invalid_argument);
  CHECK(inst.effective_uplink_gain(0) == doctest::Approx(5e-6).epsilon(1e-9));
  CHECK(inst.local_cap_bits(0) == doctest::Approx(1e4));
  Instance gapped = inst;
  gapped.cfg.capacity_gap = 2.0;
  CHECK(gapped.effective_uplink_gain(0) == doctest::Approx(2.5e-6).epsilon(1e-9));
}
