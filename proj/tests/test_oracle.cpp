#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "wpmec/oracle.hpp"
#include "wpmec/solver.hpp"
#include "test_support.hpp"

using namespace wpmec;
using testsupport::sim_instance;

TEST_CASE("exhaustive search returns zero without transmit power") {
  // Validation rejects a zero power budget, so degrade the config after
  // construction; the search itself has no trouble with the degenerate case.
  Instance inst = sim_instance(1, 1);
  inst.cfg.max_transmit_power = 0.0;
  auto [alloc, value] = brute_force(inst);
  CHECK(value == 0.0);
  CHECK(alloc.local_bits[0] == 0.0);
  CHECK(alloc.offload_bits[0] == 0.0);
}

TEST_CASE("exhaustive search hits the energy-capped local optimum when offloading is disabled") {
  Instance inst = sim_instance(1, 1);
  inst.cfg.mec_capacity_bits = 0.0;
  // Full-budget covariance fixes the harvest; the energy-only bit cap is then
  // (harvest T^2 / (zeta C^3))^(1/3), which the grid places exactly at its top
  // point, so the search recovers it to rounding.
  const SystemConfig& cfg = inst.cfg;
  const double harvest = cfg.block_seconds * cfg.energy_efficiency *
                         cfg.block_seconds * cfg.max_transmit_power * 5e-6;
  const double c3 = 1e3 * 1e3 * 1e3;
  const double expected =
      std::min(inst.local_cap_bits(0),
               std::cbrt(harvest * cfg.block_seconds * cfg.block_seconds /
                         (1e-28 * c3)));
  auto [alloc, value] = brute_force(inst);
  CHECK(value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(alloc.offload_bits[0] == 0.0);
}

TEST_CASE("exhaustive search stays within the certified bound and near the solver") {
  for (int users : {1, 2}) {
    for (unsigned seed : {1u, 2u, 3u}) {
      Instance inst = testsupport::random_instance(users, 1, seed);
      auto [alloc, value] = brute_force(inst);
      JointSolution sol = solve_joint(inst);
      CHECK(value <= sol.report.dual_bound * (1.0 + 1e-9));
      CHECK(std::abs(value - sol.report.primal_objective) <=
            1e-2 * sol.report.primal_objective);
      CHECK(check_feasibility(alloc, inst).feasible);
    }
  }
}

TEST_CASE("exhaustive search value never decreases as the grid doubles") {
  Instance one = testsupport::random_instance(1, 1, 9);
  double prev = -1.0;
  for (int r : {32, 64, 128, 256}) {
    const double v = brute_force(one, GridSpec{r, r}).second;
    CHECK(v >= prev);
    prev = v;
  }
  Instance two = testsupport::random_instance(2, 1, 9);
  const double v32 = brute_force(two, GridSpec{32, 32}).second;
  const double v64 = brute_force(two, GridSpec{64, 64}).second;
  CHECK(v64 >= v32);
}

TEST_CASE("exhaustive search rejects unsupported shapes and oversized grids") {
  CHECK_THROWS_AS(brute_force(sim_instance(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(brute_force(sim_instance(3, 1)), std::invalid_argument);
  CHECK_THROWS_AS(brute_force(sim_instance(1, 1), GridSpec{16, 64}),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force(sim_instance(1, 1), GridSpec{64, 16}),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force(sim_instance(2, 1), GridSpec{400, 500}),
                  std::invalid_argument);
}

TEST_CASE("multiplier certificate accepts converged solves") {
  using Case = std::tuple<int, int, unsigned>;
  for (auto [users, antennas, seed] : {Case{2, 2, 7}, Case{4, 4, 11}}) {
    Instance inst = testsupport::random_instance(users, antennas, seed);
    JointSolution sol = solve_joint(inst);
    REQUIRE(sol.report.status == SolveStatus::converged);
    KktReport rep = kkt_check(sol.alloc, sol.dual, inst);
    CHECK(rep.passed);
    CHECK(rep.max_violation <= 1e-4);
  }
}

TEST_CASE("multiplier certificate flags corrupted allocations") {
  Instance inst = testsupport::random_instance(2, 2, 7);
  JointSolution sol = solve_joint(inst);
  Allocation bent = sol.alloc;
  bent.slot_seconds[0] += 0.01 * inst.cfg.block_seconds;
  CHECK_FALSE(kkt_check(bent, sol.dual, inst).passed);

  DualPoint idle;
  idle.lambda.assign(2, 0.0);
  KktReport zero = kkt_check(Allocation::zeros(2, 2), idle, inst);
  CHECK_FALSE(zero.passed);
  CHECK(zero.max_violation > 1.0);
}
