#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpmec/benchmarks.hpp"
#include "wpmec/solver.hpp"
#include "test_support.hpp"

using namespace wpmec;

TEST_CASE("joint pipeline closes the duality gap on seeded instances") {
  struct Case { int k, n; unsigned seed; double p; };
  const Case cases[] = {
      {1, 1, 3, 10.0}, {2, 2, 7, 10.0},  {4, 4, 11, 10.0},
      {2, 4, 21, 10.0}, {4, 2, 23, 10.0}, {4, 4, 13, 0.1},
  };
  for (const Case& c : cases) {
    CAPTURE(c.k);
    CAPTURE(c.n);
    CAPTURE(c.seed);
    Instance inst = testsupport::random_instance(c.k, c.n, c.seed, c.p);
    JointSolution sol = solve_joint(inst);
    CHECK(sol.report.status == SolveStatus::converged);
    CHECK(sol.report.relative_gap <= 1e-3);
    CHECK(sol.report.primal_objective <=
          sol.report.dual_bound * (1.0 + 1e-8) + 1e-9);
    CHECK(check_feasibility(sol.alloc, inst).feasible);
  }
}

TEST_CASE("every user computes locally and spends its harvest") {
  for (unsigned seed : {5u, 19u, 27u}) {
    Instance inst = testsupport::random_instance(3, 2, seed);
    JointSolution sol = solve_joint(inst);
    FeasibilityReport feas = check_feasibility(sol.alloc, inst);
    REQUIRE(feas.feasible);
    for (int i = 0; i < 3; ++i) {
      CAPTURE(seed);
      CAPTURE(i);
      CHECK(sol.alloc.local_bits[i] >= 1.0);
      const double harvested = harvested_energy(
          sol.alloc.covariance, inst.channels.rank_one(i), inst.cfg);
      CHECK(feas.eh_slack[i] <= 1e-6 * harvested);
    }
  }
}

TEST_CASE("dual bound dominates every feasible benchmark value") {
  Instance inst = testsupport::random_instance(3, 3, 41);
  JointSolution sol = solve_joint(inst);
  const double bound = sol.report.dual_bound;
  for (SchemeId id : {SchemeId::local_only, SchemeId::offload_only,
                      SchemeId::isotropic}) {
    SchemeResult res = solve_scheme(id, inst);
    CHECK(objective(res.alloc, inst.cfg) <= bound * (1.0 + 1e-8));
  }
}

TEST_CASE("starved iteration budget is reported, not hidden") {
  Instance inst = testsupport::random_instance(2, 2, 7);
  SolverOptions opts;
  opts.dual_max_iter = 40;
  JointSolution sol = solve_joint(inst, opts);
  CHECK(sol.report.status == SolveStatus::iteration_limit);
  CHECK(sol.report.iterations <= 40);
  // Whatever the budget, the returned allocation must still be usable.
  CHECK(check_feasibility(sol.alloc, inst).feasible);
}

TEST_CASE("zero local cap option forces a pure offloading allocation") {
  Instance inst = testsupport::random_instance(2, 2, 9);
  SolverOptions opts;
  opts.zero_local_cap = true;
  JointSolution sol = solve_joint(inst, opts);
  for (double q : sol.alloc.local_bits) CHECK(q == 0.0);
  double offload = 0.0;
  for (int i = 0; i < 2; ++i)
    offload += inst.cfg.weights[i] * sol.alloc.offload_bits[i];
  CHECK(sol.report.primal_objective == doctest::Approx(offload).epsilon(1e-12));
}

TEST_CASE("reported covariance spectrum is psd within the power budget") {
  Instance inst = testsupport::random_instance(3, 4, 33);
  JointSolution sol = solve_joint(inst);
  const auto& ev = sol.report.covariance_spectrum;
  REQUIRE(ev.size() == 4);
  double tr = 0.0;
  for (double v : ev) {
    CHECK(v >= -1e-9 * std::abs(ev.back()));
    tr += v;
  }
  const double budget = inst.cfg.block_seconds * inst.cfg.max_transmit_power;
  CHECK(tr <= budget * (1.0 + 1e-8));
}

TEST_CASE("cpu frequencies are cycles per block") {
  SystemConfig cfg = testsupport::sim_config(2, 1);
  std::vector<UserProfile> profiles(2, testsupport::sim_profile());
  profiles[1].cycles_per_bit = 2e3;
  const std::vector<double> q = {1000.0, 500.0};
  const std::vector<double> f = cpu_frequencies(q, profiles, cfg);
  CHECK(f[0] == doctest::Approx(1e3 * 1000.0 / 0.1));
  CHECK(f[1] == doctest::Approx(2e3 * 500.0 / 0.1));
}

TEST_CASE("dual stage certifies convergence across sizes") {
  for (int k : {1, 2, 4}) {
    for (int n : {1, 2, 4}) {
      CAPTURE(k);
      CAPTURE(n);
      Instance inst = testsupport::random_instance(k, n, 100u + k * 10 + n);
      DualOutcome dual = optimize_dual(inst);
      CHECK(dual.converged);
      CHECK(std::isfinite(dual.bound));
      CHECK(dual.bound > 0.0);
    }
  }
}
