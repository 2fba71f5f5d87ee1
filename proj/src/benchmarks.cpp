#include "wpmec/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wpmec/ellipsoid.hpp"

namespace wpmec {

std::string to_string(SchemeId id) {
  switch (id) {
    case SchemeId::joint: return "joint";
    case SchemeId::local_only: return "local-only";
    case SchemeId::offload_only: return "offload-only";
    case SchemeId::isotropic: return "isotropic";
  }
  throw std::logic_error("unknown scheme id");
}

SchemeId scheme_from_string(const std::string& name) {
  if (name == "joint") return SchemeId::joint;
  if (name == "local-only") return SchemeId::local_only;
  if (name == "offload-only") return SchemeId::offload_only;
  if (name == "isotropic") return SchemeId::isotropic;
  throw std::invalid_argument(
      "unknown scheme '" + name +
      "' (expected joint, local-only, offload-only or isotropic)");
}

namespace {

// Maximizer of  w (q + ell) - mu t - theta ell  under one user's harvested
// energy budget.
struct FixedQUser {
  double local_bits = 0.0;
  double slot_seconds = 0.0;
  double offload_bits = 0.0;
  double value = 0.0;
};

double consumption_at(double lambda, double mu, double theta, double uplink_gain,
                      const UserProfile& prof, const SystemConfig& cfg, double weight,
                      UserSubproblem* sub_out, double* bits_out) {
  UserSubproblem sub =
      solve_t_ell_subproblem(lambda, mu, theta, uplink_gain, prof, cfg, weight);
  const double q = solve_q_subproblem(lambda, prof, cfg, weight);
  if (sub_out != nullptr) *sub_out = sub;
  if (bits_out != nullptr) *bits_out = q;
  return local_energy(q, prof, cfg) + sub.offload_consumption;
}

// Consumption decreases in the energy price, so bisection pins the price at
// which the budget is exactly spent; the slot duration is then read off the
// energy balance, which also resolves the bang-bang tie of the slot
// coefficient into the interior optimum.
FixedQUser best_response(double mu, double theta, double energy, double uplink_gain,
                         const UserProfile& prof, const SystemConfig& cfg,
                         double weight) {
  FixedQUser out;
  if (energy <= 0.0) return out;

  double hi = 1.0;
  int guard = 0;
  while (consumption_at(hi, mu, theta, uplink_gain, prof, cfg, weight, nullptr,
                        nullptr) > energy &&
         guard++ < 600)
    hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (consumption_at(mid, mu, theta, uplink_gain, prof, cfg, weight, nullptr,
                       nullptr) > energy)
      lo = mid;
    else
      hi = mid;
  }

  UserSubproblem sub;
  double q = 0.0;
  consumption_at(hi, mu, theta, uplink_gain, prof, cfg, weight, &sub, &q);
  out.local_bits = q;
  if (sub.rate > 0.0) {
    const double g_eff = uplink_gain / cfg.capacity_gap;
    const double power = beta(sub.rate, cfg) / g_eff + prof.circuit_power;
    if (power > 0.0 && std::isfinite(power)) {
      const double left = energy - local_energy(q, prof, cfg);
      out.slot_seconds = std::clamp(left / power, 0.0, cfg.block_seconds);
      out.offload_bits = sub.rate * out.slot_seconds;
    }
  }
  out.value = weight * (out.local_bits + out.offload_bits) -
              mu * out.slot_seconds - theta * out.offload_bits;
  return out;
}

}  // namespace

Allocation solve_fixed_q(const HermitianMatrix& covariance, const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  Allocation alloc = Allocation::zeros(cfg.antenna_count, k);
  alloc.covariance = covariance;

  std::vector<double> energy(k);
  bool powered = false;
  for (int i = 0; i < k; ++i) {
    energy[i] = harvested_energy(covariance, inst.channels.rank_one(i), cfg);
    powered = powered || energy[i] > 0.0;
  }
  if (!powered) return alloc;

  // Price box: reuse the joint-dual bounds for the time and capacity entries;
  // the ball is oversized because these are scale estimates, not guarantees.
  std::vector<double> jub = dual_upper_bounds(inst);
  const double mu_ub = jub[k], th_ub = jub[k + 2];
  Ellipsoid ball = Ellipsoid::ball({0.5 * mu_ub, 0.5 * th_ub},
                                   4.0 * std::hypot(mu_ub, th_ub));

  std::vector<FixedQUser> users(k);
  const CutOracle oracle = [&](std::span<const double> x) -> CutOracleResult {
    if (x[0] < 0.0) return {CutKind::feasibility, 0.0, {-1.0, 0.0}};
    if (x[1] < 0.0) return {CutKind::feasibility, 0.0, {0.0, -1.0}};
    double value = x[0] * cfg.block_seconds + x[1] * cfg.mec_capacity_bits;
    double sum_t = 0.0, sum_l = 0.0;
    for (int i = 0; i < k; ++i) {
      users[i] = best_response(x[0], x[1], energy[i], inst.channels.uplink_gain(i),
                               inst.profiles[i], cfg, cfg.weights[i]);
      value += users[i].value;
      sum_t += users[i].slot_seconds;
      sum_l += users[i].offload_bits;
    }
    return {CutKind::objective, value,
            {cfg.block_seconds - sum_t, cfg.mec_capacity_bits - sum_l}};
  };
  EllipsoidResult res = minimize(oracle, ball, 1e-12, 900);
  oracle(res.best_point);  // refresh `users` at the optimal prices

  double sum_t = 0.0, sum_l = 0.0;
  for (const FixedQUser& u : users) {
    sum_t += u.slot_seconds;
    sum_l += u.offload_bits;
  }
  double shrink = 1.0;
  if (sum_t > cfg.block_seconds) shrink = cfg.block_seconds / sum_t;
  if (sum_l > cfg.mec_capacity_bits) shrink = std::min(shrink, cfg.mec_capacity_bits / sum_l);
  for (int i = 0; i < k; ++i) {
    alloc.slot_seconds[i] = users[i].slot_seconds * shrink;
    alloc.offload_bits[i] = users[i].offload_bits * shrink;
  }

  // A capacity-saturated optimum pins the capacity price exactly on the
  // weight of the users sharing the pool, and their zero-margin subproblem
  // then recovers empty slots. Serve them directly, best weight first, with
  // the price nudged below the weight and the slot read off the energy
  // balance; non-degenerate users come back unchanged, so this is a no-op
  // away from saturation.
  double pool_t = cfg.block_seconds, pool_l = cfg.mec_capacity_bits;
  for (int i = 0; i < k; ++i) {
    pool_t -= alloc.slot_seconds[i];
    pool_l -= alloc.offload_bits[i];
  }
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cfg.weights[a] > cfg.weights[b];
  });
  const double mu_star = std::max(res.best_point[0], 0.0);
  const double th_star = std::max(res.best_point[1], 0.0);
  for (int i : order) {
    if (pool_t <= 1e-12 * cfg.block_seconds ||
        pool_l <= 1e-9 * std::max(1.0, cfg.mec_capacity_bits))
      break;
    if (alloc.offload_bits[i] > 0.0 || energy[i] <= 0.0) continue;
    const double w = cfg.weights[i];
    FixedQUser u =
        best_response(mu_star, std::min(th_star, w * (1.0 - 1e-3)), energy[i],
                      inst.channels.uplink_gain(i), inst.profiles[i], cfg, w);
    if (u.offload_bits <= 0.0 || u.slot_seconds <= 0.0) continue;
    const double f =
        std::min({1.0, pool_t / u.slot_seconds, pool_l / u.offload_bits});
    const double slot = u.slot_seconds * f, bits = u.offload_bits * f;
    const double spent = offload_energy(slot, bits, inst.channels.uplink_gain(i),
                                        inst.profiles[i], cfg);
    const UserProfile& p = inst.profiles[i];
    const double c = p.cycles_per_bit;
    const double t2 = cfg.block_seconds * cfg.block_seconds;
    const double q_after =
        std::min(inst.local_cap_bits(i),
                 std::cbrt(std::max(0.0, energy[i] - spent) * t2 /
                           (p.switched_capacitance * c * c * c)));
    if (q_after + bits > users[i].local_bits * (1.0 + 1e-12)) {
      alloc.slot_seconds[i] = slot;
      alloc.offload_bits[i] = bits;
      pool_t -= slot;
      pool_l -= bits;
    }
  }

  // Whatever energy the offload leaves behind goes to local bits.
  for (int i = 0; i < k; ++i) {
    const double spent = offload_energy(alloc.slot_seconds[i], alloc.offload_bits[i],
                                        inst.channels.uplink_gain(i),
                                        inst.profiles[i], cfg);
    const UserProfile& p = inst.profiles[i];
    const double c = p.cycles_per_bit;
    const double t2 = cfg.block_seconds * cfg.block_seconds;
    alloc.local_bits[i] =
        std::min(inst.local_cap_bits(i),
                 std::cbrt(std::max(0.0, energy[i] - spent) * t2 /
                           (p.switched_capacitance * c * c * c)));
  }
  return alloc;
}

Allocation solve_local_only(const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count, n = cfg.antenna_count;
  const double budget = cfg.block_seconds * cfg.max_transmit_power;

  auto bits_of = [&](double e, int i) {
    const UserProfile& p = inst.profiles[i];
    const double c = p.cycles_per_bit;
    const double t2 = cfg.block_seconds * cfg.block_seconds;
    const double interior =
        std::cbrt(std::max(0.0, e) * t2 / (p.switched_capacitance * c * c * c));
    return std::min(inst.local_cap_bits(i), interior);
  };
  auto value_of = [&](const HermitianMatrix& q_cov) {
    double v = 0.0;
    for (int i = 0; i < k; ++i)
      v += cfg.weights[i] *
           bits_of(harvested_energy(q_cov, inst.channels.rank_one(i), cfg), i);
    return v;
  };

  HermitianMatrix best_cov = HermitianMatrix::identity(n);
  best_cov *= budget / n;
  double best_val = value_of(best_cov);

  for (int s = 0; s < k; ++s) {
    if (inst.channels.downlink_gain(s) <= 0.0) continue;
    HermitianMatrix q_cov = inst.channels.rank_one(s);
    q_cov *= budget / inst.channels.downlink_gain(s);
    double val = value_of(q_cov);
    if (val > best_val) {
      best_val = val;
      best_cov = q_cov;
    }

    for (int it = 1; it <= 500; ++it) {
      HermitianMatrix grad(n);
      bool climbing = false;
      for (int i = 0; i < k; ++i) {
        const double e = harvested_energy(q_cov, inst.channels.rank_one(i), cfg);
        if (bits_of(e, i) >= inst.local_cap_bits(i)) continue;  // flat at the cap
        const UserProfile& p = inst.profiles[i];
        const double c = p.cycles_per_bit;
        const double t2 = cfg.block_seconds * cfg.block_seconds;
        // One-bit energy floor keeps the e^(-2/3) factor finite for users the
        // current beam leaves dark.
        const double e_eff = std::max(e, p.switched_capacitance * c * c * c / t2);
        const double coef = cfg.weights[i] / 3.0 *
                            std::cbrt(t2 / (p.switched_capacitance * c * c * c)) *
                            std::pow(e_eff, -2.0 / 3.0) * cfg.block_seconds *
                            cfg.energy_efficiency;
        grad.axpy(coef, inst.channels.rank_one(i));
        climbing = true;
      }
      if (!climbing) break;
      const double norm = grad.frobenius_norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) break;
      q_cov.axpy(budget / (norm * it), grad);
      q_cov = psd_project(q_cov);
      if (q_cov.trace() > budget) q_cov *= budget / q_cov.trace();
      val = value_of(q_cov);
      if (val > best_val) {
        best_val = val;
        best_cov = q_cov;
      }
    }
  }

  Allocation alloc = Allocation::zeros(n, k);
  alloc.covariance = best_cov;
  for (int i = 0; i < k; ++i)
    alloc.local_bits[i] =
        bits_of(harvested_energy(best_cov, inst.channels.rank_one(i), cfg), i);
  return alloc;
}

Allocation solve_offload_only(const Instance& inst, const SolverOptions& opts) {
  SolverOptions o = opts;
  o.zero_local_cap = true;
  return solve_joint(inst, o).alloc;
}

Allocation solve_isotropic(const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  const double p_hi = cfg.block_seconds * cfg.max_transmit_power / cfg.antenna_count;

  Allocation best = Allocation::zeros(cfg.antenna_count, cfg.user_count);
  double best_val = -std::numeric_limits<double>::infinity();
  auto probe = [&](double p) {
    HermitianMatrix q_cov = HermitianMatrix::identity(cfg.antenna_count);
    q_cov *= p;
    Allocation alloc = solve_fixed_q(q_cov, inst);
    const double v = objective(alloc, cfg);
    if (v > best_val) {
      best_val = v;
      best = std::move(alloc);
    }
    return v;
  };

  probe(0.0);
  if (p_hi <= 0.0) return best;
  probe(p_hi);

  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = p_hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = probe(x1), f2 = probe(x2);
  while (b - a > 1e-4 * p_hi) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = probe(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = probe(x1);
    }
  }
  return best;
}

SchemeResult solve_scheme(SchemeId id, const Instance& inst, const SolverOptions& opts) {
  const double no_bound = std::numeric_limits<double>::quiet_NaN();
  switch (id) {
    case SchemeId::joint: {
      JointSolution s = solve_joint(inst, opts);
      return {std::move(s.alloc), std::move(s.report)};
    }
    case SchemeId::offload_only: {
      SolverOptions o = opts;
      o.zero_local_cap = true;
      JointSolution s = solve_joint(inst, o);
      return {std::move(s.alloc), std::move(s.report)};
    }
    case SchemeId::local_only: {
      Allocation a = solve_local_only(inst);
      SolveReport r = make_report(a, inst, no_bound, 0, SolveStatus::converged);
      return {std::move(a), std::move(r)};
    }
    case SchemeId::isotropic: {
      Allocation a = solve_isotropic(inst);
      SolveReport r = make_report(a, inst, no_bound, 0, SolveStatus::converged);
      return {std::move(a), std::move(r)};
    }
  }
  throw std::logic_error("unknown scheme id");
}

}  // namespace wpmec
