#include "wpmec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wpmec {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kInvPhi = 0.6180339887498949;

// Bits deliverable over slot t when e_off joules remain for the radio.
double invert_rate(double t, double e_off, double g_eff, const SystemConfig& cfg) {
  if (t <= 0.0 || e_off <= 0.0) return 0.0;
  const double snr = g_eff * e_off / (t * cfg.noise_power);
  return t * cfg.bandwidth_hz * std::log2(1.0 + snr);
}

// Offloadable bits of one user as a function of its slot, with the local
// energy already committed. Concave in t (perspective composition), which the
// golden-section polish relies on.
struct OffloadCurve {
  double e_free = 0.0;  // harvest minus local energy
  double p_c = 0.0;
  double g_eff = 0.0;
  double t_hi = 0.0;  // largest slot the circuit power allows within T

  double bits(double t, const SystemConfig& cfg) const {
    if (t <= 0.0) return 0.0;
    return invert_rate(t, e_free - p_c * t, g_eff, cfg);
  }
};

OffloadCurve make_curve(double harvest, double local_e, double p_c, double g_eff,
                        double t_total) {
  OffloadCurve c;
  c.e_free = std::max(0.0, harvest - local_e);
  c.p_c = p_c;
  c.g_eff = g_eff;
  c.t_hi = p_c > 0.0 ? std::min(t_total, c.e_free / p_c) : t_total;
  return c;
}

struct GoldenBest {
  double value = -1e300;
  double arg = 0.0;
};

// Maximum of a concave function on [lo, hi]; endpoints probed, best tracked.
GoldenBest golden_max(double lo, double hi, const std::function<double(double)>& f) {
  GoldenBest best;
  auto probe = [&](double t) {
    const double v = f(t);
    if (v > best.value) {
      best.value = v;
      best.arg = t;
    }
  };
  probe(lo);
  if (hi <= lo) return best;
  probe(hi);
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 70 && b - a > 1e-13 * (hi - lo); ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    if (f1 > best.value) {
      best.value = f1;
      best.arg = x1;
    }
    if (f2 > best.value) {
      best.value = f2;
      best.arg = x2;
    }
  }
  return best;
}

}  // namespace

std::pair<Allocation, double> brute_force(const Instance& inst, const GridSpec& grid) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  if (cfg.antenna_count != 1 || k > 2)
    throw std::invalid_argument("brute_force: supported sizes are N = 1, K <= 2");
  if (grid.t_points < 32 || grid.q_points < 32)
    throw std::invalid_argument("brute_force: grid resolution must be >= 32");
  const int rt = grid.t_points, rq = grid.q_points;
  const double t_combos = k == 1 ? rt + 1.0 : (rt + 1.0) * (rt + 2.0) / 2.0;
  if (t_combos * std::pow(rq + 1.0, k) > 1e8)
    throw std::invalid_argument("brute_force: grid exceeds 1e8 points");

  const double t_total = cfg.block_seconds;
  HermitianMatrix qcov(1);
  qcov.set(0, 0, t_total * cfg.max_transmit_power);

  // With the covariance frozen at full budget, each user's harvest is fixed,
  // which caps its local bits by energy alone; gridding past that cap would
  // only add infeasible points.
  std::vector<double> harvest(k), q_hi(k);
  std::vector<std::vector<double>> qval(k), loc_e(k), lmax(k);
  for (int i = 0; i < k; ++i) {
    const UserProfile& p = inst.profiles[i];
    harvest[i] = harvested_energy(qcov, inst.channels.rank_one(i), cfg);
    const double c3 = p.cycles_per_bit * p.cycles_per_bit * p.cycles_per_bit;
    q_hi[i] = std::min(inst.local_cap_bits(i),
                       std::cbrt(harvest[i] * t_total * t_total /
                                 (p.switched_capacitance * c3)));
    qval[i].resize(rq + 1);
    loc_e[i].resize(rq + 1);
    for (int jq = 0; jq <= rq; ++jq) {
      qval[i][jq] = q_hi[i] * jq / rq;
      loc_e[i][jq] = local_energy(qval[i][jq], p, cfg);
    }

    // lmax[jt*(rq+1)+jq]: offloadable bits at that grid point, -1 when the
    // circuit power of the slot already overruns the leftover energy.
    lmax[i].resize(static_cast<size_t>(rt + 1) * (rq + 1));
    for (int jt = 0; jt <= rt; ++jt) {
      const double t = t_total * jt / rt;
      for (int jq = 0; jq <= rq; ++jq) {
        const double e_off = harvest[i] - loc_e[i][jq] - p.circuit_power * t;
        lmax[i][static_cast<size_t>(jt) * (rq + 1) + jq] =
            e_off < 0.0 ? -1.0
                        : invert_rate(t, e_off, inst.effective_uplink_gain(i), cfg);
      }
    }
  }

  Allocation best = Allocation::zeros(1, k);
  best.covariance = qcov;
  double best_obj = -1.0, best_st = 0.0;
  const double lcap = cfg.mec_capacity_bits;

  if (k == 1) {
    const double w = cfg.weights[0];
    const UserProfile& p = inst.profiles[0];
    for (int jq = 0; jq <= rq; ++jq) {
      // Dyadic grid over the slot keeps doubled resolutions nested; the
      // golden-section pass is resolution-independent, so the best of the
      // two can only improve as the grid refines.
      double l_best = 0.0, t_best = 0.0;
      for (int jt = 0; jt <= rt; ++jt) {
        const double lm = lmax[0][static_cast<size_t>(jt) * (rq + 1) + jq];
        if (lm > l_best) {
          l_best = lm;
          t_best = t_total * jt / rt;
        }
      }
      const OffloadCurve curve = make_curve(harvest[0], loc_e[0][jq],
                                            p.circuit_power,
                                            inst.effective_uplink_gain(0), t_total);
      const GoldenBest g = golden_max(
          0.0, curve.t_hi, [&](double t) { return curve.bits(t, cfg); });
      if (g.value > l_best) {
        l_best = g.value;
        t_best = g.arg;
      }
      const double ell = std::min(l_best, lcap);
      const double st = ell > 0.0 ? t_best : 0.0;
      const double obj = w * (qval[0][jq] + ell);
      if (obj > best_obj || (obj == best_obj && st < best_st)) {
        best_obj = obj;
        best_st = st;
        best.slot_seconds[0] = st;
        best.offload_bits[0] = ell;
        best.local_bits[0] = qval[0][jq];
      }
    }
    return {best, std::max(best_obj, 0.0)};
  }

  // Two users. The shared capacity splits exactly, heaviest weight first
  // (optimal for a box plus one budget row), so the only coupled search is
  // over the time simplex: a dyadic grid scan plus a nested golden-section
  // polish, valid because the split value is jointly concave in the slots.
  const double w0 = cfg.weights[0], w1 = cfg.weights[1];
  const auto split_value = [&](double lm0, double lm1, double& e0, double& e1) {
    if (w0 >= w1) {
      e0 = std::min(lm0, lcap);
      e1 = std::min(lm1, lcap - e0);
    } else {
      e1 = std::min(lm1, lcap);
      e0 = std::min(lm0, lcap - e1);
    }
    return w0 * e0 + w1 * e1;
  };

  for (int k0 = 0; k0 <= rq; ++k0) {
    const double base0 = w0 * qval[0][k0];
    for (int k1 = 0; k1 <= rq; ++k1) {
      const double base = base0 + w1 * qval[1][k1];
      double off_best = 0.0, t0_best = 0.0, t1_best = 0.0;
      for (int j0 = 0; j0 <= rt; ++j0) {
        const double lm0 = lmax[0][static_cast<size_t>(j0) * (rq + 1) + k0];
        if (lm0 < 0.0) continue;
        for (int j1 = 0; j0 + j1 <= rt; ++j1) {
          const double lm1 = lmax[1][static_cast<size_t>(j1) * (rq + 1) + k1];
          if (lm1 < 0.0) continue;
          double e0, e1;
          const double v = split_value(lm0, lm1, e0, e1);
          if (v > off_best) {
            off_best = v;
            t0_best = t_total * j0 / rt;
            t1_best = t_total * j1 / rt;
          }
        }
      }

      const OffloadCurve c0 = make_curve(harvest[0], loc_e[0][k0],
                                         inst.profiles[0].circuit_power,
                                         inst.effective_uplink_gain(0), t_total);
      const OffloadCurve c1 = make_curve(harvest[1], loc_e[1][k1],
                                         inst.profiles[1].circuit_power,
                                         inst.effective_uplink_gain(1), t_total);
      double t1_at = 0.0;
      const auto inner = [&](double t0) {
        const double lm0 = c0.bits(t0, cfg);
        const GoldenBest gi = golden_max(
            0.0, std::min(c1.t_hi, t_total - t0), [&](double t1) {
              double e0, e1;
              return split_value(lm0, c1.bits(t1, cfg), e0, e1);
            });
        t1_at = gi.arg;
        return gi.value;
      };
      const GoldenBest go = golden_max(0.0, c0.t_hi, inner);
      if (go.value > off_best) {
        off_best = inner(go.arg);  // refresh t1_at for the winning slot
        t0_best = go.arg;
        t1_best = t1_at;
      }

      double e0, e1;
      split_value(c0.bits(t0_best, cfg), c1.bits(t1_best, cfg), e0, e1);
      const double obj = base + w0 * e0 + w1 * e1;
      const double st = (e0 > 0.0 ? t0_best : 0.0) + (e1 > 0.0 ? t1_best : 0.0);
      if (obj > best_obj || (obj == best_obj && st < best_st)) {
        best_obj = obj;
        best_st = st;
        best.slot_seconds[0] = e0 > 0.0 ? t0_best : 0.0;
        best.slot_seconds[1] = e1 > 0.0 ? t1_best : 0.0;
        best.offload_bits[0] = e0;
        best.offload_bits[1] = e1;
        best.local_bits[0] = qval[0][k0];
        best.local_bits[1] = qval[1][k1];
      }
    }
  }
  return {best, std::max(best_obj, 0.0)};
}

KktReport kkt_check(const Allocation& alloc, const DualPoint& dp,
                    const Instance& inst, double tol) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  KktReport rep;
  const double scale = 1.0 + std::abs(objective(alloc, cfg));
  const double t_total = cfg.block_seconds;

  double t_sum = 0.0, ell_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const UserProfile& p = inst.profiles[i];
    const double w = cfg.weights[i];
    const double lam = dp.lambda[i];
    const double q = alloc.local_bits[i];
    const double t = alloc.slot_seconds[i];
    const double ell = alloc.offload_bits[i];
    t_sum += t;
    ell_sum += ell;

    // Local bits: the weight must balance the marginal local energy price
    // inside the box and point outward at its ends.
    const double c3 = p.cycles_per_bit * p.cycles_per_bit * p.cycles_per_bit;
    const double nu = w - 3.0 * lam * p.switched_capacitance * c3 * q * q /
                              (t_total * t_total);
    const double cap = inst.local_cap_bits(i);
    const double q_eps = 1e-6 * std::max(cap, 1.0);
    double nu_resid;
    if (q <= q_eps)
      nu_resid = std::max(0.0, nu);
    else if (q >= cap - q_eps)
      nu_resid = std::max(0.0, -nu);
    else
      nu_resid = std::abs(nu);
    rep.local_bits_stationarity = std::max(
        rep.local_bits_stationarity, nu_resid * std::max(q, 1.0) / scale);

    const double g_eff = inst.effective_uplink_gain(i);
    const double margin = w - dp.theta;
    const double t_eps = 1e-9 * t_total;
    double rate_resid = 0.0, slot_resid = 0.0;
    if (t <= t_eps) {
      // Parked user: the best value density over all feasible rate rays must
      // be non-positive. At positive lambda that density peaks at the
      // stationary rate; at zero lambda any margin is pure unclaimed value.
      if (lam > 0.0) {
        const double threshold = lam * cfg.noise_power * kLn2 /
                                 (cfg.bandwidth_hz * g_eff);
        if (margin > threshold) {
          const double r_star = cfg.bandwidth_hz * std::log2(margin / threshold);
          const double s_star = margin * (cfg.bandwidth_hz / kLn2 - r_star) -
                                lam * cfg.noise_power / g_eff + dp.mu +
                                lam * p.circuit_power;
          slot_resid = std::max(0.0, -s_star) * t_total;
        }
      } else if (margin > 0.0) {
        slot_resid = margin * cfg.mec_capacity_bits;
      }
    } else {
      const double r = alloc.rate(i);
      if (ell > 1e-6)
        rate_resid = std::abs(margin - lam * beta_prime(r, cfg) / g_eff) * ell;
      else
        rate_resid = std::max(0.0, margin - lam * beta_prime(0.0, cfg) / g_eff) *
                     t * cfg.bandwidth_hz / kLn2;
      // Value density of the running slot, matched to its position in [0, T].
      const double density =
          margin * r - lam * beta(r, cfg) / g_eff - lam * p.circuit_power - dp.mu;
      if (t >= t_total - t_eps)
        slot_resid = std::max(0.0, -density) * t_total;
      else
        slot_resid = std::abs(density) * t_total;
    }
    rep.rate_stationarity = std::max(rep.rate_stationarity, rate_resid / scale);
    rep.slot_stationarity = std::max(rep.slot_stationarity, slot_resid / scale);

    const double harvested =
        harvested_energy(alloc.covariance, inst.channels.rank_one(i), cfg);
    const double consumed =
        local_energy(q, p, cfg) +
        offload_energy(t, ell, inst.channels.uplink_gain(i), p, cfg);
    rep.complementary_slackness =
        std::max(rep.complementary_slackness,
                 std::abs(lam * (harvested - consumed)) / scale);
  }
  const double budget = t_total * cfg.max_transmit_power;
  rep.complementary_slackness =
      std::max({rep.complementary_slackness,
                std::abs(dp.mu * (t_total - t_sum)) / scale,
                std::abs(dp.theta * (cfg.mec_capacity_bits - ell_sum)) / scale,
                std::abs(dp.rho * (budget - alloc.covariance.trace())) / scale});

  // Covariance alignment: the boundedness matrix must annihilate Q. The
  // denominator uses the matrix's constituent magnitudes; the norm of G
  // itself vanishes exactly where the condition holds, so it cannot scale.
  const HermitianMatrix g = boundedness_matrix(dp, inst.channels, cfg);
  const int n = cfg.antenna_count;
  double g_scale = std::abs(dp.rho) * std::sqrt(static_cast<double>(n));
  for (int i = 0; i < k; ++i)
    g_scale += t_total * cfg.energy_efficiency * std::abs(dp.lambda[i]) *
               inst.channels.rank_one(i).frobenius_norm();
  const std::vector<cdouble> gm = g.to_row_major();
  const std::vector<cdouble> qm = alloc.covariance.to_row_major();
  double prod2 = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cdouble sum = 0.0;
      for (int j = 0; j < n; ++j)
        sum += gm[static_cast<size_t>(r) * n + j] * qm[static_cast<size_t>(j) * n + c];
      prod2 += std::norm(sum);
    }
  const double denom = g_scale * alloc.covariance.frobenius_norm();
  rep.covariance_alignment = denom > 1e-300 ? std::sqrt(prod2) / denom : 0.0;

  rep.max_violation = std::max(
      {rep.local_bits_stationarity, rep.rate_stationarity,
       rep.slot_stationarity, rep.complementary_slackness,
       rep.covariance_alignment});
  rep.passed = rep.max_violation <= tol;
  return rep;
}

}  // namespace wpmec
