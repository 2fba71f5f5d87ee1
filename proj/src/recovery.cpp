#include "wpmec/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpmec {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

std::vector<double> hermitian_svec(const HermitianMatrix& a) {
  const int n = a.dim();
  std::vector<double> v(static_cast<size_t>(n) * n);
  int p = 0;
  for (int r = 0; r < n; ++r) v[p++] = a(r, r).real();
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      v[p++] = kSqrt2 * a(r, c).real();
      v[p++] = kSqrt2 * a(r, c).imag();
    }
  return v;
}

HermitianMatrix hermitian_unsvec(std::span<const double> v, int n) {
  if (v.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("unsvec: wrong length");
  HermitianMatrix a(n);
  int p = 0;
  for (int r = 0; r < n; ++r) a.set(r, r, v[p++]);
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      double re = v[p++] / kSqrt2;
      double im = v[p++] / kSqrt2;
      a.set(r, c, cdouble{re, im});
    }
  return a;
}

namespace {

// Dense LL^T factorization; dimensions here stay tiny (<= N^2 + K).
struct Cholesky {
  int n = 0;
  std::vector<double> l;  // row-major lower triangle in a full matrix

  void factor(const std::vector<double>& m, int dim) {
    n = dim;
    l.assign(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
      double diag = m[static_cast<size_t>(j) * n + j];
      for (int k = 0; k < j; ++k) diag -= l[static_cast<size_t>(j) * n + k] * l[static_cast<size_t>(j) * n + k];
      if (!(diag > 0.0)) throw std::runtime_error("conic solver: KKT matrix not positive definite");
      const double ljj = std::sqrt(diag);
      l[static_cast<size_t>(j) * n + j] = ljj;
      for (int i = j + 1; i < n; ++i) {
        double s = m[static_cast<size_t>(i) * n + j];
        for (int k = 0; k < j; ++k)
          s -= l[static_cast<size_t>(i) * n + k] * l[static_cast<size_t>(j) * n + k];
        l[static_cast<size_t>(i) * n + j] = s / ljj;
      }
    }
  }

  void solve(std::vector<double>& b) const {
    for (int i = 0; i < n; ++i) {
      double s = b[i];
      for (int k = 0; k < i; ++k) s -= l[static_cast<size_t>(i) * n + k] * b[k];
      b[i] = s / l[static_cast<size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = b[i];
      for (int k = i + 1; k < n; ++k) s -= l[static_cast<size_t>(k) * n + i] * b[k];
      b[i] = s / l[static_cast<size_t>(i) * n + i];
    }
  }
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ConicSolution solve_conic(const ConicProblem& p, double tol, int max_iter) {
  const int sd = p.psd_dim * p.psd_dim;
  const int nb = static_cast<int>(p.box_lo.size());
  const int d = sd + nb;
  const int m = static_cast<int>(p.rows.size());
  if (d <= 0) throw std::invalid_argument("conic solver: no variables");
  if (p.cost.size() != static_cast<size_t>(d) || p.box_hi.size() != static_cast<size_t>(nb) ||
      p.rhs.size() != static_cast<size_t>(m))
    throw std::invalid_argument("conic solver: inconsistent problem shape");
  for (const auto& row : p.rows)
    if (row.size() != static_cast<size_t>(d))
      throw std::invalid_argument("conic solver: row length mismatch");

  // Scaled copies. Column scales over the svec block stay uniform so the PSD
  // cone is preserved under scaling.
  std::vector<double> a(static_cast<size_t>(m) * d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) a[static_cast<size_t>(i) * d + j] = p.rows[i][j];
  std::vector<double> col_scale(d, 1.0), row_scale(m, 1.0);
  for (int pass = 0; pass < 10 && m > 0; ++pass) {
    std::vector<double> cn(d, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j)
        cn[j] = std::max(cn[j], std::abs(a[static_cast<size_t>(i) * d + j]));
    double block = 0.0;
    for (int j = 0; j < sd; ++j) block = std::max(block, cn[j]);
    for (int j = 0; j < sd; ++j) cn[j] = block;
    for (int j = 0; j < d; ++j) {
      const double s = 1.0 / std::sqrt(std::max(cn[j], 1e-12));
      col_scale[j] *= s;
      for (int i = 0; i < m; ++i) a[static_cast<size_t>(i) * d + j] *= s;
    }
    for (int i = 0; i < m; ++i) {
      double rn = 0.0;
      for (int j = 0; j < d; ++j) rn = std::max(rn, std::abs(a[static_cast<size_t>(i) * d + j]));
      const double s = 1.0 / std::sqrt(std::max(rn, 1e-12));
      row_scale[i] *= s;
      for (int j = 0; j < d; ++j) a[static_cast<size_t>(i) * d + j] *= s;
    }
  }
  std::vector<double> cs(d);
  for (int j = 0; j < d; ++j) cs[j] = p.cost[j] * col_scale[j];
  const double cost_scale = 1.0 / std::max(1.0, inf_norm(cs));
  for (double& v : cs) v *= cost_scale;
  std::vector<double> bs(m);
  for (int i = 0; i < m; ++i) bs[i] = p.rhs[i] * row_scale[i];
  std::vector<double> lo(nb), hi(nb);
  for (int j = 0; j < nb; ++j) {
    lo[j] = p.box_lo[j] / col_scale[sd + j];
    hi[j] = p.box_hi[j] / col_scale[sd + j];
  }

  const double sigma = 1e-6, alpha = 1.6;
  double rho = 0.1;
  Cholesky kkt;
  auto refactor = [&]() {
    std::vector<double> mmat(static_cast<size_t>(d) * d, 0.0);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c <= r; ++c) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
          s += a[static_cast<size_t>(i) * d + r] * a[static_cast<size_t>(i) * d + c];
        s *= rho;
        if (r == c) s += sigma + rho;
        mmat[static_cast<size_t>(r) * d + c] = s;
        mmat[static_cast<size_t>(c) * d + r] = s;
      }
    kkt.factor(mmat, d);
  };
  refactor();

  auto project_cone = [&](std::vector<double>& v) {
    if (sd > 0) {
      HermitianMatrix q = hermitian_unsvec(std::span<const double>(v.data(), sd), p.psd_dim);
      auto s = hermitian_svec(psd_project(q));
      std::copy(s.begin(), s.end(), v.begin());
    }
    for (int j = 0; j < nb; ++j) v[sd + j] = std::clamp(v[sd + j], lo[j], hi[j]);
  };

  std::vector<double> x(d, 0.0), z1(m, 0.0), z2(d, 0.0), y1(m, 0.0), y2(d, 0.0);
  if (p.primal_warm_start.size() == static_cast<size_t>(d))
    for (int j = 0; j < d; ++j) x[j] = p.primal_warm_start[j] / col_scale[j];
  z2 = x;
  project_cone(z2);
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += a[static_cast<size_t>(i) * d + j] * x[j];
    z1[i] = std::min(s, bs[i]);
  }
  if (p.dual_warm_start.size() == static_cast<size_t>(m))
    for (int i = 0; i < m; ++i)
      y1[i] = std::max(0.0, p.dual_warm_start[i]) * cost_scale / row_scale[i];
  std::vector<double> rhsv(d), xt(d), z1t(m), hat1(m), hat2(d);

  ConicSolution out;
  double prim_res = 1e300, dual_res = 1e300;
  double prev_rp = 1e300, prev_rd = 1e300;
  int stalled = 0;
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    for (int j = 0; j < d; ++j) rhsv[j] = sigma * x[j] - cs[j] + rho * z2[j] - y2[j];
    for (int i = 0; i < m; ++i) {
      const double w = rho * z1[i] - y1[i];
      for (int j = 0; j < d; ++j) rhsv[j] += a[static_cast<size_t>(i) * d + j] * w;
    }
    xt = rhsv;
    kkt.solve(xt);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += a[static_cast<size_t>(i) * d + j] * xt[j];
      z1t[i] = s;
    }
    for (int j = 0; j < d; ++j) x[j] = alpha * xt[j] + (1.0 - alpha) * x[j];
    for (int i = 0; i < m; ++i) hat1[i] = alpha * z1t[i] + (1.0 - alpha) * z1[i];
    for (int j = 0; j < d; ++j) hat2[j] = alpha * xt[j] + (1.0 - alpha) * z2[j];

    for (int i = 0; i < m; ++i) z1[i] = std::min(hat1[i] + y1[i] / rho, bs[i]);
    std::vector<double> w2(d);
    for (int j = 0; j < d; ++j) w2[j] = hat2[j] + y2[j] / rho;
    project_cone(w2);
    z2 = w2;
    for (int i = 0; i < m; ++i) y1[i] += rho * (hat1[i] - z1[i]);
    for (int j = 0; j < d; ++j) y2[j] += rho * (hat2[j] - z2[j]);

    if (it % 25 == 0 || it == max_iter) {
      // Residuals in the equilibrated space.
      double rp = 0.0, ax_n = 0.0, z_n = 0.0;
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += a[static_cast<size_t>(i) * d + j] * x[j];
        rp = std::max(rp, std::abs(s - z1[i]));
        ax_n = std::max(ax_n, std::abs(s));
        z_n = std::max(z_n, std::abs(z1[i]));
      }
      for (int j = 0; j < d; ++j) {
        rp = std::max(rp, std::abs(x[j] - z2[j]));
        ax_n = std::max(ax_n, std::abs(x[j]));
        z_n = std::max(z_n, std::abs(z2[j]));
      }
      double rd = 0.0, aty_n = 0.0;
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += a[static_cast<size_t>(i) * d + j] * y1[i];
        aty_n = std::max(aty_n, std::max(std::abs(s), std::abs(y2[j])));
        rd = std::max(rd, std::abs(cs[j] + s + y2[j]));
      }
      prim_res = rp / std::max(1.0, std::max(ax_n, z_n));
      dual_res = rd / std::max(1.0, std::max(inf_norm(cs), aty_n));
      if (prim_res <= tol && dual_res <= tol) {
        out.converged = true;
        break;
      }
      // A residual plateau means the iteration sits at a fixed point short
      // of tolerance (typically a marginally infeasible instance); further
      // sweeps cannot improve it, so stop once the plateau is confirmed.
      if (std::abs(prim_res - prev_rp) <= 1e-6 * std::max(prim_res, 1e-30) &&
          std::abs(dual_res - prev_rd) <= 1e-6 * std::max(dual_res, 1e-30)) {
        if (++stalled >= 40) break;
      } else {
        stalled = 0;
      }
      prev_rp = prim_res;
      prev_rd = dual_res;
      // Frequent or aggressive rho moves keep re-exciting the iteration
      // instead of letting it contract, so react only to a severe imbalance
      // and cap each move at one order of magnitude.
      if (it % 100 == 0 && it < max_iter) {
        const double ratio = (prim_res + 1e-300) / (dual_res + 1e-300);
        if (ratio > 100.0 || ratio < 0.01) {
          const double step = std::clamp(std::sqrt(ratio), 0.1, 10.0);
          const double next = std::clamp(rho * step, 1e-6, 1e6);
          if (next != rho) {
            rho = next;
            refactor();
            stalled = 0;
          }
        }
      }
    }
  }

  out.x.resize(d);
  for (int j = 0; j < d; ++j) out.x[j] = x[j] * col_scale[j];
  out.row_duals.resize(m);
  for (int i = 0; i < m; ++i)
    out.row_duals[i] = std::max(0.0, y1[i] * row_scale[i] / cost_scale);
  out.objective = 0.0;
  for (int j = 0; j < d; ++j) out.objective += p.cost[j] * out.x[j];
  out.primal_residual = prim_res;
  out.dual_residual = dual_res;
  return out;
}

std::vector<double> recover_q_opt(const DualPoint& dp, const Instance& inst) {
  std::vector<double> q(inst.cfg.user_count);
  for (int i = 0; i < inst.cfg.user_count; ++i)
    q[i] = solve_q_subproblem(dp.lambda[i], inst.profiles[i], inst.cfg, inst.cfg.weights[i]);
  return q;
}

std::vector<double> recover_rates(const DualPoint& dp, const Instance& inst) {
  std::vector<double> r(inst.cfg.user_count, 0.0);
  for (int i = 0; i < inst.cfg.user_count; ++i) {
    UserSubproblem u =
        solve_t_ell_subproblem(dp.lambda[i], dp.mu, dp.theta, inst.channels.uplink_gain(i),
                               inst.profiles[i], inst.cfg, inst.cfg.weights[i]);
    if (u.branch == 4) r[i] = u.rate;
  }
  return r;
}

RecoverySdp build_recovery_sdp(const DualPoint& dp, const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  const int n = cfg.antenna_count;
  const int sd = n * n;
  const double t_budget = cfg.block_seconds;
  const double energy_budget = cfg.block_seconds * cfg.max_transmit_power;
  const double eh_gain = cfg.block_seconds * cfg.energy_efficiency;

  RecoverySdp sdp;
  sdp.rates = recover_rates(dp, inst);
  sdp.local_bits = recover_q_opt(dp, inst);
  for (int i = 0; i < k; ++i)
    if (sdp.rates[i] > 0.0) sdp.active.push_back(i);
  const int na = static_cast<int>(sdp.active.size());

  ConicProblem& cp = sdp.problem;
  cp.psd_dim = n;
  cp.cost.assign(sd + na, 0.0);
  for (int a = 0; a < na; ++a) {
    const int i = sdp.active[a];
    cp.cost[sd + a] = -cfg.weights[i] * sdp.rates[i];
    cp.box_lo.push_back(0.0);
    cp.box_hi.push_back(
        std::min(t_budget, cfg.mec_capacity_bits / sdp.rates[i]));
  }

  // One EH row per user (every user needs energy for its local bits).
  for (int i = 0; i < k; ++i) {
    std::vector<double> row(sd + na, 0.0);
    auto hsv = hermitian_svec(inst.channels.rank_one(i));
    for (int j = 0; j < sd; ++j) row[j] = -eh_gain * hsv[j];
    if (sdp.rates[i] > 0.0) {
      const double power =
          beta(sdp.rates[i], cfg) / inst.effective_uplink_gain(i) +
          inst.profiles[i].circuit_power;
      if (!std::isfinite(power))
        throw std::runtime_error("recovery: offloading power overflow");
      const int a = static_cast<int>(
          std::find(sdp.active.begin(), sdp.active.end(), i) - sdp.active.begin());
      row[sd + a] = power;
    }
    const double e_loc = local_energy(sdp.local_bits[i], inst.profiles[i], cfg);
    const double relax =
        1e-12 + 1e-9 * (e_loc + energy_budget * eh_gain * inst.channels.downlink_gain(i));
    cp.rows.push_back(std::move(row));
    cp.rhs.push_back(-e_loc + relax);
  }
  // Transmit-energy budget.
  {
    std::vector<double> row(sd + na, 0.0);
    auto isv = hermitian_svec(HermitianMatrix::identity(n));
    for (int j = 0; j < sd; ++j) row[j] = isv[j];
    cp.rows.push_back(std::move(row));
    cp.rhs.push_back(energy_budget);
  }
  if (na > 0) {
    std::vector<double> trow(sd + na, 0.0), crow(sd + na, 0.0);
    for (int a = 0; a < na; ++a) {
      trow[sd + a] = 1.0;
      crow[sd + a] = sdp.rates[sdp.active[a]];
    }
    cp.rows.push_back(std::move(trow));
    cp.rhs.push_back(t_budget);
    cp.rows.push_back(std::move(crow));
    cp.rhs.push_back(cfg.mec_capacity_bits);
  }
  // The row multipliers of this program at the dual optimum are the dual
  // point itself; seeding them skips the slow buildup from zero.
  cp.dual_warm_start.assign(cp.rows.size(), 0.0);
  for (int i = 0; i < k; ++i) cp.dual_warm_start[i] = std::max(0.0, dp.lambda[i]);
  cp.dual_warm_start[k] = std::max(0.0, dp.rho);
  if (na > 0) {
    cp.dual_warm_start[k + 1] = std::max(0.0, dp.mu);
    cp.dual_warm_start[k + 2] = std::max(0.0, dp.theta);
  }

  // Stationarity also fixes the covariance shape: the whole transmit budget
  // rides the top eigenvector of the multiplier-weighted channel sum.
  HermitianMatrix weighted(n);
  double lambda_mass = 0.0;
  for (int i = 0; i < k; ++i)
    if (dp.lambda[i] > 0.0) {
      weighted.axpy(dp.lambda[i], inst.channels.rank_one(i));
      lambda_mass += dp.lambda[i];
    }
  if (lambda_mass > 0.0) {
    MaxEigPair top = max_eigpair(weighted);
    sdp.kkt_covariance = HermitianMatrix::outer(top.vector);
    sdp.kkt_covariance *= energy_budget;
  } else {
    sdp.kkt_covariance = HermitianMatrix::identity(n);
    sdp.kkt_covariance *= energy_budget / n;
  }

  // Seed the program there, with energy-tight slots.
  cp.primal_warm_start = hermitian_svec(sdp.kkt_covariance);
  cp.primal_warm_start.resize(static_cast<size_t>(sd) + na, 0.0);
  double t_sum = 0.0, ell_sum = 0.0;
  for (int a = 0; a < na; ++a) {
    const int i = sdp.active[a];
    const double e = harvested_energy(sdp.kkt_covariance, inst.channels.rank_one(i), cfg);
    const double e_loc = local_energy(sdp.local_bits[i], inst.profiles[i], cfg);
    const double t = std::clamp((e - e_loc) / cp.rows[i][sd + a], 0.0, cp.box_hi[a]);
    cp.primal_warm_start[sd + a] = t;
    t_sum += t;
    ell_sum += sdp.rates[i] * t;
  }
  double shrink = 1.0;
  if (t_sum > t_budget) shrink = t_budget / t_sum;
  if (ell_sum > cfg.mec_capacity_bits && ell_sum > 0.0)
    shrink = std::min(shrink, cfg.mec_capacity_bits / ell_sum);
  if (shrink < 1.0)
    for (int a = 0; a < na; ++a) cp.primal_warm_start[sd + a] *= shrink;
  return sdp;
}

RecoveredPrimal solve_recovery_sdp(const RecoverySdp& sdp, const Instance& inst,
                                   double tol, int max_iter) {
  const int n = inst.cfg.antenna_count;
  const int sd = n * n;
  ConicSolution sol = solve_conic(sdp.problem, tol, max_iter);

  RecoveredPrimal out;
  out.covariance =
      psd_project(hermitian_unsvec(std::span<const double>(sol.x.data(), sd), n));
  const double budget = inst.cfg.block_seconds * inst.cfg.max_transmit_power;
  if (out.covariance.trace() > budget && out.covariance.trace() > 0.0)
    out.covariance *= budget / out.covariance.trace();

  out.slots.assign(inst.cfg.user_count, 0.0);
  for (size_t a = 0; a < sdp.active.size(); ++a) {
    const int i = sdp.active[a];
    out.slots[i] = std::clamp(sol.x[sd + a], 0.0, sdp.problem.box_hi[a]);
    out.offload_value += inst.cfg.weights[i] * sdp.rates[i] * out.slots[i];
  }
  out.iterations = sol.iterations;
  out.converged = sol.converged;
  return out;
}

namespace {

// Given covariance and rates, pick slots then local bits so that each user
// spends as much of its harvested energy as the caps allow.
struct PolishedPrimal {
  std::vector<double> slots, local_bits;
  double objective = -1e300;
};

PolishedPrimal polish_candidate(std::vector<double> slots, const std::vector<double>& rates,
                                const std::vector<double>& harvested, const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  PolishedPrimal out;
  double t_sum = 0.0, ell_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    if (rates[i] <= 0.0) {
      slots[i] = 0.0;
      continue;
    }
    const double power = beta(rates[i], cfg) / inst.effective_uplink_gain(i) +
                         inst.profiles[i].circuit_power;
    const double eh_cap = std::max(0.0, harvested[i]) / power;
    slots[i] = std::clamp(slots[i], 0.0,
                          std::min({cfg.block_seconds, cfg.mec_capacity_bits / rates[i],
                                    eh_cap}));
    t_sum += slots[i];
    ell_sum += rates[i] * slots[i];
  }
  double shrink = 1.0;
  if (t_sum > cfg.block_seconds) shrink = std::min(shrink, cfg.block_seconds / t_sum);
  if (ell_sum > cfg.mec_capacity_bits && ell_sum > 0.0)
    shrink = std::min(shrink, cfg.mec_capacity_bits / ell_sum);
  if (shrink < 1.0)
    for (double& t : slots) t *= shrink;

  out.slots = std::move(slots);
  out.local_bits.assign(k, 0.0);
  out.objective = 0.0;
  for (int i = 0; i < k; ++i) {
    const double spent =
        out.slots[i] > 0.0
            ? offload_energy(out.slots[i], rates[i] * out.slots[i],
                             inst.channels.uplink_gain(i), inst.profiles[i], cfg)
            : 0.0;
    const double left = std::max(0.0, harvested[i] - spent);
    const double c = inst.profiles[i].cycles_per_bit;
    const double q_full = std::cbrt(left * cfg.block_seconds * cfg.block_seconds /
                                    (inst.profiles[i].switched_capacitance * c * c * c));
    out.local_bits[i] = std::min(q_full, inst.local_cap_bits(i));
    out.objective += cfg.weights[i] * (out.local_bits[i] + rates[i] * out.slots[i]);
  }
  return out;
}

}  // namespace

std::pair<Allocation, SolveReport> assemble_solution(const RecoverySdp& sdp,
                                                     const RecoveredPrimal& rec,
                                                     const Instance& inst,
                                                     double dual_bound,
                                                     int dual_iterations) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;

  // Candidate covariances (the program's own answer and the stationarity
  // one) crossed with two slot fills: the program's slots and the fully
  // energy-tightened ones. Same cap/rescale/local-bit treatment everywhere;
  // the best polished objective wins.
  std::vector<double> greedy(k, 0.0);
  for (int i = 0; i < k; ++i)
    if (sdp.rates[i] > 0.0) greedy[i] = cfg.block_seconds;
  std::vector<const HermitianMatrix*> covariances{&rec.covariance};
  if (sdp.kkt_covariance.dim() == cfg.antenna_count)
    covariances.push_back(&sdp.kkt_covariance);

  const HermitianMatrix* best_cov = nullptr;
  PolishedPrimal best;
  for (const HermitianMatrix* cov : covariances) {
    std::vector<double> harvested(k);
    for (int i = 0; i < k; ++i)
      harvested[i] = harvested_energy(*cov, inst.channels.rank_one(i), cfg);
    for (const std::vector<double>& slots : {rec.slots, greedy}) {
      PolishedPrimal cand = polish_candidate(slots, sdp.rates, harvested, inst);
      if (cand.objective > best.objective) {
        best = std::move(cand);
        best_cov = cov;
      }
    }
  }
  if (best_cov == nullptr)
    throw std::logic_error("recovery produced no usable candidate");

  Allocation alloc;
  alloc.covariance = *best_cov;
  alloc.slot_seconds = best.slots;
  alloc.local_bits = best.local_bits;
  alloc.offload_bits.assign(k, 0.0);
  for (int i = 0; i < k; ++i) alloc.offload_bits[i] = sdp.rates[i] * best.slots[i];

  FeasibilityReport feas = check_feasibility(alloc, inst);
  if (!feas.feasible)
    throw std::logic_error("recovery produced an infeasible allocation");

  SolveReport rep;
  rep.primal_objective = objective(alloc, cfg);
  rep.dual_bound = dual_bound;
  rep.relative_gap =
      (dual_bound - rep.primal_objective) / std::max(dual_bound, 1e-12);
  rep.eh_slack = feas.eh_slack;
  rep.time_slack = feas.time_slack;
  rep.capacity_slack = feas.capacity_slack;
  rep.trace_slack = feas.trace_slack;
  rep.covariance_spectrum = eig(alloc.covariance).values;
  rep.iterations = dual_iterations;
  rep.status = rec.converged ? SolveStatus::converged : SolveStatus::iteration_limit;
  return {std::move(alloc), std::move(rep)};
}

}  // namespace wpmec
