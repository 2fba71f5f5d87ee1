#include "wpmec/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "wpmec/benchmarks.hpp"
#include "wpmec/ellipsoid.hpp"
#include "wpmec/recovery.hpp"

namespace wpmec {

namespace {

// Covariance maximizing the uniform relative harvest margin against fixed
// per-user energy demands: max m with T eta tr(Q H_i) >= (1+m) demand_i,
// tr(Q) <= T P_max, Q psd. Unlike a single beam this mixes directions for
// however many users bind, and spare margin turns into bits on re-split.
bool margin_covariance(const std::vector<double>& demand, const Instance& inst,
                       double tol, int max_iter, HermitianMatrix& out) {
  const int n = inst.cfg.antenna_count;
  const double budget = inst.cfg.block_seconds * inst.cfg.max_transmit_power;
  const double te = inst.cfg.block_seconds * inst.cfg.energy_efficiency;
  const int sd = n * n;
  ConicProblem p;
  p.psd_dim = n;
  p.box_lo = {-1.0};
  p.box_hi = {10.0};
  p.cost.assign(sd + 1, 0.0);
  p.cost[sd] = -1.0;
  for (int i = 0; i < inst.cfg.user_count; ++i) {
    if (demand[i] <= 1e-18) continue;
    std::vector<double> row(sd + 1, 0.0);
    const std::vector<double> h = hermitian_svec(inst.channels.rank_one(i));
    for (int j = 0; j < sd; ++j) row[j] = -te * h[j];
    row[sd] = demand[i];
    p.rows.push_back(std::move(row));
    p.rhs.push_back(-demand[i]);
  }
  if (p.rows.empty()) return false;
  std::vector<double> trace_row(sd + 1, 0.0);
  for (int j = 0; j < n; ++j) trace_row[j] = 1.0;
  p.rows.push_back(std::move(trace_row));
  p.rhs.push_back(budget);

  ConicSolution sol = solve_conic(p, tol, max_iter);
  HermitianMatrix q = psd_project(
      hermitian_unsvec(std::span<const double>(sol.x.data(), sd), n));
  const double tr = q.trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) return false;
  q *= budget / tr;  // spare transmit power only ever adds harvest
  out = std::move(q);
  return true;
}

}  // namespace

std::vector<double> cpu_frequencies(const std::vector<double>& local_bits,
                                    const std::vector<UserProfile>& profiles,
                                    const SystemConfig& cfg) {
  std::vector<double> f(local_bits.size(), 0.0);
  for (size_t i = 0; i < local_bits.size(); ++i)
    f[i] = profiles[i].cycles_per_bit * local_bits[i] / cfg.block_seconds;
  return f;
}

SolveReport make_report(const Allocation& alloc, const Instance& inst,
                        double dual_bound, int iterations, SolveStatus status) {
  FeasibilityReport feas = check_feasibility(alloc, inst);
  SolveReport rep;
  rep.primal_objective = objective(alloc, inst.cfg);
  rep.dual_bound = dual_bound;
  rep.relative_gap =
      (dual_bound - rep.primal_objective) / std::max(dual_bound, 1e-12);
  rep.eh_slack = feas.eh_slack;
  rep.time_slack = feas.time_slack;
  rep.capacity_slack = feas.capacity_slack;
  rep.trace_slack = feas.trace_slack;
  rep.covariance_spectrum = eig(alloc.covariance).values;
  rep.iterations = iterations;
  rep.status = status;
  return rep;
}

DualOutcome optimize_dual(const Instance& inst, const SolverOptions& opts) {
  const int dim = inst.cfg.user_count + 3;

  // The multipliers live on wildly different scales (energy prices around
  // 1e9, the capacity price below 1), which makes the raw shape matrix
  // ill-conditioned enough to collapse before the width test fires. Running
  // the ellipsoid in box-normalized coordinates keeps its arithmetic sane.
  std::vector<double> scale = dual_upper_bounds(inst);
  for (double& s : scale) s = std::max(s, 1e-12);

  std::vector<double> x(dim);
  const CutOracle oracle = [&](std::span<const double> y) -> CutOracleResult {
    for (int j = 0; j < dim; ++j) x[j] = scale[j] * y[j];
    DualPoint dp = DualPoint::from_flat(x);
    DualFeasibility fe = dual_feasible(dp, inst.channels, inst.cfg);
    CutOracleResult cut;
    if (!fe.feasible) {
      cut.kind = CutKind::feasibility;
      cut.gradient = feasibility_cut(dp, inst.channels, inst.cfg);
    } else {
      auto [value, sub] = evaluate_dual(dp, inst);
      cut.kind = CutKind::objective;
      cut.value = value;
      cut.gradient = dual_subgradient(dp, sub, inst);
    }
    for (int j = 0; j < dim; ++j) cut.gradient[j] *= scale[j];
    return cut;
  };

  const int cap = opts.dual_max_iter > 0 ? opts.dual_max_iter
                                         : default_max_iter(dim, opts.dual_tol);
  EllipsoidResult best;
  std::vector<double> center(dim, 0.5);
  double radius = std::sqrt(static_cast<double>(dim));
  int used = 0;
  bool width_closed = false;
  for (int round = 0; round < 3 && used < cap; ++round) {
    EllipsoidResult res = minimize(oracle, Ellipsoid::ball(center, radius),
                                   opts.dual_tol, cap - used);
    used += res.iterations;
    width_closed = res.status == EllipsoidStatus::converged;
    if (res.found_feasible &&
        (!best.found_feasible || res.best_value < best.best_value))
      best = res;
    if (!best.found_feasible || width_closed) break;
    // Re-center on the incumbent; a fresh well-conditioned ball digs further.
    center = best.best_point;
    radius *= 1e-2;
  }
  if (!best.found_feasible)
    throw std::runtime_error("joint solver: no dual-feasible point found");

  for (int j = 0; j < dim; ++j) x[j] = scale[j] * best.best_point[j];
  DualOutcome out;
  out.point = DualPoint::from_flat(x);
  out.bound = best.best_value;
  out.iterations = used;
  out.converged = width_closed;
  return out;
}

JointSolution solve_joint(const Instance& inst, const SolverOptions& opts) {
  Instance work = inst;
  if (opts.zero_local_cap)
    for (UserProfile& p : work.profiles) p.max_cpu_hz = 0.0;

  DualOutcome dual = optimize_dual(work, opts);
  RecoverySdp sdp = build_recovery_sdp(dual.point, work);
  RecoveredPrimal rec =
      solve_recovery_sdp(sdp, work, opts.sdp_tol, opts.sdp_max_iter);
  auto [alloc, report] = assemble_solution(sdp, rec, work, dual.bound, dual.iterations);

  // Independent challengers: the optimal time/bits re-split of the recovered
  // covariance and of the isotropic full-budget one, plus the pure local
  // schedule. The assembled point keeps priority unless a challenger clearly
  // wins, so the reported allocation stays the one the multipliers describe
  // whenever the recovery did its job.
  double best_value = report.primal_objective;
  bool adopted = false;
  const auto try_adopt = [&](const Allocation& cand) {
    const double v = objective(cand, work.cfg);
    if (v > best_value * (1.0 + 1e-7) && check_feasibility(cand, work).feasible) {
      best_value = v;
      alloc = cand;
      adopted = true;
      return true;
    }
    return false;
  };
  try_adopt(solve_fixed_q(alloc.covariance, work));
  try_adopt(solve_fixed_q(sdp.kkt_covariance, work));
  HermitianMatrix iso = HermitianMatrix::identity(work.cfg.antenna_count);
  iso *= work.cfg.block_seconds * work.cfg.max_transmit_power / work.cfg.antenna_count;
  try_adopt(solve_fixed_q(iso, work));
  if (!opts.zero_local_cap) try_adopt(solve_local_only(work));

  // Rank-aware polish: with more binding users than one beam can serve, aim
  // the covariance at the incumbent's consumption profile and re-split. Each
  // adopted round strictly improves a feasible point, so this never
  // regresses; skip it outright once the bound is already met.
  const auto gap_left = [&] {
    return (dual.bound - best_value) / std::max(dual.bound, 1e-12);
  };
  for (int round = 0; round < 4 && gap_left() > 0.01 * opts.gap_tol; ++round) {
    std::vector<double> demand(static_cast<size_t>(work.cfg.user_count), 0.0);
    for (int i = 0; i < work.cfg.user_count; ++i)
      demand[i] =
          local_energy(alloc.local_bits[i], work.profiles[i], work.cfg) +
          offload_energy(alloc.slot_seconds[i], alloc.offload_bits[i],
                         work.channels.uplink_gain(i), work.profiles[i],
                         work.cfg);
    HermitianMatrix aimed;
    if (!margin_covariance(demand, work, opts.sdp_tol, opts.sdp_max_iter, aimed))
      break;
    if (!try_adopt(solve_fixed_q(aimed, work))) break;
  }
  if (adopted)
    report = make_report(alloc, work, dual.bound, dual.iterations,
                         report.status);
  // The recovery program is only a construction aid; what certifies the
  // solve is the bound from the multipliers against the feasible allocation
  // actually returned.
  const bool certified = check_feasibility(alloc, work).feasible &&
                         report.relative_gap <= opts.gap_tol;
  report.status =
      certified ? SolveStatus::converged : SolveStatus::iteration_limit;
  return {std::move(alloc), std::move(report), std::move(dual.point)};
}

}  // namespace wpmec
