#include "wpmec/dual.hpp"

#include <cmath>
#include <numbers>

namespace wpmec {

namespace {
constexpr double ln2 = std::numbers::ln2;

double boundedness_tolerance(const HermitianMatrix& g) {
  return 1e-12 * std::max(1.0, g.frobenius_norm());
}
}  // namespace

DualPoint DualPoint::from_flat(std::span<const double> x) {
  if (x.size() < 3) throw std::invalid_argument("dual point needs at least 3 components");
  DualPoint dp;
  dp.lambda.assign(x.begin(), x.end() - 3);
  dp.mu = x[x.size() - 3];
  dp.rho = x[x.size() - 2];
  dp.theta = x[x.size() - 1];
  return dp;
}

std::vector<double> DualPoint::to_flat() const {
  std::vector<double> x(lambda);
  x.push_back(mu);
  x.push_back(rho);
  x.push_back(theta);
  return x;
}

HermitianMatrix boundedness_matrix(const DualPoint& dp, const ChannelSet& channels,
                                   const SystemConfig& cfg) {
  HermitianMatrix g(cfg.antenna_count);
  const double scale = cfg.block_seconds * cfg.energy_efficiency;
  for (int i = 0; i < cfg.user_count; ++i)
    g.axpy(scale * dp.lambda[i], channels.rank_one(i));
  g.axpy(-dp.rho, HermitianMatrix::identity(cfg.antenna_count));
  return g;
}

DualFeasibility dual_feasible(const DualPoint& dp, const ChannelSet& channels,
                              const SystemConfig& cfg) {
  HermitianMatrix g = boundedness_matrix(dp, channels, cfg);
  MaxEigPair top = max_eigpair(g);
  DualFeasibility out;
  out.violation = top.value;
  out.vector = std::move(top.vector);
  bool nonneg = dp.mu >= 0.0 && dp.rho >= 0.0 && dp.theta >= 0.0;
  for (double l : dp.lambda) nonneg = nonneg && l >= 0.0;
  out.feasible = nonneg && top.value <= boundedness_tolerance(g);
  return out;
}

double solve_q_subproblem(double lambda_i, const UserProfile& profile,
                          const SystemConfig& cfg, double weight) {
  const double cap = cfg.block_seconds * profile.max_cpu_hz / profile.cycles_per_bit;
  if (lambda_i <= 0.0) return cap;
  const double c = profile.cycles_per_bit;
  const double t = cfg.block_seconds;
  const double interior =
      std::sqrt(weight * t * t / (3.0 * lambda_i * profile.switched_capacitance * c * c * c));
  return std::min(interior, cap);
}

UserSubproblem solve_t_ell_subproblem(double lambda_i, double mu, double theta,
                                      double uplink_gain, const UserProfile& profile,
                                      const SystemConfig& cfg, double weight) {
  UserSubproblem u;
  const double margin = weight - theta;
  const double g_eff = uplink_gain / cfg.capacity_gap;
  const double b = cfg.bandwidth_hz;
  const double sigma2 = cfg.noise_power;

  if (lambda_i <= 0.0) {
    if (margin > 0.0) {
      u.branch = 1;
      u.offload_bits = cfg.mec_capacity_bits;
      u.offload_value = margin * cfg.mec_capacity_bits;
    } else {
      u.branch = 2;
    }
    return u;
  }

  const double threshold = lambda_i * sigma2 * ln2 / (b * g_eff);
  if (margin <= threshold) {
    u.branch = 3;
    return u;
  }

  u.branch = 4;
  u.rate = b * std::log2(margin / threshold);
  // Slot coefficient, simplified with the stationarity identity
  // beta'(rate) = margin g_eff / lambda:
  //   s = (lambda/g_eff)(beta(r) - r beta'(r)) + mu + lambda p_c
  //     = margin (B/ln2 - r) - lambda sigma2/g_eff + mu + lambda p_c.
  const double s = margin * (b / ln2 - u.rate) - lambda_i * sigma2 / g_eff + mu +
                   lambda_i * profile.circuit_power;
  const double tie_tol = 1e-12 * (mu + lambda_i * profile.circuit_power + 1.0);
  if (std::abs(s) <= tie_tol) {
    u.slot_tie = true;  // slot coefficient vanished; any t in [0, T] is optimal
  } else if (s < 0.0) {
    u.slot_seconds = cfg.block_seconds;
    u.offload_bits = u.rate * u.slot_seconds;
    // (t/g_eff) beta(r) + p_c t, with the same overflow-safe simplification.
    u.offload_consumption =
        u.slot_seconds * (margin * b / ln2 - lambda_i * sigma2 / g_eff) / lambda_i +
        profile.circuit_power * u.slot_seconds;
    u.offload_value = -s * u.slot_seconds;
  }
  return u;
}

std::pair<double, SubproblemSolution> evaluate_dual(const DualPoint& dp,
                                                    const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  DualFeasibility feas = dual_feasible(dp, inst.channels, cfg);
  if (!feas.feasible)
    throw DualInfeasible("dual point violates the boundedness or sign constraints");

  SubproblemSolution sub;
  sub.users.resize(cfg.user_count);
  double value = dp.mu * cfg.block_seconds +
                 dp.rho * cfg.block_seconds * cfg.max_transmit_power +
                 dp.theta * cfg.mec_capacity_bits;
  for (int i = 0; i < cfg.user_count; ++i) {
    UserSubproblem u =
        solve_t_ell_subproblem(dp.lambda[i], dp.mu, dp.theta, inst.channels.uplink_gain(i),
                               inst.profiles[i], cfg, cfg.weights[i]);
    u.local_bits = solve_q_subproblem(dp.lambda[i], inst.profiles[i], cfg, cfg.weights[i]);
    value += cfg.weights[i] * u.local_bits -
             dp.lambda[i] * local_energy(u.local_bits, inst.profiles[i], cfg);
    value += u.offload_value;
    sub.users[i] = u;
  }
  if (!std::isfinite(value))
    throw std::runtime_error("dual evaluation overflowed");
  return {value, std::move(sub)};
}

std::vector<double> dual_subgradient(const DualPoint& dp, const SubproblemSolution& sub,
                                     const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  std::vector<double> g(k + 3);
  double t_sum = 0.0, ell_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const UserSubproblem& u = sub.users[i];
    g[i] = -(local_energy(u.local_bits, inst.profiles[i], cfg) + u.offload_consumption);
    t_sum += u.slot_seconds;
    ell_sum += u.offload_bits;
    if (!std::isfinite(g[i])) throw std::runtime_error("dual subgradient overflowed");
  }
  g[k] = cfg.block_seconds - t_sum;
  g[k + 1] = cfg.block_seconds * cfg.max_transmit_power;
  g[k + 2] = cfg.mec_capacity_bits - ell_sum;
  return g;
}

std::vector<double> feasibility_cut(const DualPoint& dp, const ChannelSet& channels,
                                    const SystemConfig& cfg) {
  const int k = cfg.user_count;
  std::vector<double> cut(k + 3, 0.0);
  const double mults[3] = {dp.mu, dp.rho, dp.theta};
  for (int i = 0; i < k; ++i)
    if (dp.lambda[i] < 0.0) {
      cut[i] = -1.0;
      return cut;
    }
  for (int j = 0; j < 3; ++j)
    if (mults[j] < 0.0) {
      cut[k + j] = -1.0;
      return cut;
    }

  HermitianMatrix g = boundedness_matrix(dp, channels, cfg);
  MaxEigPair top = max_eigpair(g);
  if (top.value <= boundedness_tolerance(g))
    throw std::logic_error("feasibility_cut called at a dual-feasible point");
  const double scale = cfg.block_seconds * cfg.energy_efficiency;
  for (int i = 0; i < k; ++i) {
    cdouble inner{0.0, 0.0};
    const std::vector<cdouble>& h = channels.downlink(i);
    for (int a = 0; a < cfg.antenna_count; ++a) inner += std::conj(top.vector[a]) * h[a];
    cut[i] = scale * std::norm(inner);  // T eta v^H H_i v
  }
  cut[k + 1] = -1.0;
  return cut;
}

}  // namespace wpmec
