#include "wpmec/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpmec {

Ellipsoid Ellipsoid::ball(std::vector<double> center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ellipsoid: radius must be > 0");
  Ellipsoid e;
  const size_t n = center.size();
  e.center = std::move(center);
  e.shape.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) e.shape[i * n + i] = radius * radius;
  return e;
}

double ellipsoid_update(Ellipsoid& e, std::span<const double> gradient) {
  const int n = e.dim();
  if (n < 2) throw std::logic_error("ellipsoid_update needs dimension >= 2");
  if (gradient.size() != static_cast<size_t>(n))
    throw std::invalid_argument("ellipsoid_update: gradient size mismatch");

  std::vector<double> pg(n, 0.0);
  double quad = 0.0;
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int c = 0; c < n; ++c) acc += e.shape[r * n + c] * gradient[c];
    pg[r] = acc;
    quad += gradient[r] * acc;
  }
  if (!(quad > 0.0) || !std::isfinite(quad)) return 0.0;
  const double gamma = std::sqrt(quad);

  const double nn = static_cast<double>(n);
  const double step = 1.0 / ((nn + 1.0) * gamma);
  for (int r = 0; r < n; ++r) e.center[r] -= step * pg[r];
  const double scale = nn * nn / (nn * nn - 1.0);
  const double rank1 = 2.0 / ((nn + 1.0) * quad);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c) {
      double v = scale * (e.shape[r * n + c] - rank1 * pg[r] * pg[c]);
      e.shape[r * n + c] = v;
      e.shape[c * n + r] = v;  // keep exact symmetry
    }
  return gamma;
}

int default_max_iter(int dim, double tol) {
  double digits = std::max(6.0, std::log10(1.0 / std::max(tol, 1e-300)));
  return static_cast<int>(10.0 * dim * dim * digits) + 100;
}

namespace {

EllipsoidResult bisect_1d(const CutOracle& oracle, const Ellipsoid& initial, double tol,
                          int max_iter) {
  double radius = std::sqrt(std::max(initial.shape[0], 0.0));
  double lo = initial.center[0] - radius, hi = initial.center[0] + radius;
  EllipsoidResult out;
  out.best_point = {initial.center[0]};
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    const double mid = 0.5 * (lo + hi);
    const double x[1] = {mid};
    CutOracleResult cut = oracle(std::span<const double>(x, 1));
    const double g = cut.gradient.at(0);
    if (cut.kind == CutKind::objective) {
      if (cut.value < out.best_value) {
        out.best_value = cut.value;
        out.best_point = {mid};
      }
      out.found_feasible = true;
      const double width = 0.5 * (hi - lo) * std::abs(g);
      if (width <= tol * (1.0 + std::abs(out.best_value))) {
        out.status = EllipsoidStatus::converged;
        return out;
      }
    }
    if (g > 0.0)
      hi = mid;
    else if (g < 0.0)
      lo = mid;
    else if (cut.kind == CutKind::feasibility) {
      out.status = EllipsoidStatus::degenerate;
      return out;
    }
  }
  out.status = EllipsoidStatus::iteration_limit;
  return out;
}

}  // namespace

EllipsoidResult minimize(const CutOracle& oracle, Ellipsoid initial, double tol,
                         int max_iter) {
  const int n = initial.dim();
  if (n < 1) throw std::invalid_argument("minimize: empty ellipsoid");
  if (n == 1) return bisect_1d(oracle, initial, tol, max_iter);

  EllipsoidResult out;
  out.best_point = initial.center;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    CutOracleResult cut = oracle(initial.center);
    if (cut.gradient.size() != static_cast<size_t>(n))
      throw std::invalid_argument("minimize: cut gradient size mismatch");

    double quad = 0.0;
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) acc += initial.shape[r * n + c] * cut.gradient[c];
      quad += cut.gradient[r] * acc;
    }
    const double gamma = quad > 0.0 ? std::sqrt(quad) : 0.0;

    if (cut.kind == CutKind::objective) {
      if (cut.value < out.best_value) {
        out.best_value = cut.value;
        out.best_point = initial.center;
      }
      out.found_feasible = true;
      if (gamma <= tol * (1.0 + std::abs(out.best_value))) {
        out.status = gamma > 0.0 || std::isfinite(quad) ? EllipsoidStatus::converged
                                                        : EllipsoidStatus::degenerate;
        return out;
      }
    } else if (gamma <= 0.0 || !std::isfinite(gamma)) {
      out.status = EllipsoidStatus::degenerate;
      return out;
    }
    if (ellipsoid_update(initial, cut.gradient) <= 0.0) {
      out.status = EllipsoidStatus::degenerate;
      return out;
    }
  }
  out.status = EllipsoidStatus::iteration_limit;
  return out;
}

std::vector<double> dual_upper_bounds(const Instance& inst) {
  const SystemConfig& cfg = inst.cfg;
  const int k = cfg.user_count;
  const double w_max = *std::max_element(cfg.weights.begin(), cfg.weights.end());
  const double t = cfg.block_seconds;

  std::vector<double> ub(k + 3, 0.0);
  double lambda_top = 0.0;
  for (int i = 0; i < k; ++i) {
    const double c = inst.profiles[i].cycles_per_bit;
    // Beyond this price the local subproblem yields under one bit.
    ub[i] = w_max * t * t / (3.0 * inst.profiles[i].switched_capacitance * c * c * c);
    lambda_top = std::max(lambda_top, ub[i]);
  }
  double g_best = 0.0, h_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    g_best = std::max(g_best, inst.effective_uplink_gain(i));
    h_sum += inst.channels.downlink_gain(i);
  }
  const double r_ub = cfg.bandwidth_hz *
                      std::log2(1.0 + cfg.max_transmit_power * g_best * t / cfg.noise_power);
  ub[k] = w_max * r_ub;
  // Sized so the box midpoint keeps the boundedness matrix strictly negative.
  ub[k + 1] = 1.5 * std::max(1.0, t) * cfg.energy_efficiency * lambda_top * h_sum;
  ub[k + 2] = w_max;
  return ub;
}

Ellipsoid initial_dual_ellipsoid(const Instance& inst) {
  std::vector<double> ub = dual_upper_bounds(inst);
  double diag2 = 0.0;
  for (double v : ub) diag2 += v * v;
  std::vector<double> center(ub.size());
  for (size_t i = 0; i < ub.size(); ++i) center[i] = 0.5 * ub[i];
  return Ellipsoid::ball(std::move(center), std::sqrt(diag2));
}

}  // namespace wpmec
