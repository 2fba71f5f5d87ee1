#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "wpmec/model.hpp"

namespace wpmec {

enum class CutKind { objective, feasibility };

struct CutOracleResult {
  CutKind kind = CutKind::objective;
  double value = 0.0;  // objective at the query point; ignored for feasibility cuts
  std::vector<double> gradient;
};

/// Queried at the ellipsoid center; returns either an objective cut (value +
/// subgradient) or a feasibility cut separating the center from the feasible set.
using CutOracle = std::function<CutOracleResult(std::span<const double>)>;

struct Ellipsoid {
  std::vector<double> center;
  std::vector<double> shape;  // symmetric positive definite, row-major n*n

  int dim() const { return static_cast<int>(center.size()); }
  static Ellipsoid ball(std::vector<double> center, double radius);
};

enum class EllipsoidStatus { converged, iteration_limit, degenerate };

struct EllipsoidResult {
  std::vector<double> best_point;
  double best_value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  EllipsoidStatus status = EllipsoidStatus::iteration_limit;
  bool found_feasible = false;
};

/// One central-cut update of (center, shape) along gradient g; returns the cut
/// width sqrt(g^T P g) measured before the update. Requires dim >= 2.
double ellipsoid_update(Ellipsoid& e, std::span<const double> gradient);

/// Iteration budget heuristic: 10 n^2 scaled by the requested digits.
int default_max_iter(int dim, double tol);

/// Minimizes a convex function over a convex set, both described by `oracle`.
/// Stops when an objective cut has width <= tol * (1 + |best value|).
/// Dimension 1 falls back to plain bisection.
EllipsoidResult minimize(const CutOracle& oracle, Ellipsoid initial, double tol,
                         int max_iter);

/// Componentwise upper bounds [lambda_1..lambda_K, mu, rho, theta] of a box
/// containing the dual optimum (crude but provable-scale bounds).
std::vector<double> dual_upper_bounds(const Instance& inst);

/// Ball around the box midpoint, radius = box diagonal; center strictly
/// dual-feasible.
Ellipsoid initial_dual_ellipsoid(const Instance& inst);

}  // namespace wpmec
