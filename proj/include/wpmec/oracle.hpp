#pragma once

#include <utility>

#include "wpmec/dual.hpp"
#include "wpmec/model.hpp"

namespace wpmec {

/// Resolution of the reference grid search. A resolution r places r+1 points
/// on each axis (both endpoints included), so doubling r keeps every coarse
/// point on the fine grid and the best value can only improve.
struct GridSpec {
  int t_points = 64;  // per time variable
  int q_points = 64;  // per local-bits variable
};

/// Exhaustive reference solve for tiny instances: one antenna (scalar
/// covariance, full budget provably optimal) and at most two users. Grids
/// cover the time simplex and the local-bit ranges; the offloaded bits at
/// each grid point follow in closed form from the leftover harvested energy,
/// and the shared capacity is split exactly, heaviest weight first. Returns
/// the best feasible allocation and its objective. Throws on unsupported
/// sizes, resolutions below 32 or grids beyond 1e8 points.
std::pair<Allocation, double> brute_force(const Instance& inst,
                                          const GridSpec& grid = {});

/// Residuals of the optimality system for an allocation/multiplier pair. All
/// entries are normalized to the objective scale, so a converged solve keeps
/// max_violation tiny while any hand-edit of the allocation shows up large.
struct KktReport {
  double local_bits_stationarity = 0.0;  // weight vs marginal local energy
  double rate_stationarity = 0.0;        // capacity margin vs marginal rate power
  double slot_stationarity = 0.0;        // sign of the per-slot value density
  double complementary_slackness = 0.0;  // multiplier x slack products
  double covariance_alignment = 0.0;     // ||G Q|| / (||G|| ||Q||)
  double max_violation = 0.0;
  bool passed = false;  // max_violation <= tol
};

KktReport kkt_check(const Allocation& alloc, const DualPoint& dp,
                    const Instance& inst, double tol = 1e-4);

}  // namespace wpmec
