#pragma once

#include <vector>

#include "wpmec/dual.hpp"
#include "wpmec/model.hpp"

namespace wpmec {

/// Knobs of the joint pipeline. Defaults match the shipped tolerances: the
/// dual stage dominates runtime, the recovery program is tiny.
struct SolverOptions {
  double dual_tol = 1e-8;      // ellipsoid stopping width, relative
  int dual_max_iter = 0;       // 0 = scale with the multiplier dimension
  double sdp_tol = 1e-7;       // recovery program residual target
  int sdp_max_iter = 50000;
  double gap_tol = 1e-4;       // certified duality gap counting as converged
  bool zero_local_cap = false; // treat every local cap T f_max / C as zero
};

/// Result of the dual stage: the best multipliers seen, the matching bound on
/// the primal optimum, and whether the cut width closed below tolerance.
struct DualOutcome {
  DualPoint point;
  double bound = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes the dual function by the ellipsoid method over the multiplier
/// cone, alternating objective cuts with boundedness feasibility cuts.
DualOutcome optimize_dual(const Instance& inst, const SolverOptions& opts = {});

/// Everything the full pipeline produces: the allocation, its certificate
/// report, and the multipliers backing the certificate.
struct JointSolution {
  Allocation alloc;
  SolveReport report;
  DualPoint dual;
};

/// Full pipeline: dual descent, primal recovery, then a pool of independent
/// re-splits of the recovered covariance that guards the dominance property
/// against recovery shortfall.
JointSolution solve_joint(const Instance& inst, const SolverOptions& opts = {});

/// f_i = C_i q_i / T, the equal-speed CPU schedule implied by a bit count.
std::vector<double> cpu_frequencies(const std::vector<double>& local_bits,
                                    const std::vector<UserProfile>& profiles,
                                    const SystemConfig& cfg);

/// Certificate report for an externally produced allocation. The gap fields
/// are meaningful only when a dual bound is supplied (NaN otherwise).
SolveReport make_report(const Allocation& alloc, const Instance& inst,
                        double dual_bound, int iterations, SolveStatus status);

}  // namespace wpmec
