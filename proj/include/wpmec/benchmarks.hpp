#pragma once

#include <string>

#include "wpmec/model.hpp"
#include "wpmec/solver.hpp"

namespace wpmec {

/// The compared designs: the joint pipeline plus the three restricted schemes.
enum class SchemeId { joint, local_only, offload_only, isotropic };

std::string to_string(SchemeId id);
/// Accepts the hyphenated names used in configs and CSVs ("local-only", ...).
SchemeId scheme_from_string(const std::string& name);

/// Solves the block allocation with the covariance frozen, so only the
/// time/bits split is free. A two-multiplier dual (time and capacity prices)
/// drives per-user subproblems whose energy price is found by bisection on
/// each user's consumption; the result is feasible and its value sits within
/// 1e-4 relative of the fixed-covariance optimum (in practice far closer).
Allocation solve_fixed_q(const HermitianMatrix& covariance, const Instance& inst);

/// Local computing only (no offloading): picks the energy covariance by
/// projected supergradient ascent restarted from each user's aligned rank-one
/// beam, then computes bits at the harvested-energy limit.
Allocation solve_local_only(const Instance& inst);

/// Offloading only: the full joint pipeline with every local cap forced to
/// zero.
Allocation solve_offload_only(const Instance& inst, const SolverOptions& opts = {});

/// Isotropic transmission Q = pI: golden-section search of the per-antenna
/// power p over [0, T P_max / N] around solve_fixed_q, endpoints included.
Allocation solve_isotropic(const Instance& inst);

/// Uniform dispatch used by sweeps and the command line.
struct SchemeResult {
  Allocation alloc;
  SolveReport report;
};
SchemeResult solve_scheme(SchemeId id, const Instance& inst,
                          const SolverOptions& opts = {});

}  // namespace wpmec
