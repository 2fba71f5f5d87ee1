#pragma once

#include <span>
#include <utility>
#include <vector>

#include "wpmec/dual.hpp"
#include "wpmec/model.hpp"

namespace wpmec {

/// Real packing of a Hermitian matrix preserving inner products:
/// diagonal entries first, then (sqrt2*Re, sqrt2*Im) per upper off-diagonal,
/// so that dot(svec(A), svec(B)) = tr(A B).
std::vector<double> hermitian_svec(const HermitianMatrix& a);
HermitianMatrix hermitian_unsvec(std::span<const double> v, int n);

/// minimize cost . x  subject to  rows[i] . x <= rhs[i],
/// the leading psd_dim^2 svec components forming a PSD matrix, and the
/// trailing components lying in [box_lo, box_hi]. psd_dim 0 gives a plain LP.
struct ConicProblem {
  int psd_dim = 0;
  std::vector<double> box_lo, box_hi;
  std::vector<double> cost;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  /// Optional starting iterates (sizes = rows / var_count). Large multipliers
  /// take many first-order iterations to build up from zero, so seed them
  /// when known.
  std::vector<double> dual_warm_start;
  std::vector<double> primal_warm_start;

  int var_count() const {
    return psd_dim * psd_dim + static_cast<int>(box_lo.size());
  }
};

struct ConicSolution {
  std::vector<double> x;
  std::vector<double> row_duals;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Operator-splitting solver (ADMM with over-relaxation, Ruiz equilibration
/// and adaptive penalty); small dense problems only.
ConicSolution solve_conic(const ConicProblem& p, double tol = 1e-7, int max_iter = 50000);

/// Local bits per user at a converged dual point (closed form).
std::vector<double> recover_q_opt(const DualPoint& dp, const Instance& inst);
/// Offloading rate per user at a converged dual point (0 when shut off).
std::vector<double> recover_rates(const DualPoint& dp, const Instance& inst);

/// The primal-recovery program over (Q, t) at fixed rates and local bits.
struct RecoverySdp {
  ConicProblem problem;
  std::vector<double> rates;       // per user
  std::vector<double> local_bits;  // per user
  std::vector<int> active;         // users with positive rate, in variable order
  /// Covariance implied by stationarity at the dual point: the full transmit
  /// budget on the top eigenvector of the multiplier-weighted channel sum.
  HermitianMatrix kkt_covariance;
};

RecoverySdp build_recovery_sdp(const DualPoint& dp, const Instance& inst);

struct RecoveredPrimal {
  HermitianMatrix covariance;
  std::vector<double> slots;  // per user (inactive users pinned to 0)
  double offload_value = 0.0; // sum_i w_i r_i t_i achieved by the program
  int iterations = 0;
  bool converged = false;
};

RecoveredPrimal solve_recovery_sdp(const RecoverySdp& sdp, const Instance& inst,
                                   double tol = 1e-7, int max_iter = 50000);

/// Joins the pieces into an allocation: ell = r .* t, slots re-tightened so
/// each user exhausts its harvested energy when beneficial. Throws
/// std::logic_error if the result fails the feasibility check.
std::pair<Allocation, SolveReport> assemble_solution(const RecoverySdp& sdp,
                                                     const RecoveredPrimal& rec,
                                                     const Instance& inst,
                                                     double dual_bound,
                                                     int dual_iterations);

}  // namespace wpmec
