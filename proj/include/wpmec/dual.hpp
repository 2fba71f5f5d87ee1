#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wpmec/model.hpp"

namespace wpmec {

/// Multipliers of the four dualized constraint groups, one per EH constraint
/// plus time (mu), transmit-energy budget (rho) and MEC capacity (theta).
struct DualPoint {
  std::vector<double> lambda;  // per user, joules^-1 scale
  double mu = 0.0;
  double rho = 0.0;
  double theta = 0.0;

  int dim() const { return static_cast<int>(lambda.size()) + 3; }
  static DualPoint from_flat(std::span<const double> x);
  std::vector<double> to_flat() const;
};

struct DualInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-user maximizer of the time/bits subproblem, plus bookkeeping used when
/// assembling the dual value and subgradient.
struct UserSubproblem {
  double local_bits = 0.0;
  double slot_seconds = 0.0;
  double offload_bits = 0.0;
  double rate = 0.0;            // stationary offloading rate (branch 4), else 0
  int branch = 0;               // 1..4 in the order of the closed-form lemma
  bool slot_tie = false;        // slot coefficient vanished; slot pinned to 0
  double offload_consumption = 0.0;  // joules at the maximizer
  double offload_value = 0.0;        // Lagrangian contribution of (t, ell)
};

struct SubproblemSolution {
  std::vector<UserSubproblem> users;
};

struct DualFeasibility {
  bool feasible = false;
  double violation = 0.0;          // top eigenvalue of the boundedness matrix
  std::vector<cdouble> vector;     // matching unit eigenvector
};

/// sum_i T eta lambda_i h_i h_i^H - rho I; the dual function is bounded over
/// Q >= 0 iff this is negative semidefinite.
HermitianMatrix boundedness_matrix(const DualPoint& dp, const ChannelSet& channels,
                                   const SystemConfig& cfg);

DualFeasibility dual_feasible(const DualPoint& dp, const ChannelSet& channels,
                              const SystemConfig& cfg);

/// Closed-form maximizer of weight*q - lambda*zeta*C^3 q^3/T^2 over
/// [0, T f_max / C].
double solve_q_subproblem(double lambda_i, const UserProfile& profile,
                          const SystemConfig& cfg, double weight);

/// Closed-form maximizer of the per-user offloading subproblem.
UserSubproblem solve_t_ell_subproblem(double lambda_i, double mu, double theta,
                                      double uplink_gain, const UserProfile& profile,
                                      const SystemConfig& cfg, double weight);

/// Dual function value (at Q*=0) and the attaining subproblem solution.
/// Throws DualInfeasible when the boundedness condition fails.
std::pair<double, SubproblemSolution> evaluate_dual(const DualPoint& dp,
                                                    const Instance& inst);

/// Subgradient of the dual function at dp, given its maximizer.
/// Layout: [lambda_1..lambda_K, mu, rho, theta].
std::vector<double> dual_subgradient(const DualPoint& dp, const SubproblemSolution& sub,
                                     const Instance& inst);

/// Separating cut at a dual-infeasible point: either -e_j for a negative
/// multiplier or the eigenvector cut of the boundedness constraint.
/// Throws std::logic_error when dp is feasible.
std::vector<double> feasibility_cut(const DualPoint& dp, const ChannelSet& channels,
                                    const SystemConfig& cfg);

}  // namespace wpmec
