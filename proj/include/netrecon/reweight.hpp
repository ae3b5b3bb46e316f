#ifndef NETRECON_REWEIGHT_HPP
#define NETRECON_REWEIGHT_HPP

#include <functional>
#include <vector>

#include "netrecon/sharing.hpp"
#include "netrecon/types.hpp"

namespace netrecon {

/// Outer-loop state of the reweighting iteration. gamma[j] is zero wherever
/// the column is pruned (active_mask false); alpha carries +inf sentinels
/// there and pruned columns are never revived.
struct ReweightState {
  VectorXd theta;
  VectorXd gamma;
  VectorXd alpha;
  std::vector<bool> active_mask;
  int outer_iteration = 0;
  double objective = 0.0;
};

/// alpha_j = A_j^T (sigma2 I + A Gamma A^T)^-1 A_j, the curvature weights
/// behind the reweighting step. Computed via a Cholesky factorization of the
/// M x M middle matrix. Throws SolverError when the middle matrix is
/// singular (sigma2 = 0 with Gamma = 0).
VectorXd alpha_update(const MatrixXd& A, const VectorXd& gamma, double sigma2);

/// Masked variant: inactive columns receive +inf and are excluded from the
/// middle matrix.
VectorXd alpha_update(const MatrixXd& A, const VectorXd& gamma, double sigma2,
                      const std::vector<bool>& active);

/// gamma_j = |w_j| / sqrt(alpha_j); zero where w_j = 0. Throws SolverError
/// if alpha_j = 0 meets a nonzero w_j.
VectorXd gamma_closed_form(const VectorXd& w, const VectorXd& alpha);

/// theta_j = [A_j^T (sigma2 I + A diag(|w_new|/theta_prev) A^T)^-1 A_j]^1/2,
/// i.e. sqrt . alpha_update . gamma_closed_form with alpha = theta_prev^2.
VectorXd theta_update(const MatrixXd& A, const VectorXd& theta_prev,
                      const VectorXd& w_new, double sigma2);

/// Mask keeping columns with |w_j| >= prune_rel * ||w||_2.
std::vector<bool> prune_mask(const VectorXd& w, double prune_rel);

/// Marginal-likelihood cost in w-space:
///   ||A w - y||^2 + sigma2 * sum_j w_j^2/gamma_j + log det(sigma2 I + A Gamma A^T)
/// Terms with w_j = gamma_j = 0 contribute nothing; w_j != 0 with
/// gamma_j = 0 makes the value +inf.
double dual_objective(const MatrixXd& A, const VectorXd& y, const VectorXd& w,
                      const VectorXd& gamma, double sigma2);

/// Posterior mean w = Gamma A^T (sigma2 I + A Gamma A^T)^-1 y.
VectorXd posterior_mean(const MatrixXd& A, const VectorXd& y,
                        const VectorXd& gamma, double sigma2);

enum class Variant { ReweightedL1, ReweightedL2, Lasso };

Variant variant_from_name(const std::string& name);
std::string variant_name(Variant v);

/// Effective l1 penalty: the larger of sigma2 (the curvature-derived
/// scaling) and lambda_scale * ||A^T y||_inf (the data-driven rule). Both
/// contributions are reported on the Estimate.
struct LambdaResolution {
  double sigma2_term;
  double scale_term;
  double effective;
};
LambdaResolution resolve_lambda(const RegressionProblem& problem,
                                const SolverConfig& cfg);

/// Observer invoked once per outer iteration with the current full-size
/// weight vector and reweight state.
struct OuterIteration {
  int iteration;
  int active_count;
  double dual_objective;
  const VectorXd& w;
  const ReweightState& state;
};
using OuterObserver = std::function<void(const OuterIteration&)>;

/// Outer reweighted-l1 loop: theta^0 = 1 (so iteration 0 is a plain lasso),
/// then alternate sharing-ADMM weighted-lasso solves with the
/// theta <- sqrt(alpha) update, pruning columns below prune_rel * ||w||
/// after each pass. Stops when the active set is unchanged and the relative
/// change of w drops below 1e-4, or after max_reweight_iters.
Estimate reweighted_lasso(const RegressionProblem& problem,
                          const BlockPartition& partition,
                          const SolverConfig& cfg,
                          const OuterObserver& observer = {},
                          const SharingLogger& sharing_log = {});

/// Reweighted-l2 variant: closed-form ridge updates
/// w = Gamma A^T (sigma2 I + A Gamma A^T)^-1 y with the same gamma/alpha
/// recurrence. Kept as a variant without accuracy claims.
Estimate reweighted_l2(const RegressionProblem& problem,
                       const SolverConfig& cfg,
                       const OuterObserver& observer = {});

/// Single weighted-lasso pass with theta = 1: the classic lasso baseline.
Estimate plain_lasso(const RegressionProblem& problem,
                     const BlockPartition& partition, const SolverConfig& cfg,
                     const OuterObserver& observer = {},
                     const SharingLogger& sharing_log = {});

/// Dispatch by variant.
Estimate solve_variant(Variant variant, const RegressionProblem& problem,
                       const BlockPartition& partition, const SolverConfig& cfg,
                       const OuterObserver& observer = {},
                       const SharingLogger& sharing_log = {});

}  // namespace netrecon

#endif
