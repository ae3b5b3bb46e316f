#ifndef NETRECON_SHARING_HPP
#define NETRECON_SHARING_HPP

#include <functional>
#include <utility>
#include <vector>

#include "netrecon/inner_lasso.hpp"
#include "netrecon/types.hpp"

namespace netrecon {

/// Iterate of the sharing-form ADMM: per-block weights and partial
/// predictions A_i w_i, their cached average, the averaged split variable
/// z_bar and the single shared scaled dual u (all blocks' duals coincide,
/// so only one is stored).
struct SharingState {
  std::vector<VectorXd> block_w;
  std::vector<VectorXd> block_predictions;  // A_i w_i, length M each
  VectorXd avg_prediction;                  // mean of block_predictions
  VectorXd z_bar;
  VectorXd u;
  int iteration = 0;
  ResidualReport residual_report;
  std::vector<InnerState> inner_states;  // warm-start state per block
  long total_inner_iterations = 0;
};

/// Local regression target for block i:
///   b = A_i w_i^k + z_bar^k - avg(Aw)^k - u^k
VectorXd local_target(const SharingState& state, std::size_t block);

/// z_bar = (y + rho * avg_pred + rho * u) / (P + rho)
VectorXd zbar_update(const VectorXd& y, const VectorXd& avg_pred,
                     const VectorXd& u, std::size_t n_blocks, double rho);

/// True when the block's weighted-lasso solution is exactly zero, so the
/// solve can be skipped. For uniform weights this is the test
/// ||A_i^T b||_2 <= lambda/rho; with non-uniform positive weights the safe
/// sufficient form ||A_i^T b||_2 <= (lambda/rho) * min_j theta_j is used.
bool block_skip_test(const MatrixXd& A_i, const VectorXd& b, double lambda,
                     double rho, const VectorXd& theta_i);

/// Per-iteration log record: outer residuals plus the lasso objective
/// 1/2 ||A w - y||^2 + lambda ||Theta w||_1 of the current iterate.
struct SharingIterationLog {
  int iteration;
  double e_primal;
  double e_dual;
  double objective;
};

using SharingLogger = std::function<void(const SharingIterationLog&)>;

/// Sharing-form ADMM over the partitioned problem
///   min 1/2 ||A w - y||^2 + lambda ||diag(theta) w||_1.
/// Per iteration: P independent block lassos (parallel across cfg.workers
/// threads), a fixed-order reduction to the average prediction, then the
/// z_bar and dual updates. Outer stopping uses
///   e_primal = ||avg(Aw) - z_bar||,  e_dual = rho ||z_bar^k - z_bar^{k-1}||
/// with sqrt(M)-scaled absolute-plus-relative tolerances. Results are
/// identical for any worker count. `w0` optionally warm-starts the blocks.
std::pair<VectorXd, SharingState> solve_sharing(
    const RegressionProblem& problem, const BlockPartition& partition,
    const VectorXd& theta, double lambda, const SolverConfig& cfg,
    const VectorXd* w0 = nullptr, const SharingLogger& log = {});

}  // namespace netrecon

#endif
