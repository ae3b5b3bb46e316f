#ifndef NETRECON_INNER_LASSO_HPP
#define NETRECON_INNER_LASSO_HPP

#include <utility>

#include "netrecon/types.hpp"

namespace netrecon {

/// Soft thresholding S_kappa(x) = max(0, x-kappa) - max(0, -x-kappa).
double soft_threshold(double x, double kappa);
VectorXd soft_threshold(const VectorXd& x, double kappa);

/// ADMM iterate for one weighted-lasso block: primal w, split variable
/// z_hat living in Theta*w coordinates, scaled dual u_hat.
struct InnerState {
  VectorXd w;
  VectorXd z_hat;
  VectorXd u_hat;
  double primal_residual_norm = 0.0;  // ||Theta w - z_hat||
  double dual_residual_norm = 0.0;    // rho_hat * ||z_hat - z_hat_prev||
  int iteration = 0;
};

/// Absolute-plus-relative stopping report.
struct ResidualReport {
  double eps_primal = 0.0;
  double eps_dual = 0.0;
  double e_primal = 0.0;
  double e_dual = 0.0;
  bool converged = false;
};

/// Tolerances
///   eps_primal = sqrt(n)*eps_abs + eps_rel * max(||Theta w||, ||z_hat||)
///   eps_dual   = sqrt(n)*eps_abs + eps_rel * rho_hat * ||u_hat||
/// against the residual norms stored in the state; converged is their
/// conjunction.
ResidualReport check_stopping(const InnerState& state, const VectorXd& theta,
                              double rho_hat, double eps_abs, double eps_rel);

/// Solves min 1/2 ||A w - b||^2 + lambda_hat ||diag(theta) w||_1 by ADMM:
///   w      <- (A^T A + rho_hat Theta^T Theta)^-1 (A^T b + rho_hat Theta^T (z - u))
///   z_hat  <- S_{lambda_hat/rho_hat}(Theta w + u)
///   u_hat  <- u_hat + Theta w - z_hat
/// The normal-matrix factorization is built once per instance and reused
/// across solves with different b (Theta is fixed for the instance's
/// lifetime). A tiny ridge 1e-12 * trace/N is added only if the matrix is
/// numerically singular; if even that fails a SolverError is thrown.
class BlockLassoSolver {
 public:
  BlockLassoSolver(MatrixXd A, VectorXd theta, double lambda_hat,
                   double rho_hat, int max_iters, double eps_abs,
                   double eps_rel);

  /// Runs ADMM from (and updating) `state` until the stopping report
  /// converges or max_iters is reached. The returned w carries exact zeros
  /// where the converged z_hat is zero and theta is positive.
  std::pair<VectorXd, ResidualReport> solve(const VectorXd& b,
                                            InnerState& state) const;

  InnerState fresh_state() const;
  bool ridged() const { return ridged_; }
  const MatrixXd& A() const { return A_; }
  const VectorXd& theta() const { return theta_; }

 private:
  MatrixXd A_;
  VectorXd theta_;
  double lambda_hat_;
  double rho_hat_;
  int max_iters_;
  double eps_abs_;
  double eps_rel_;
  Eigen::LDLT<MatrixXd> factor_;
  bool ridged_ = false;
};

/// One-shot convenience wrapper around BlockLassoSolver with a cold start.
std::pair<VectorXd, ResidualReport> solve_weighted_lasso(
    const MatrixXd& A, const VectorXd& b, const VectorXd& theta,
    double lambda_hat, double rho_hat, const SolverConfig& cfg);

}  // namespace netrecon

#endif
