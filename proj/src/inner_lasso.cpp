#include "netrecon/inner_lasso.hpp"

#include <cmath>

namespace netrecon {

double soft_threshold(double x, double kappa) {
  return std::max(0.0, x - kappa) - std::max(0.0, -x - kappa);
}

VectorXd soft_threshold(const VectorXd& x, double kappa) {
  VectorXd out(x.size());
  for (Index j = 0; j < x.size(); ++j) out(j) = soft_threshold(x(j), kappa);
  return out;
}

ResidualReport check_stopping(const InnerState& state, const VectorXd& theta,
                              double rho_hat, double eps_abs, double eps_rel) {
  const double sqrt_n = std::sqrt(static_cast<double>(state.w.size()));
  const double theta_w_norm = theta.cwiseProduct(state.w).norm();
  ResidualReport report;
  report.e_primal = state.primal_residual_norm;
  report.e_dual = state.dual_residual_norm;
  report.eps_primal =
      sqrt_n * eps_abs + eps_rel * std::max(theta_w_norm, state.z_hat.norm());
  report.eps_dual = sqrt_n * eps_abs + eps_rel * rho_hat * state.u_hat.norm();
  report.converged =
      report.e_primal <= report.eps_primal && report.e_dual <= report.eps_dual;
  return report;
}

namespace {

bool factor_ok(const Eigen::LDLT<MatrixXd>& ldlt) {
  if (ldlt.info() != Eigen::Success) return false;
  const VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (!(dmax > 0.0)) return false;
  // rank deficiency shows up as pivots collapsing to ~0
  return d.minCoeff() > dmax * 1e-14;
}

}  // namespace

BlockLassoSolver::BlockLassoSolver(MatrixXd A, VectorXd theta,
                                   double lambda_hat, double rho_hat,
                                   int max_iters, double eps_abs,
                                   double eps_rel)
    : A_(std::move(A)),
      theta_(std::move(theta)),
      lambda_hat_(lambda_hat),
      rho_hat_(rho_hat),
      max_iters_(max_iters),
      eps_abs_(eps_abs),
      eps_rel_(eps_rel) {
  if (theta_.size() != A_.cols()) {
    throw ValidationError("theta has length " + std::to_string(theta_.size()) +
                          " but A has " + std::to_string(A_.cols()) +
                          " columns");
  }
  if (theta_.minCoeff() < 0.0) {
    throw ValidationError("theta entries must be nonnegative");
  }
  if (!(lambda_hat_ >= 0.0) || !(rho_hat_ > 0.0)) {
    throw ValidationError("lambda_hat must be >= 0 and rho_hat > 0");
  }

  MatrixXd normal = A_.transpose() * A_;
  normal.diagonal() += rho_hat_ * theta_.cwiseProduct(theta_);
  factor_.compute(normal);
  if (!factor_ok(factor_)) {
    const double trace = normal.trace();
    if (trace > 0.0) {
      ridged_ = true;
      normal.diagonal().array() += 1e-12 * trace / static_cast<double>(A_.cols());
      factor_.compute(normal);
    }
    if (!factor_ok(factor_)) {
      throw SolverError(
          "regularization failure: normal matrix singular even after ridge "
          "(all-zero theta row?)");
    }
  }
}

InnerState BlockLassoSolver::fresh_state() const {
  InnerState state;
  state.w = VectorXd::Zero(A_.cols());
  state.z_hat = VectorXd::Zero(A_.cols());
  state.u_hat = VectorXd::Zero(A_.cols());
  return state;
}

std::pair<VectorXd, ResidualReport> BlockLassoSolver::solve(
    const VectorXd& b, InnerState& state) const {
  if (b.size() != A_.rows()) {
    throw ValidationError("b has length " + std::to_string(b.size()) +
                          " but A has " + std::to_string(A_.rows()) + " rows");
  }
  const VectorXd At_b = A_.transpose() * b;
  const double kappa = lambda_hat_ / rho_hat_;

  ResidualReport report;
  for (int k = 0; k < max_iters_; ++k) {
    state.w = factor_.solve(At_b + rho_hat_ * theta_.cwiseProduct(state.z_hat - state.u_hat));
    const VectorXd theta_w = theta_.cwiseProduct(state.w);
    const VectorXd z_new = soft_threshold(theta_w + state.u_hat, kappa);
    state.dual_residual_norm = rho_hat_ * (z_new - state.z_hat).norm();
    state.z_hat = z_new;
    state.u_hat += theta_w - state.z_hat;
    state.primal_residual_norm = (theta_w - state.z_hat).norm();
    state.iteration = k + 1;
    report = check_stopping(state, theta_, rho_hat_, eps_abs_, eps_rel_);
    if (report.converged) break;
  }

  VectorXd w = state.w;
  for (Index j = 0; j < w.size(); ++j) {
    if (theta_(j) > 0.0 && state.z_hat(j) == 0.0) w(j) = 0.0;
  }
  return {std::move(w), report};
}

std::pair<VectorXd, ResidualReport> solve_weighted_lasso(
    const MatrixXd& A, const VectorXd& b, const VectorXd& theta,
    double lambda_hat, double rho_hat, const SolverConfig& cfg) {
  BlockLassoSolver solver(A, theta, lambda_hat, rho_hat, cfg.max_admm_iters,
                          cfg.eps_abs, cfg.eps_rel);
  InnerState state = solver.fresh_state();
  return solver.solve(b, state);
}

}  // namespace netrecon
