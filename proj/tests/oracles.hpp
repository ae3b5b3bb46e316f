// Test-only reference implementations, kept independent of the code paths
// they check.

#ifndef NETRECON_TESTS_ORACLES_HPP
#define NETRECON_TESTS_ORACLES_HPP

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double weighted_lasso_objective(const MatrixXd& A, const VectorXd& b,
                                       const VectorXd& theta, double lambda,
                                       const VectorXd& w) {
  return 0.5 * (A * w - b).squaredNorm() +
         lambda * theta.cwiseProduct(w).lpNorm<1>();
}

/// FISTA reference for min 1/2||Aw-b||^2 + lambda ||diag(theta) w||_1,
/// run to a tiny prox-residual tolerance. Deliberately naive: fixed step
/// 1/L with L from a full eigendecomposition.
inline VectorXd fista_weighted_lasso(const MatrixXd& A, const VectorXd& b,
                                     const VectorXd& theta, double lambda,
                                     double tol = 1e-10,
                                     int max_iters = 500000) {
  const MatrixXd gram = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  const double L = std::max(eig.eigenvalues().maxCoeff(), 1e-12);
  const double step = 1.0 / L;

  const Index n = A.cols();
  VectorXd w = VectorXd::Zero(n);
  VectorXd v = w;
  double t = 1.0;
  const VectorXd At_b = A.transpose() * b;

  for (int k = 0; k < max_iters; ++k) {
    const VectorXd grad = gram * v - At_b;
    VectorXd w_next(n);
    for (Index j = 0; j < n; ++j) {
      const double raw = v(j) - step * grad(j);
      const double kappa = step * lambda * theta(j);
      w_next(j) = std::max(0.0, raw - kappa) - std::max(0.0, -raw - kappa);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const VectorXd v_next = w_next + ((t - 1.0) / t_next) * (w_next - w);
    const double move = (w_next - w).norm() / std::max(1.0, w.norm());
    w = w_next;
    v = v_next;
    t = t_next;
    if (move < tol) break;
  }
  return w;
}

/// log det(sigma2 I + A Gamma A^T) by eigenvalues; used for central finite
/// differences of the evidence term.
inline double log_det_middle(const MatrixXd& A, const VectorXd& gamma,
                             double sigma2) {
  const Index m = A.rows();
  MatrixXd middle = sigma2 * MatrixXd::Identity(m, m);
  middle += A * gamma.asDiagonal() * A.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(middle);
  double out = 0.0;
  for (Index i = 0; i < m; ++i) out += std::log(eig.eigenvalues()(i));
  return out;
}

inline VectorXd central_difference_alpha(const MatrixXd& A,
                                         const VectorXd& gamma, double sigma2,
                                         double h = 1e-6) {
  VectorXd alpha(gamma.size());
  for (Index j = 0; j < gamma.size(); ++j) {
    VectorXd up = gamma, down = gamma;
    up(j) += h;
    down(j) -= h;
    alpha(j) =
        (log_det_middle(A, up, sigma2) - log_det_middle(A, down, sigma2)) /
        (2.0 * h);
  }
  return alpha;
}

/// Step-by-step phase recursion given an explicit noise table.
inline MatrixXd replay_phase_recursion(const MatrixXd& W,
                                       const VectorXd& omega,
                                       const VectorXd& x0, double dt,
                                       const MatrixXd& noise) {
  const Index n = W.rows();
  const Index steps = noise.rows();
  MatrixXd phases(steps + 1, n);
  phases.row(0) = x0.transpose();
  for (Index k = 0; k < steps; ++k) {
    for (Index i = 0; i < n; ++i) {
      double drift = omega(i);
      for (Index j = 0; j < n; ++j) {
        if (W(i, j) != 0.0) {
          drift += W(i, j) * std::sin(phases(k, j) - phases(k, i));
        }
      }
      phases(k + 1, i) = phases(k, i) + dt * (drift + noise(k, i));
    }
  }
  return phases;
}

}  // namespace oracles

#endif
