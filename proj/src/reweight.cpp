#include "netrecon/reweight.hpp"

#include <cmath>
#include <limits>

namespace netrecon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::LLT<MatrixXd> factor_middle(const MatrixXd& A, const VectorXd& gamma,
                                   double sigma2) {
  const Index m = A.rows();
  MatrixXd middle = MatrixXd::Zero(m, m);
  middle.diagonal().setConstant(sigma2);
  for (Index j = 0; j < A.cols(); ++j) {
    if (gamma(j) != 0.0) {
      middle.selfadjointView<Eigen::Lower>().rankUpdate(A.col(j), gamma(j));
    }
  }
  // LLT<Lower> reads only the lower triangle, which rankUpdate filled
  Eigen::LLT<MatrixXd> llt(middle);
  if (llt.info() != Eigen::Success) {
    throw SolverError(
        "singular model: sigma2 I + A Gamma A^T is not positive definite");
  }
  return llt;
}

}  // namespace

VectorXd alpha_update(const MatrixXd& A, const VectorXd& gamma, double sigma2) {
  if (gamma.size() != A.cols()) {
    throw ValidationError("gamma length does not match column count");
  }
  const Eigen::LLT<MatrixXd> llt = factor_middle(A, gamma, sigma2);
  const MatrixXd solved = llt.solve(A);
  VectorXd alpha(A.cols());
  for (Index j = 0; j < A.cols(); ++j) {
    alpha(j) = A.col(j).dot(solved.col(j));
  }
  return alpha;
}

VectorXd alpha_update(const MatrixXd& A, const VectorXd& gamma, double sigma2,
                      const std::vector<bool>& active) {
  if (active.size() != static_cast<std::size_t>(A.cols())) {
    throw ValidationError("active mask length does not match column count");
  }
  VectorXd masked_gamma = gamma;
  for (Index j = 0; j < A.cols(); ++j) {
    if (!active[static_cast<std::size_t>(j)]) masked_gamma(j) = 0.0;
  }
  const Eigen::LLT<MatrixXd> llt = factor_middle(A, masked_gamma, sigma2);
  VectorXd alpha = VectorXd::Constant(A.cols(), kInf);
  for (Index j = 0; j < A.cols(); ++j) {
    if (active[static_cast<std::size_t>(j)]) {
      alpha(j) = A.col(j).dot(llt.solve(A.col(j)));
    }
  }
  return alpha;
}

VectorXd gamma_closed_form(const VectorXd& w, const VectorXd& alpha) {
  if (w.size() != alpha.size()) {
    throw ValidationError("w and alpha lengths differ");
  }
  VectorXd gamma = VectorXd::Zero(w.size());
  for (Index j = 0; j < w.size(); ++j) {
    if (w(j) == 0.0) continue;
    if (alpha(j) == 0.0) {
      throw SolverError("degenerate curvature: alpha is zero at column " +
                        std::to_string(j) + " with nonzero weight");
    }
    gamma(j) = std::abs(w(j)) / std::sqrt(alpha(j));
  }
  return gamma;
}

VectorXd theta_update(const MatrixXd& A, const VectorXd& theta_prev,
                      const VectorXd& w_new, double sigma2) {
  VectorXd alpha_prev(theta_prev.size());
  for (Index j = 0; j < theta_prev.size(); ++j) {
    if (!(theta_prev(j) > 0.0)) {
      throw ValidationError("theta_prev must be strictly positive");
    }
    alpha_prev(j) = theta_prev(j) * theta_prev(j);
  }
  const VectorXd gamma = gamma_closed_form(w_new, alpha_prev);
  return alpha_update(A, gamma, sigma2).cwiseSqrt();
}

std::vector<bool> prune_mask(const VectorXd& w, double prune_rel) {
  const double threshold = prune_rel * w.norm();
  std::vector<bool> keep(static_cast<std::size_t>(w.size()));
  for (Index j = 0; j < w.size(); ++j) {
    keep[static_cast<std::size_t>(j)] = !(std::abs(w(j)) < threshold);
  }
  return keep;
}

double dual_objective(const MatrixXd& A, const VectorXd& y, const VectorXd& w,
                      const VectorXd& gamma, double sigma2) {
  double penalty = 0.0;
  for (Index j = 0; j < w.size(); ++j) {
    if (gamma(j) != 0.0) {
      penalty += w(j) * w(j) / gamma(j);
    } else if (w(j) != 0.0) {
      return kInf;
    }
  }
  const Eigen::LLT<MatrixXd> llt = factor_middle(A, gamma, sigma2);
  double log_det = 0.0;
  for (Index i = 0; i < A.rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
  }
  return (A * w - y).squaredNorm() + sigma2 * penalty + log_det;
}

VectorXd posterior_mean(const MatrixXd& A, const VectorXd& y,
                        const VectorXd& gamma, double sigma2) {
  const Eigen::LLT<MatrixXd> llt = factor_middle(A, gamma, sigma2);
  return gamma.asDiagonal() * (A.transpose() * llt.solve(y));
}

Variant variant_from_name(const std::string& name) {
  if (name == "reweighted-l1") return Variant::ReweightedL1;
  if (name == "reweighted-l2") return Variant::ReweightedL2;
  if (name == "lasso") return Variant::Lasso;
  throw ValidationError("unknown variant: " + name);
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::ReweightedL1: return "reweighted-l1";
    case Variant::ReweightedL2: return "reweighted-l2";
    case Variant::Lasso: return "lasso";
  }
  return "?";
}

LambdaResolution resolve_lambda(const RegressionProblem& problem,
                                const SolverConfig& cfg) {
  LambdaResolution r;
  r.sigma2_term = problem.sigma2;
  r.scale_term = lambda_from_scale(problem.A, problem.y, cfg.lambda_scale);
  r.effective = std::max(r.sigma2_term, r.scale_term);
  return r;
}

namespace {

struct ReducedProblem {
  MatrixXd A;
  BlockPartition partition;
  std::vector<Index> columns;  // reduced index -> original column
};

ReducedProblem reduce_columns(const MatrixXd& A, const BlockPartition& partition,
                              const std::vector<bool>& active) {
  ReducedProblem reduced;
  for (Index j = 0; j < A.cols(); ++j) {
    if (active[static_cast<std::size_t>(j)]) reduced.columns.push_back(j);
  }
  reduced.A.resize(A.rows(), static_cast<Index>(reduced.columns.size()));
  for (Index jj = 0; jj < reduced.A.cols(); ++jj) {
    reduced.A.col(jj) = A.col(reduced.columns[static_cast<std::size_t>(jj)]);
  }
  Index cursor = 0;
  for (const ColRange& range : partition.block_ranges) {
    Index width = 0;
    for (Index j = range.begin; j < range.end; ++j) {
      if (active[static_cast<std::size_t>(j)]) ++width;
    }
    if (width > 0) {
      reduced.partition.block_ranges.push_back({cursor, cursor + width});
      cursor += width;
    }
  }
  return reduced;
}

VectorXd gather(const VectorXd& full, const std::vector<Index>& columns) {
  VectorXd out(static_cast<Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out(static_cast<Index>(i)) = full(columns[i]);
  }
  return out;
}

void scatter(const VectorXd& reduced, const std::vector<Index>& columns,
             VectorXd& full) {
  full.setZero();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    full(columns[i]) = reduced(static_cast<Index>(i));
  }
}

int count_active(const std::vector<bool>& mask) {
  int count = 0;
  for (const bool a : mask) count += a ? 1 : 0;
  return count;
}

}  // namespace

Estimate reweighted_lasso(const RegressionProblem& problem,
                          const BlockPartition& partition,
                          const SolverConfig& cfg,
                          const OuterObserver& observer,
                          const SharingLogger& sharing_log) {
  validate_problem(problem);
  validate_config(cfg);
  const Index n = problem.A.cols();
  const LambdaResolution lambda = resolve_lambda(problem, cfg);

  Estimate est;
  est.lambda_eff = lambda.effective;
  est.lambda_sigma2_term = lambda.sigma2_term;
  est.lambda_scale_term = lambda.scale_term;

  ReweightState rstate;
  rstate.theta = VectorXd::Ones(n);
  rstate.gamma = VectorXd::Zero(n);
  rstate.alpha = VectorXd::Ones(n);
  rstate.active_mask.assign(static_cast<std::size_t>(n), true);

  VectorXd theta_act = VectorXd::Ones(n);
  VectorXd w_full = VectorXd::Zero(n);
  VectorXd w_prev = w_full;

  for (int k = 0; k < cfg.max_reweight_iters; ++k) {
    const bool last_pass = k == cfg.max_reweight_iters - 1;
    const ReducedProblem reduced =
        reduce_columns(problem.A, partition, rstate.active_mask);
    if (reduced.columns.empty()) break;

    RegressionProblem sub;
    sub.y = problem.y;
    sub.A = reduced.A;
    sub.sigma2 = problem.sigma2;

    // Iteration 0 is the plain lasso at the data-driven lambda; the
    // reweighted passes use the sigma2 scaling that pairs with
    // theta = sqrt(alpha), which keeps the per-column penalty at the noise
    // floor sigma * ||A_j|| instead of blowing up with theta.
    const double pass_lambda =
        k == 0 || problem.sigma2 <= 0.0 ? lambda.effective : problem.sigma2;
    const VectorXd w0 = gather(w_full, reduced.columns);
    auto [w_act, sstate] =
        solve_sharing(sub, reduced.partition, theta_act, pass_lambda, cfg,
                      &w0, sharing_log);
    est.total_inner_iterations += sstate.iteration;
    scatter(w_act, reduced.columns, w_full);
    est.outer_iterations = k + 1;

    // gamma implied by this solve's weights: |w| / theta (alpha = theta^2)
    const VectorXd gamma_act =
        gamma_closed_form(w_act, theta_act.cwiseProduct(theta_act));
    const double objective =
        dual_objective(reduced.A, problem.y, w_act, gamma_act, problem.sigma2);
    est.objective_trace.push_back(objective);

    rstate.outer_iteration = k + 1;
    rstate.objective = objective;
    rstate.gamma.setZero();
    for (std::size_t i = 0; i < reduced.columns.size(); ++i) {
      rstate.gamma(reduced.columns[i]) = gamma_act(static_cast<Index>(i));
      rstate.theta(reduced.columns[i]) = theta_act(static_cast<Index>(i));
    }

    // Pruning is monotone (once out, never revived), so it only freezes
    // zeros produced by the sigma2-scaled reweighted passes. The initial
    // lasso's zeros are kept in play: its detection floor is an order of
    // magnitude coarser than the reweighted one, and freezing them costs
    // true support.
    std::vector<bool> next_active = rstate.active_mask;
    bool active_changed = false;
    if (k >= 1) {
      const std::vector<bool> keep = prune_mask(w_full, cfg.prune_rel);
      for (Index j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (next_active[jj] && !keep[jj]) {
          next_active[jj] = false;
          active_changed = true;
        }
      }
    }

    const double rel_change =
        (w_full - w_prev).norm() / std::max(w_prev.norm(), 1e-30);

    if (observer) {
      observer({k + 1, count_active(next_active), objective, w_full, rstate});
    }

    if (!active_changed && rel_change < 1e-4) break;
    if (last_pass) break;

    // theta for the next pass: sqrt(alpha) at the freshly pruned active set
    const ReducedProblem next =
        reduce_columns(problem.A, partition, next_active);
    if (next.columns.empty()) {
      rstate.active_mask = next_active;
      break;
    }
    const VectorXd gamma_next = gather(rstate.gamma, next.columns);
    const VectorXd alpha_next =
        alpha_update(next.A, gamma_next, problem.sigma2);
    theta_act = alpha_next.cwiseSqrt();

    rstate.alpha.setConstant(kInf);
    for (std::size_t i = 0; i < next.columns.size(); ++i) {
      rstate.alpha(next.columns[i]) = alpha_next(static_cast<Index>(i));
    }
    rstate.active_mask = next_active;
    for (Index j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (!next_active[jj]) rstate.gamma(j) = 0.0;
    }
    w_prev = w_full;
  }

  est.w_hat = w_full;
  est.support = support_of(w_full);
  return est;
}

Estimate plain_lasso(const RegressionProblem& problem,
                     const BlockPartition& partition, const SolverConfig& cfg,
                     const OuterObserver& observer,
                     const SharingLogger& sharing_log) {
  SolverConfig single = cfg;
  single.max_reweight_iters = 1;
  return reweighted_lasso(problem, partition, single, observer, sharing_log);
}

Estimate reweighted_l2(const RegressionProblem& problem,
                       const SolverConfig& cfg, const OuterObserver& observer) {
  validate_problem(problem);
  validate_config(cfg);
  const Index n = problem.A.cols();
  const LambdaResolution lambda = resolve_lambda(problem, cfg);

  Estimate est;
  est.lambda_eff = lambda.effective;
  est.lambda_sigma2_term = lambda.sigma2_term;
  est.lambda_scale_term = lambda.scale_term;

  ReweightState rstate;
  rstate.theta = VectorXd::Ones(n);
  rstate.gamma = VectorXd::Ones(n);
  rstate.alpha = VectorXd::Zero(n);
  rstate.active_mask.assign(static_cast<std::size_t>(n), true);

  BlockPartition whole = partition_columns(n, 1);
  VectorXd gamma_act = VectorXd::Ones(n);
  VectorXd alpha_act =
      alpha_update(problem.A, gamma_act, problem.sigma2);
  VectorXd w_full = VectorXd::Zero(n);
  VectorXd w_prev = w_full;

  for (int k = 0; k < cfg.max_reweight_iters; ++k) {
    const bool last_pass = k == cfg.max_reweight_iters - 1;
    const ReducedProblem reduced =
        reduce_columns(problem.A, whole, rstate.active_mask);
    if (reduced.columns.empty()) break;

    const VectorXd w_act =
        posterior_mean(reduced.A, problem.y, gamma_act, problem.sigma2);
    scatter(w_act, reduced.columns, w_full);
    est.outer_iterations = k + 1;

    const VectorXd gamma_next = gamma_closed_form(w_act, alpha_act);
    const double objective =
        dual_objective(reduced.A, problem.y, w_act, gamma_next, problem.sigma2);
    est.objective_trace.push_back(objective);

    rstate.outer_iteration = k + 1;
    rstate.objective = objective;
    rstate.gamma.setZero();
    rstate.alpha.setConstant(kInf);
    for (std::size_t i = 0; i < reduced.columns.size(); ++i) {
      rstate.gamma(reduced.columns[i]) = gamma_next(static_cast<Index>(i));
      rstate.alpha(reduced.columns[i]) = alpha_act(static_cast<Index>(i));
    }

    const std::vector<bool> keep = prune_mask(w_full, cfg.prune_rel);
    std::vector<bool> next_active = rstate.active_mask;
    bool active_changed = false;
    for (Index j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (next_active[jj] && !keep[jj]) {
        next_active[jj] = false;
        active_changed = true;
      }
    }

    const double rel_change =
        (w_full - w_prev).norm() / std::max(w_prev.norm(), 1e-30);
    if (observer) {
      observer({k + 1, count_active(next_active), objective, w_full, rstate});
    }
    if (!active_changed && rel_change < 1e-4) break;
    if (last_pass) break;

    const ReducedProblem next =
        reduce_columns(problem.A, whole, next_active);
    if (next.columns.empty()) {
      rstate.active_mask = next_active;
      break;
    }
    gamma_act = gather(rstate.gamma, next.columns);
    alpha_act = alpha_update(next.A, gamma_act, problem.sigma2);
    rstate.active_mask = next_active;
    w_prev = w_full;
  }

  est.w_hat = w_full;
  est.support = support_of(w_full);
  return est;
}

Estimate solve_variant(Variant variant, const RegressionProblem& problem,
                       const BlockPartition& partition, const SolverConfig& cfg,
                       const OuterObserver& observer,
                       const SharingLogger& sharing_log) {
  switch (variant) {
    case Variant::ReweightedL1:
      return reweighted_lasso(problem, partition, cfg, observer, sharing_log);
    case Variant::Lasso:
      return plain_lasso(problem, partition, cfg, observer, sharing_log);
    case Variant::ReweightedL2:
      return reweighted_l2(problem, cfg, observer);
  }
  throw ValidationError("unknown variant");
}

}  // namespace netrecon
