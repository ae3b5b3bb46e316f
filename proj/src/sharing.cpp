#include "netrecon/sharing.hpp"

#include <cmath>
#include <exception>
#include <thread>

namespace netrecon {

VectorXd local_target(const SharingState& state, std::size_t block) {
  return state.block_predictions[block] + state.z_bar - state.avg_prediction -
         state.u;
}

VectorXd zbar_update(const VectorXd& y, const VectorXd& avg_pred,
                     const VectorXd& u, std::size_t n_blocks, double rho) {
  return (y + rho * avg_pred + rho * u) /
         (static_cast<double>(n_blocks) + rho);
}

bool block_skip_test(const MatrixXd& A_i, const VectorXd& b, double lambda,
                     double rho, const VectorXd& theta_i) {
  const double threshold = (lambda / rho) * theta_i.minCoeff();
  return (A_i.transpose() * b).norm() <= threshold;
}

namespace {

void run_block_range(const std::vector<BlockLassoSolver>& solvers,
                     SharingState& state, double lambda, double rho,
                     std::size_t begin, std::size_t end,
                     std::exception_ptr& error) {
  try {
    for (std::size_t i = begin; i < end; ++i) {
      const VectorXd b = local_target(state, i);
      if (block_skip_test(solvers[i].A(), b, lambda, rho,
                          solvers[i].theta())) {
        state.block_w[i].setZero();
        state.block_predictions[i].setZero();
        state.inner_states[i] = solvers[i].fresh_state();
        continue;
      }
      auto [w, report] = solvers[i].solve(b, state.inner_states[i]);
      state.block_w[i] = std::move(w);
      state.block_predictions[i].noalias() = solvers[i].A() * state.block_w[i];
    }
  } catch (...) {
    error = std::current_exception();
  }
}

}  // namespace

std::pair<VectorXd, SharingState> solve_sharing(
    const RegressionProblem& problem, const BlockPartition& partition,
    const VectorXd& theta, double lambda, const SolverConfig& cfg,
    const VectorXd* w0, const SharingLogger& log) {
  validate_config(cfg);
  const Index m = problem.A.rows();
  const Index n = problem.A.cols();
  const std::size_t n_blocks = partition.blocks();
  if (partition.total_columns() != n) {
    throw ValidationError("partition covers " +
                          std::to_string(partition.total_columns()) +
                          " columns but A has " + std::to_string(n));
  }
  if (theta.size() != n) {
    throw ValidationError("theta length does not match column count");
  }
  if (theta.minCoeff() < 0.0) {
    throw ValidationError("theta entries must be nonnegative");
  }

  // Inner block problems are the full lasso scaled by 1/rho, so the
  // per-block penalty is lambda/rho.
  const double lambda_hat = lambda / cfg.rho;

  std::vector<BlockLassoSolver> solvers;
  solvers.reserve(n_blocks);
  for (const ColRange& range : partition.block_ranges) {
    try {
      solvers.emplace_back(problem.A.middleCols(range.begin, range.size()),
                           theta.segment(range.begin, range.size()),
                           lambda_hat, cfg.rho_hat, cfg.max_admm_iters,
                           cfg.eps_abs, cfg.eps_rel);
    } catch (const std::exception& e) {
      throw SolverError("block " + std::to_string(solvers.size()) + ": " +
                        e.what());
    }
  }

  SharingState state;
  state.block_w.resize(n_blocks);
  state.block_predictions.resize(n_blocks);
  state.inner_states.resize(n_blocks);
  for (std::size_t i = 0; i < n_blocks; ++i) {
    const ColRange& range = partition.block_ranges[i];
    state.inner_states[i] = solvers[i].fresh_state();
    if (w0 != nullptr) {
      state.block_w[i] = w0->segment(range.begin, range.size());
      state.inner_states[i].w = state.block_w[i];
      state.inner_states[i].z_hat =
          theta.segment(range.begin, range.size()).cwiseProduct(state.block_w[i]);
    } else {
      state.block_w[i] = VectorXd::Zero(range.size());
    }
    state.block_predictions[i].noalias() = solvers[i].A() * state.block_w[i];
  }
  state.avg_prediction = VectorXd::Zero(m);
  for (std::size_t i = 0; i < n_blocks; ++i) {
    state.avg_prediction += state.block_predictions[i];
  }
  state.avg_prediction /= static_cast<double>(n_blocks);
  state.z_bar = state.avg_prediction;
  state.u = VectorXd::Zero(m);

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n_blocks);
  const double sqrt_m = std::sqrt(static_cast<double>(m));

  for (int k = 0; k < cfg.max_admm_iters; ++k) {
    // block solves, chunked across workers; block i always lands in slot i
    if (workers <= 1) {
      std::exception_ptr error;
      run_block_range(solvers, state, lambda, cfg.rho, 0, n_blocks, error);
      if (error) std::rethrow_exception(error);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(workers);
      const std::size_t chunk = (n_blocks + workers - 1) / workers;
      for (std::size_t t = 0; t < workers; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n_blocks, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(run_block_range, std::cref(solvers),
                          std::ref(state), lambda, cfg.rho, begin, end,
                          std::ref(errors[t]));
      }
      for (auto& th : pool) th.join();
      for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
      }
    }
    for (std::size_t i = 0; i < n_blocks; ++i) {
      state.total_inner_iterations += state.inner_states[i].iteration;
    }

    // fixed-order reduction keeps results identical across worker counts
    VectorXd sum = VectorXd::Zero(m);
    for (std::size_t i = 0; i < n_blocks; ++i) sum += state.block_predictions[i];
    state.avg_prediction = sum / static_cast<double>(n_blocks);

    const VectorXd z_bar_new =
        zbar_update(problem.y, state.avg_prediction, state.u, n_blocks, cfg.rho);
    const double e_dual = cfg.rho * (z_bar_new - state.z_bar).norm();
    state.z_bar = z_bar_new;
    state.u += state.avg_prediction - state.z_bar;
    const double e_primal = (state.avg_prediction - state.z_bar).norm();
    state.iteration = k + 1;

    ResidualReport report;
    report.e_primal = e_primal;
    report.e_dual = e_dual;
    report.eps_primal = sqrt_m * cfg.eps_abs +
                        cfg.eps_rel * std::max(state.avg_prediction.norm(),
                                               state.z_bar.norm());
    report.eps_dual = sqrt_m * cfg.eps_abs + cfg.eps_rel * cfg.rho * state.u.norm();
    report.converged =
        report.e_primal <= report.eps_primal && report.e_dual <= report.eps_dual;
    state.residual_report = report;

    if (log) {
      double penalty = 0.0;
      for (std::size_t i = 0; i < n_blocks; ++i) {
        const ColRange& range = partition.block_ranges[i];
        penalty += theta.segment(range.begin, range.size())
                       .cwiseProduct(state.block_w[i])
                       .lpNorm<1>();
      }
      const double fit =
          0.5 * (sum - problem.y).squaredNorm();
      log({state.iteration, e_primal, e_dual, fit + lambda * penalty});
    }

    if (report.converged) break;
  }

  VectorXd w(n);
  for (std::size_t i = 0; i < n_blocks; ++i) {
    const ColRange& range = partition.block_ranges[i];
    w.segment(range.begin, range.size()) = state.block_w[i];
  }
  return {std::move(w), std::move(state)};
}

}  // namespace netrecon
