#include "netrecon/types.hpp"

#include <cmath>
#include <set>

namespace netrecon {

const RegressionProblem& validate_problem(const RegressionProblem& p) {
  const Index m = p.A.rows();
  const Index n = p.A.cols();
  if (m < 1 || n < 1) {
    throw ValidationError("dimension mismatch: A must be at least 1x1, got " +
                          std::to_string(m) + "x" + std::to_string(n));
  }
  if (p.y.size() != m) {
    throw ValidationError("dimension mismatch: y has length " +
                          std::to_string(p.y.size()) + " but A has " +
                          std::to_string(m) + " rows");
  }
  if (p.sigma2 < 0.0 || !std::isfinite(p.sigma2)) {
    throw ValidationError("sigma2 must be finite and >= 0, got " +
                          std::to_string(p.sigma2));
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      if (!std::isfinite(p.A(i, j))) {
        throw ValidationError("non-finite entry in A at row " +
                              std::to_string(i) + ", col " + std::to_string(j));
      }
    }
  }
  for (Index i = 0; i < m; ++i) {
    if (!std::isfinite(p.y(i))) {
      throw ValidationError("non-finite entry in y at row " + std::to_string(i));
    }
  }
  if (p.column_labels.size() != static_cast<std::size_t>(n)) {
    throw ValidationError("column_labels has " +
                          std::to_string(p.column_labels.size()) +
                          " entries but A has " + std::to_string(n) +
                          " columns");
  }
  std::set<std::string> seen;
  for (const auto& label : p.column_labels) {
    if (!seen.insert(label).second) {
      throw ValidationError("duplicate column label: " + label);
    }
  }
  return p;
}

BlockPartition partition_columns(Index n_columns, Index n_blocks) {
  if (n_blocks < 1 || n_blocks > n_columns) {
    throw ValidationError("invalid partition: cannot split " +
                          std::to_string(n_columns) + " columns into " +
                          std::to_string(n_blocks) + " blocks");
  }
  const Index base = n_columns / n_blocks;
  const Index remainder = n_columns % n_blocks;
  BlockPartition partition;
  partition.block_ranges.reserve(static_cast<std::size_t>(n_blocks));
  Index start = 0;
  for (Index b = 0; b < n_blocks; ++b) {
    const Index size = base + (b < remainder ? 1 : 0);
    partition.block_ranges.push_back({start, start + size});
    start += size;
  }
  return partition;
}

const SolverConfig& validate_config(const SolverConfig& cfg) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " must be strictly positive");
    }
  };
  positive(cfg.rho, "rho");
  positive(cfg.rho_hat, "rho_hat");
  positive(cfg.eps_abs, "eps_abs");
  positive(cfg.eps_rel, "eps_rel");
  if (!(cfg.lambda_scale >= 0.0) || !std::isfinite(cfg.lambda_scale)) {
    throw ValidationError("lambda_scale must be finite and >= 0");
  }
  if (cfg.max_admm_iters < 1) throw ValidationError("max_admm_iters must be >= 1");
  if (cfg.max_reweight_iters < 1) {
    throw ValidationError("max_reweight_iters must be >= 1");
  }
  if (!(cfg.prune_rel >= 0.0)) throw ValidationError("prune_rel must be >= 0");
  if (cfg.workers < 1) throw ValidationError("workers must be >= 1");
  return cfg;
}

double lambda_from_scale(const MatrixXd& A, const VectorXd& y, double scale) {
  return scale * (A.transpose() * y).lpNorm<Eigen::Infinity>();
}

std::vector<Index> support_of(const VectorXd& w) {
  std::vector<Index> support;
  for (Index j = 0; j < w.size(); ++j) {
    if (w(j) != 0.0) support.push_back(j);
  }
  return support;
}

}  // namespace netrecon
