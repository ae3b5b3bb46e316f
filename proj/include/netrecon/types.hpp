#ifndef NETRECON_TYPES_HPP
#define NETRECON_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace netrecon {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Invalid inputs or broken structural invariants (dimensions, labels,
/// partitions, degenerate parameter choices).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures inside a solver (singular model matrix, degenerate
/// curvature, regularization fallback exhausted).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failures while generating or processing simulated trajectories.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One stacked regression y = A w + xi for a single node.
/// A is the dictionary matrix (M samples x N candidate functions),
/// sigma2 the noise variance of xi.
struct RegressionProblem {
  VectorXd y;
  MatrixXd A;
  double sigma2 = 0.0;
  std::vector<std::string> column_labels;

  Index rows() const { return A.rows(); }
  Index cols() const { return A.cols(); }
};

/// Checks all RegressionProblem invariants and returns the problem untouched.
/// Throws ValidationError naming the offending field or entry.
const RegressionProblem& validate_problem(const RegressionProblem& p);

/// Contiguous half-open column range [begin, end).
struct ColRange {
  Index begin = 0;
  Index end = 0;

  Index size() const { return end - begin; }
  bool operator==(const ColRange&) const = default;
};

/// Ordered split of columns 0..N-1 into contiguous disjoint blocks.
struct BlockPartition {
  std::vector<ColRange> block_ranges;

  std::size_t blocks() const { return block_ranges.size(); }
  Index total_columns() const {
    return block_ranges.empty() ? 0 : block_ranges.back().end;
  }
};

/// Splits N columns into P contiguous blocks whose sizes differ by at most
/// one, larger blocks first. Deterministic.
BlockPartition partition_columns(Index n_columns, Index n_blocks);

/// All scalar solver knobs. Defaults follow the benchmark settings used
/// throughout: rho = 1, lambda = 0.05 * ||A^T y||_inf, eps_abs = 1e-4,
/// eps_rel = 1e-2, 200 ADMM iterations, 10 reweight iterations.
struct SolverConfig {
  double rho = 1.0;          // outer (sharing) ADMM penalty
  double rho_hat = 1.0;      // inner (weighted lasso) ADMM penalty
  double lambda_scale = 0.05;  // c in lambda = c * ||A^T y||_inf
  double eps_abs = 1e-4;
  double eps_rel = 1e-2;
  int max_admm_iters = 200;
  int max_reweight_iters = 10;
  double prune_rel = 1e-4;   // prune |w_j| < prune_rel * ||w||_2
  int workers = 1;
  std::int64_t seed = 0;
};

/// Throws ValidationError if any config field is out of range.
const SolverConfig& validate_config(const SolverConfig& cfg);

/// lambda = scale * ||A^T y||_inf, the regularisation rule resolved against
/// a concrete problem.
double lambda_from_scale(const MatrixXd& A, const VectorXd& y, double scale);

/// Result of a sparse solve: weights, their support, the outer objective
/// trace, and iteration counts (outer reweight passes, total sharing-ADMM
/// iterations underneath them).
struct Estimate {
  VectorXd w_hat;
  std::vector<Index> support;      // { j : w_hat[j] != 0 }
  std::vector<double> objective_trace;
  int outer_iterations = 0;
  long total_inner_iterations = 0;
  double lambda_eff = 0.0;         // penalty actually used
  double lambda_sigma2_term = 0.0;   // the two contributions behind lambda_eff
  double lambda_scale_term = 0.0;
};

/// Recomputes the support set from w_hat.
std::vector<Index> support_of(const VectorXd& w);

}  // namespace netrecon

#endif
