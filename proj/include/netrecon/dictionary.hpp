#ifndef NETRECON_DICTIONARY_HPP
#define NETRECON_DICTIONARY_HPP

#include <functional>
#include <string>
#include <vector>

#include "netrecon/kuramoto.hpp"
#include "netrecon/types.hpp"

namespace netrecon {

/// A candidate coupling function. Pairwise evaluators receive the phase
/// pair (x_j, x_i); the constant ignores both arguments.
struct CandidateFunction {
  enum class Arity { Pairwise, Constant };

  std::string label;
  Arity arity = Arity::Pairwise;
  std::function<double(double, double)> evaluate;
};

/// Ordered registry of candidate functions. Default: sin(x_j - x_i) and
/// cos(x_j - x_i) plus a constant column.
struct DictionarySpec {
  std::vector<CandidateFunction> pairwise_functions;
  bool include_constant = true;

  /// The trigonometric registry used by the oscillator benchmark.
  static DictionarySpec trig();
};

const DictionarySpec& validate_spec(const DictionarySpec& spec);

/// Number of dictionary columns for an n-node series under this spec.
Index dictionary_columns(const DictionarySpec& spec, Index n_nodes);

/// Builds the stacked regression for one node:
///   row k holds every pairwise function evaluated at time t_k
///   (node-major, function-minor; self-pairs j == i included), constant last;
///   y[k] = (phi_i(t_{k+1}) - phi_i(t_k)) / dt.
/// Column labels are "<func>(x<j+1>-x<i+1>)" and "const".
RegressionProblem build_node_problem(const TimeSeries& series, Index node,
                                     const DictionarySpec& spec, double sigma2);

/// Embeds the ground truth into dictionary coordinates: W(i, j) on the
/// sin columns, omega_i on the constant column, zero elsewhere. Requires a
/// pairwise function labeled "sin".
VectorXd true_weight_vector(const KuramotoModel& model, Index node,
                            const DictionarySpec& spec);

/// Noise-variance estimate for y when the generating noise level is
/// unknown: subtract a centered 5-point moving average and rescale the
/// residual variance by k/(k-1) to undo the averaging.
double estimate_sigma2(const VectorXd& y);

/// Rewrites w_hat in the canonical gauge for scoring: self-pair columns
/// (j == node) are either identically zero (their weight is dropped) or
/// exactly constant duplicates of the constant column (their weight is
/// folded into it). The returned vector represents the same dynamics; the
/// coordinate split between exact duplicates is not identifiable and the
/// constant column is the canonical home of the frequency term.
VectorXd canonicalize_self_weights(const MatrixXd& A,
                                   const DictionarySpec& spec, Index node,
                                   VectorXd w_hat);

}  // namespace netrecon

#endif
