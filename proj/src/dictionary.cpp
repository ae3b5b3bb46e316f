#include "netrecon/dictionary.hpp"

#include <cmath>
#include <set>

namespace netrecon {

DictionarySpec DictionarySpec::trig() {
  DictionarySpec spec;
  spec.pairwise_functions.push_back(
      {"sin", CandidateFunction::Arity::Pairwise,
       [](double xj, double xi) { return std::sin(xj - xi); }});
  spec.pairwise_functions.push_back(
      {"cos", CandidateFunction::Arity::Pairwise,
       [](double xj, double xi) { return std::cos(xj - xi); }});
  spec.include_constant = true;
  return spec;
}

const DictionarySpec& validate_spec(const DictionarySpec& spec) {
  if (spec.pairwise_functions.empty() && !spec.include_constant) {
    throw ValidationError("dictionary spec has no functions");
  }
  std::set<std::string> labels;
  for (const auto& f : spec.pairwise_functions) {
    if (!f.evaluate) throw ValidationError("candidate function without evaluator");
    if (!labels.insert(f.label).second) {
      throw ValidationError("duplicate candidate label: " + f.label);
    }
  }
  return spec;
}

Index dictionary_columns(const DictionarySpec& spec, Index n_nodes) {
  return n_nodes * static_cast<Index>(spec.pairwise_functions.size()) +
         (spec.include_constant ? 1 : 0);
}

RegressionProblem build_node_problem(const TimeSeries& series, Index node,
                                     const DictionarySpec& spec,
                                     double sigma2) {
  validate_spec(spec);
  const Index samples = series.phases.rows();
  const Index n = series.phases.cols();
  if (samples < 2) throw ValidationError("need at least 2 time points");
  if (node < 0 || node >= n) {
    throw ValidationError("node index out of range: " + std::to_string(node));
  }

  const Index m = samples - 1;
  const Index funcs = static_cast<Index>(spec.pairwise_functions.size());
  const Index cols = dictionary_columns(spec, n);

  RegressionProblem problem;
  problem.sigma2 = sigma2;
  problem.A.resize(m, cols);
  problem.y.resize(m);
  problem.column_labels.reserve(static_cast<std::size_t>(cols));
  for (Index j = 0; j < n; ++j) {
    for (Index s = 0; s < funcs; ++s) {
      problem.column_labels.push_back(spec.pairwise_functions[s].label + "(x" +
                                      std::to_string(j + 1) + "-x" +
                                      std::to_string(node + 1) + ")");
    }
  }
  if (spec.include_constant) problem.column_labels.push_back("const");

  for (Index k = 0; k < m; ++k) {
    const double xi_phase = series.phases(k, node);
    for (Index j = 0; j < n; ++j) {
      const double xj_phase = series.phases(k, j);
      for (Index s = 0; s < funcs; ++s) {
        const double value = spec.pairwise_functions[s].evaluate(xj_phase, xi_phase);
        if (!std::isfinite(value)) {
          throw ValidationError("candidate " + spec.pairwise_functions[s].label +
                                " produced a non-finite value at row " +
                                std::to_string(k));
        }
        problem.A(k, j * funcs + s) = value;
      }
    }
    if (spec.include_constant) problem.A(k, cols - 1) = 1.0;
    problem.y(k) = (series.phases(k + 1, node) - series.phases(k, node)) / series.dt;
  }
  return problem;
}

VectorXd true_weight_vector(const KuramotoModel& model, Index node,
                            const DictionarySpec& spec) {
  validate_spec(spec);
  if (node < 0 || node >= model.n) {
    throw ValidationError("node index out of range: " + std::to_string(node));
  }
  const Index funcs = static_cast<Index>(spec.pairwise_functions.size());
  Index sin_slot = -1;
  for (Index s = 0; s < funcs; ++s) {
    if (spec.pairwise_functions[s].label == "sin") sin_slot = s;
  }
  if (sin_slot < 0) {
    throw ValidationError(
        "unrepresentable truth: dictionary spec lacks a \"sin\" function");
  }

  VectorXd w = VectorXd::Zero(dictionary_columns(spec, model.n));
  for (Index j = 0; j < model.n; ++j) {
    if (j == node) continue;  // self coupling is zero by construction
    w(j * funcs + sin_slot) = model.W(node, j);
  }
  if (spec.include_constant) w(w.size() - 1) = model.omega(node);
  return w;
}

VectorXd canonicalize_self_weights(const MatrixXd& A,
                                   const DictionarySpec& spec, Index node,
                                   VectorXd w_hat) {
  validate_spec(spec);
  if (!spec.include_constant) return w_hat;
  const Index funcs = static_cast<Index>(spec.pairwise_functions.size());
  const Index const_col = A.cols() - 1;
  if (w_hat.size() != A.cols()) {
    throw ValidationError("w_hat length does not match column count");
  }
  for (Index s = 0; s < funcs; ++s) {
    const Index j = node * funcs + s;
    const auto column = A.col(j);
    if (column.isZero(0.0)) {
      w_hat(j) = 0.0;
    } else if ((column.array() == column(0)).all()) {
      w_hat(const_col) += column(0) * w_hat(j);
      w_hat(j) = 0.0;
    }
  }
  return w_hat;
}

double estimate_sigma2(const VectorXd& y) {
  const Index m = y.size();
  const Index window = std::min<Index>(5, m);
  if (window < 2) return 0.0;
  double sum_sq = 0.0;
  double sum = 0.0;
  for (Index t = 0; t < m; ++t) {
    const Index lo = std::max<Index>(0, t - window / 2);
    const Index hi = std::min<Index>(m - 1, t + window / 2);
    const double local_mean =
        y.segment(lo, hi - lo + 1).mean();
    const double residual = y(t) - local_mean;
    sum += residual;
    sum_sq += residual * residual;
  }
  const double var =
      sum_sq / static_cast<double>(m) - std::pow(sum / static_cast<double>(m), 2);
  const double k = static_cast<double>(window);
  return var * k / (k - 1.0);
}

}  // namespace netrecon
