#include "netrecon/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "netrecon/dictionary.hpp"
#include "netrecon/io.hpp"
#include "netrecon/kuramoto.hpp"
#include "netrecon/rng.hpp"

namespace netrecon {

double nmse(const VectorXd& w_hat, const VectorXd& w_true) {
  if (w_hat.size() != w_true.size()) {
    throw ValidationError("nmse: vector lengths differ");
  }
  const double truth_norm = w_true.norm();
  if (truth_norm == 0.0) {
    throw ValidationError("undefined metric: true weight vector is zero");
  }
  return (w_hat - w_true).norm() / truth_norm;
}

double snr_db(const MatrixXd& A, const VectorXd& w_true, const VectorXd& xi,
              bool* zero_noise) {
  const double signal = (A * w_true).norm();
  const double noise = xi.norm();
  if (zero_noise != nullptr) *zero_noise = noise == 0.0;
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(signal / noise);
}

SupportScore support_metrics(const VectorXd& w_hat, const VectorXd& w_true,
                             double rel_tol) {
  if (rel_tol < 0.0) throw ValidationError("rel_tol must be >= 0");
  const double threshold = rel_tol * w_hat.norm();
  int predicted = 0, truth = 0, hits = 0;
  for (Index j = 0; j < w_hat.size(); ++j) {
    const bool in_pred = std::abs(w_hat(j)) >= threshold && w_hat(j) != 0.0;
    const bool in_true = w_true(j) != 0.0;
    predicted += in_pred;
    truth += in_true;
    hits += in_pred && in_true;
  }
  SupportScore score;
  score.empty_prediction = predicted == 0;
  score.precision =
      predicted == 0 ? 1.0 : static_cast<double>(hits) / predicted;
  score.recall = truth == 0 ? 1.0 : static_cast<double>(hits) / truth;
  return score;
}

std::uint64_t cell_seed(std::uint64_t base, int size, double snr, int trial) {
  std::uint64_t s = mix_seed(base);
  s = derive_seed(s, static_cast<std::uint64_t>(size));
  s = derive_seed(s, static_cast<std::uint64_t>(std::llround(snr * 1000.0)));
  s = derive_seed(s, static_cast<std::uint64_t>(trial));
  return s;
}

ExperimentReport run_sweep(const SweepSpec& spec) {
  validate_config(spec.solver);
  ExperimentReport report;
  const DictionarySpec dict = DictionarySpec::trig();

  for (const int size : spec.sizes) {
    for (const double snr : spec.snrs_db) {
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t seed = cell_seed(spec.base_seed, size, snr, trial);
        const std::uint64_t net_seed = derive_seed(seed, 1);
        const std::uint64_t x0_seed = derive_seed(seed, 2);
        const std::uint64_t noise_seed = derive_seed(seed, 3);

        for (const Variant variant : spec.variants) {
          for (const int workers : spec.workers_list) {
            ExperimentRow row;
            row.network_size = size;
            row.snr_db = snr;
            row.trial = trial;
            row.seed = seed;
            row.node = spec.node;
            row.variant = variant_name(variant);
            row.blocks = spec.blocks;
            row.workers = workers;
            try {
              const KuramotoModel model =
                  generate_network(size, spec.density, spec.weight_low,
                                   spec.weight_high, spec.omega_std, net_seed);
              const VectorXd x0 = random_initial_phases(size, x0_seed);
              const double noise_std = calibrate_noise_for_snr(
                  model, spec.dt, spec.steps, x0, snr, spec.node, noise_seed);
              const TimeSeries series = simulate(model, spec.dt, spec.steps,
                                                 x0, noise_std, noise_seed);
              RegressionProblem problem = build_node_problem(
                  series, spec.node, dict, noise_std * noise_std);
              const VectorXd w_true =
                  true_weight_vector(model, spec.node, dict);
              const BlockPartition partition =
                  partition_columns(problem.A.cols(), spec.blocks);
              SolverConfig cfg = spec.solver;
              cfg.workers = workers;

              const auto t0 = std::chrono::steady_clock::now();
              const Estimate est =
                  solve_variant(variant, problem, partition, cfg);
              const auto t1 = std::chrono::steady_clock::now();

              const VectorXd w_scored = canonicalize_self_weights(
                  problem.A, dict, spec.node, est.w_hat);
              row.nmse = nmse(w_scored, w_true);
              const SupportScore score =
                  support_metrics(w_scored, w_true, spec.support_rel_tol);
              row.support_precision = score.precision;
              row.support_recall = score.recall;
              row.realized_snr_db = series.snr_db_realized(spec.node);
              row.outer_iterations = est.outer_iterations;
              row.inner_iterations = est.total_inner_iterations;
              row.wall_seconds =
                  std::chrono::duration<double>(t1 - t0).count();
            } catch (const std::exception& e) {
              row.status = e.what();
              row.nmse = std::numeric_limits<double>::quiet_NaN();
              ++report.failures;
            }
            report.rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return report;
}

namespace {

struct CellKey {
  int size;
  double snr;
  std::string variant;
  int blocks;
  int workers;

  bool operator<(const CellKey& o) const {
    return std::tie(size, snr, variant, blocks, workers) <
           std::tie(o.size, o.snr, o.variant, o.blocks, o.workers);
  }
};

}  // namespace

std::vector<AggregateRow> aggregate(const ExperimentReport& report) {
  std::map<CellKey, std::vector<const ExperimentRow*>> cells;
  for (const ExperimentRow& row : report.rows) {
    if (row.status != "ok") continue;
    cells[{row.network_size, row.snr_db, row.variant, row.blocks, row.workers}]
        .push_back(&row);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, rows] : cells) {
    AggregateRow agg;
    agg.network_size = key.size;
    agg.snr_db = key.snr;
    agg.variant = key.variant;
    agg.blocks = key.blocks;
    agg.workers = key.workers;
    agg.trials = static_cast<int>(rows.size());
    double sum = 0.0, sum_sq = 0.0, recall = 0.0, precision = 0.0;
    std::vector<double> walls;
    for (const auto* row : rows) {
      sum += row->nmse;
      sum_sq += row->nmse * row->nmse;
      recall += row->support_recall;
      precision += row->support_precision;
      walls.push_back(row->wall_seconds);
    }
    const double count = static_cast<double>(rows.size());
    agg.nmse_mean = sum / count;
    agg.nmse_std =
        count > 1.0
            ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / count) / (count - 1.0)))
            : 0.0;
    agg.recall_mean = recall / count;
    agg.precision_mean = precision / count;
    std::sort(walls.begin(), walls.end());
    agg.wall_median = walls[walls.size() / 2];
    out.push_back(std::move(agg));
  }
  return out;
}

std::string report_to_csv(const ExperimentReport& report, bool include_timing) {
  std::ostringstream out;
  out << "network_size,snr_db,trial,seed,node,variant,blocks,workers,nmse,"
         "support_precision,support_recall,realized_snr_db,outer_iterations,"
         "inner_iterations,";
  if (include_timing) out << "wall_seconds,";
  out << "status\n";
  for (const ExperimentRow& r : report.rows) {
    out << r.network_size << "," << format_double(r.snr_db) << "," << r.trial
        << "," << r.seed << "," << r.node << "," << r.variant << ","
        << r.blocks << "," << r.workers << "," << format_double(r.nmse) << ","
        << format_double(r.support_precision) << ","
        << format_double(r.support_recall) << ","
        << format_double(r.realized_snr_db) << "," << r.outer_iterations << ","
        << r.inner_iterations << ",";
    if (include_timing) out << format_double(r.wall_seconds) << ",";
    out << r.status << "\n";
  }
  return out.str();
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "network_size,snr_db,variant,blocks,workers,trials,nmse_mean,"
         "nmse_std,recall_mean,precision_mean,wall_median\n";
  for (const AggregateRow& r : rows) {
    out << r.network_size << "," << format_double(r.snr_db) << "," << r.variant
        << "," << r.blocks << "," << r.workers << "," << r.trials << ","
        << format_double(r.nmse_mean) << "," << format_double(r.nmse_std)
        << "," << format_double(r.recall_mean) << ","
        << format_double(r.precision_mean) << ","
        << format_double(r.wall_median) << "\n";
  }
  return out.str();
}

void write_report_csv(const std::string& path, const ExperimentReport& report) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << report_to_csv(report);
}

void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << aggregate_to_csv(rows);
}

}  // namespace netrecon
