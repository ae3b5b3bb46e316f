#ifndef NETRECON_METRICS_HPP
#define NETRECON_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "netrecon/reweight.hpp"
#include "netrecon/types.hpp"

namespace netrecon {

/// ||w_hat - w_true|| / ||w_true||. Throws ValidationError when the true
/// vector is zero.
double nmse(const VectorXd& w_hat, const VectorXd& w_true);

/// 20 * log10(||A w_true|| / ||xi||). Zero noise yields +inf and sets
/// *zero_noise when provided.
double snr_db(const MatrixXd& A, const VectorXd& w_true, const VectorXd& xi,
              bool* zero_noise = nullptr);

struct SupportScore {
  double precision = 0.0;
  double recall = 0.0;
  bool empty_prediction = false;  // precision reported as 1 by convention
};

/// Support is |w_j| >= rel_tol * ||w||_2 on the estimate, exact nonzeros on
/// the truth.
SupportScore support_metrics(const VectorXd& w_hat, const VectorXd& w_true,
                             double rel_tol);

/// One experiment cell result. wall_seconds times the solver only.
struct ExperimentRow {
  int network_size = 0;
  double snr_db = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  int node = 0;
  std::string variant;
  int blocks = 0;
  int workers = 0;
  double nmse = 0.0;
  double support_precision = 0.0;
  double support_recall = 0.0;
  double realized_snr_db = 0.0;
  int outer_iterations = 0;
  long inner_iterations = 0;
  double wall_seconds = 0.0;
  std::string status = "ok";
};

struct AggregateRow {
  int network_size = 0;
  double snr_db = 0.0;
  std::string variant;
  int blocks = 0;
  int workers = 0;
  int trials = 0;
  double nmse_mean = 0.0;
  double nmse_std = 0.0;
  double recall_mean = 0.0;
  double precision_mean = 0.0;
  double wall_median = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  int failures = 0;
};

/// Sweep grid. Per-cell seeds are derived from base_seed and the cell
/// coordinates with splitmix64, independent of variant and worker count so
/// variants compare on identical data.
struct SweepSpec {
  std::vector<int> sizes = {50};
  std::vector<double> snrs_db = {25.0};
  int trials = 50;
  std::vector<Variant> variants = {Variant::ReweightedL1};
  int blocks = 4;
  std::vector<int> workers_list = {1};
  std::uint64_t base_seed = 0;
  int node = 0;
  double dt = 0.1;
  int steps = 1000;
  double density = 0.1;
  double weight_low = -10.0;
  double weight_high = 10.0;
  double omega_std = 3.1622776601683795;  // sqrt(10)
  double support_rel_tol = 1e-3;
  SolverConfig solver;
};

std::uint64_t cell_seed(std::uint64_t base, int size, double snr, int trial);

/// Runs the grid: generate network, calibrate noise to the target SNR,
/// simulate, build the node problem, solve each variant, score. Cell
/// failures are recorded on the row and the sweep continues.
ExperimentReport run_sweep(const SweepSpec& spec);

std::vector<AggregateRow> aggregate(const ExperimentReport& report);

/// CSV emission. `include_timing=false` drops the wall-clock column, which
/// is the only field allowed to differ between identically seeded runs.
std::string report_to_csv(const ExperimentReport& report,
                          bool include_timing = true);
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);
void write_report_csv(const std::string& path, const ExperimentReport& report);
void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRow>& rows);

}  // namespace netrecon

#endif
