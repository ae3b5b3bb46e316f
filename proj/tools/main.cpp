// netrecon command line: simulate oscillator networks, build dictionary
// regressions, run the distributed sparse solver, and benchmark sweeps.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netrecon/dictionary.hpp"
#include "netrecon/io.hpp"
#include "netrecon/kuramoto.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/reweight.hpp"
#include "netrecon/rng.hpp"

namespace nr = netrecon;

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_simulate(const std::string& out_prefix, int nodes, double density,
                 double dt, int steps, std::optional<double> snr_db,
                 std::optional<double> noise_std_flag, int snr_node,
                 double weight_low, double weight_high, double omega_std,
                 std::uint64_t seed) {
  const auto net_seed = nr::derive_seed(seed, 1);
  const auto x0_seed = nr::derive_seed(seed, 2);
  const auto noise_seed = nr::derive_seed(seed, 3);

  const nr::KuramotoModel model = nr::generate_network(
      nodes, density, weight_low, weight_high, omega_std, net_seed);
  const nr::VectorXd x0 = nr::random_initial_phases(nodes, x0_seed);

  double noise_std = noise_std_flag.value_or(0.0);
  if (snr_db.has_value()) {
    noise_std = nr::calibrate_noise_for_snr(model, dt, steps, x0, *snr_db,
                                            snr_node, noise_seed);
  }
  const nr::TimeSeries series =
      nr::simulate(model, dt, steps, x0, noise_std, noise_seed);

  nr::save_matrix_csv(out_prefix + "_phases.csv", series.phases);
  nr::save_matrix_csv(out_prefix + "_W.csv", model.W);
  nr::save_vector_csv(out_prefix + "_omega.csv", model.omega);

  nr::KeyValueMap meta;
  meta["nodes"] = std::to_string(nodes);
  meta["density"] = nr::format_double(density);
  meta["dt"] = nr::format_double(dt);
  meta["steps"] = std::to_string(steps);
  meta["seed"] = std::to_string(seed);
  meta["weight_low"] = nr::format_double(weight_low);
  meta["weight_high"] = nr::format_double(weight_high);
  meta["omega_std"] = nr::format_double(omega_std);
  meta["noise_std"] = nr::format_double(noise_std);
  if (snr_db.has_value()) {
    meta["snr_db_target"] = nr::format_double(*snr_db);
    meta["snr_node"] = std::to_string(snr_node);
  }
  meta["snr_db_realized_node" + std::to_string(snr_node)] =
      nr::format_double(series.snr_db_realized(snr_node));
  nr::save_key_values(out_prefix + "_meta.txt", meta);

  std::cout << "wrote " << out_prefix << "_{phases,W,omega}.csv and meta; "
            << "noise_std=" << noise_std << "\n";
  return 0;
}

int build_one_node(const std::string& data_prefix, const std::string& out,
                   int node, std::optional<double> sigma2_flag,
                   const nr::TimeSeries& series, bool have_truth,
                   const nr::KuramotoModel& model) {
  const nr::DictionarySpec dict = nr::DictionarySpec::trig();
  double sigma2;
  std::string sigma2_source;
  if (sigma2_flag.has_value()) {
    sigma2 = *sigma2_flag;
    sigma2_source = "flag";
  } else {
    nr::RegressionProblem probe =
        nr::build_node_problem(series, node, dict, 0.0);
    sigma2 = nr::estimate_sigma2(probe.y);
    sigma2_source = "estimated";
  }
  nr::RegressionProblem problem =
      nr::build_node_problem(series, node, dict, sigma2);
  nr::validate_problem(problem);

  nr::save_matrix_csv(out + "_A.csv", problem.A);
  nr::save_vector_csv(out + "_y.csv", problem.y);
  std::ofstream labels(out + "_labels.csv");
  for (const auto& label : problem.column_labels) labels << label << "\n";

  if (have_truth) {
    nr::save_vector_csv(out + "_wtrue.csv",
                        nr::true_weight_vector(model, node, dict));
  }
  nr::KeyValueMap meta;
  meta["node"] = std::to_string(node);
  meta["sigma2"] = nr::format_double(sigma2);
  meta["sigma2_source"] = sigma2_source;
  meta["data_prefix"] = data_prefix;
  nr::save_key_values(out + "_meta.txt", meta);
  std::cout << "wrote " << out << "_{A,y,labels}.csv (sigma2=" << sigma2 << ", "
            << sigma2_source << ")\n";
  return 0;
}

int cmd_build_dict(const std::string& data_prefix, const std::string& out,
                   std::optional<int> node, bool all_nodes,
                   std::optional<double> sigma2_flag) {
  const nr::MatrixXd phases = nr::load_matrix_csv(data_prefix + "_phases.csv");
  const nr::KeyValueMap meta = nr::load_key_values(data_prefix + "_meta.txt");
  nr::TimeSeries series;
  series.dt = std::stod(meta.at("dt"));
  series.phases = phases;
  series.times = nr::VectorXd::LinSpaced(
      phases.rows(), 0.0, series.dt * static_cast<double>(phases.rows() - 1));

  if (!sigma2_flag.has_value() && meta.count("noise_std") > 0) {
    const double noise_std = std::stod(meta.at("noise_std"));
    if (noise_std > 0.0) sigma2_flag = noise_std * noise_std;
  }

  nr::KuramotoModel model;
  bool have_truth = false;
  std::ifstream probe_w(data_prefix + "_W.csv");
  if (probe_w.good()) {
    model.W = nr::load_matrix_csv(data_prefix + "_W.csv");
    model.omega = nr::load_vector_csv(data_prefix + "_omega.csv");
    model.n = model.W.rows();
    have_truth = true;
  }

  if (all_nodes) {
    for (int i = 0; i < phases.cols(); ++i) {
      build_one_node(data_prefix, out + "_node" + std::to_string(i), i,
                     sigma2_flag, series, have_truth, model);
    }
    return 0;
  }
  return build_one_node(data_prefix, out, node.value_or(0), sigma2_flag,
                        series, have_truth, model);
}

int cmd_solve(const std::string& problem_prefix, const std::string& out_path,
              const std::string& variant_name, int blocks,
              const nr::SolverConfig& cfg, std::optional<double> sigma2_flag,
              const std::string& truth_path) {
  nr::RegressionProblem problem;
  problem.A = nr::load_matrix_csv(problem_prefix + "_A.csv");
  problem.y = nr::load_vector_csv(problem_prefix + "_y.csv");
  for (Eigen::Index j = 0; j < problem.A.cols(); ++j) {
    problem.column_labels.push_back("c" + std::to_string(j));
  }
  {
    std::ifstream labels_in(problem_prefix + "_labels.csv");
    if (labels_in.good()) {
      std::vector<std::string> labels;
      std::string line;
      while (std::getline(labels_in, line)) {
        if (!line.empty()) labels.push_back(line);
      }
      if (labels.size() == problem.column_labels.size()) {
        problem.column_labels = std::move(labels);
      }
    }
  }

  if (sigma2_flag.has_value()) {
    problem.sigma2 = *sigma2_flag;
  } else {
    std::ifstream meta_in(problem_prefix + "_meta.txt");
    if (meta_in.good()) {
      const auto meta = nr::load_key_values(problem_prefix + "_meta.txt");
      if (meta.count("sigma2") > 0) problem.sigma2 = std::stod(meta.at("sigma2"));
    } else {
      problem.sigma2 = nr::estimate_sigma2(problem.y);
    }
  }
  nr::validate_problem(problem);

  std::optional<nr::VectorXd> w_true;
  if (!truth_path.empty()) w_true = nr::load_vector_csv(truth_path);

  const nr::BlockPartition partition =
      nr::partition_columns(problem.A.cols(), blocks);

  const std::string stem =
      out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv"
          ? out_path.substr(0, out_path.size() - 4)
          : out_path;
  std::ofstream residual_log(stem + "_residuals.csv");
  residual_log << "outer,iteration,e_primal,e_dual,objective\n";
  std::ofstream trace_log(stem + "_trace.csv");
  trace_log << "iteration,active_count,dual_objective,nmse\n";

  int outer = 0;
  const nr::SharingLogger sharing_log =
      [&](const nr::SharingIterationLog& row) {
        residual_log << outer << "," << row.iteration << ","
                     << nr::format_double(row.e_primal) << ","
                     << nr::format_double(row.e_dual) << ","
                     << nr::format_double(row.objective) << "\n";
      };
  const nr::OuterObserver observer = [&](const nr::OuterIteration& info) {
    outer = info.iteration;
    trace_log << info.iteration << "," << info.active_count << ","
              << nr::format_double(info.dual_objective) << ",";
    if (w_true.has_value()) {
      trace_log << nr::format_double(nr::nmse(info.w, *w_true));
    }
    trace_log << "\n";
  };

  const nr::Estimate est =
      nr::solve_variant(nr::variant_from_name(variant_name), problem,
                        partition, cfg, observer, sharing_log);

  nr::save_vector_csv(out_path, est.w_hat);
  std::cout << "variant=" << variant_name << " lambda_eff=" << est.lambda_eff
            << " (sigma2 term " << est.lambda_sigma2_term << ", scale term "
            << est.lambda_scale_term << ")\n"
            << "outer iterations: " << est.outer_iterations
            << ", sharing iterations: " << est.total_inner_iterations
            << ", support size: " << est.support.size() << "\n";
  if (w_true.has_value()) {
    std::cout << "nmse: " << nr::nmse(est.w_hat, *w_true) << "\n";
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_bench(const nr::SweepSpec& spec, const std::string& out_prefix) {
  const nr::ExperimentReport report = nr::run_sweep(spec);
  nr::write_report_csv(out_prefix + "_raw.csv", report);
  nr::write_aggregate_csv(out_prefix + "_agg.csv", nr::aggregate(report));
  std::cout << report.rows.size() << " rows, " << report.failures
            << " failures; wrote " << out_prefix << "_{raw,agg}.csv\n";
  return report.failures > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse reconstruction of nonlinear oscillator networks"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a benchmark trajectory");
  int nodes = 50;
  double density = 0.1, dt = 0.1;
  int steps = 1000;
  double snr_value = 0.0, noise_value = 0.0;
  bool snr_set = false, noise_set = false;
  int snr_node = 0;
  double weight_low = -10.0, weight_high = 10.0;
  double omega_std = std::sqrt(10.0);
  std::uint64_t sim_seed = 0;
  std::string sim_out = "sim";
  sim->add_option("--nodes", nodes, "oscillator count")->required();
  sim->add_option("--density", density, "fraction of nonzero couplings");
  sim->add_option("--dt", dt, "sampling interval");
  sim->add_option("--steps", steps, "number of update steps");
  auto* snr_opt =
      sim->add_option("--snr-db", snr_value, "calibrate noise to this SNR (dB)");
  auto* noise_opt =
      sim->add_option("--noise-std", noise_value, "fixed noise level");
  sim->add_option("--snr-node", snr_node, "node whose SNR is calibrated");
  sim->add_option("--weight-low", weight_low, "coupling lower bound");
  sim->add_option("--weight-high", weight_high, "coupling upper bound");
  sim->add_option("--omega-std", omega_std, "natural frequency std");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out-prefix", sim_out, "output file prefix");

  // build-dict
  auto* build = app.add_subcommand("build-dict", "build per-node regressions");
  std::string data_prefix = "sim", build_out = "problem";
  int build_node = 0;
  bool all_nodes = false, node_set = false;
  double sigma2_value = 0.0;
  bool sigma2_set = false;
  build->add_option("--data", data_prefix, "simulate output prefix")->required();
  auto* node_opt = build->add_option("--node", build_node, "node index");
  build->add_flag("--all-nodes", all_nodes, "emit problems for every node");
  auto* build_sigma2_opt =
      build->add_option("--sigma2", sigma2_value, "override noise variance");
  build->add_option("--out", build_out, "output file prefix");

  // solve
  auto* solve = app.add_subcommand("solve", "run the sparse solver");
  std::string problem_prefix = "problem", solve_out = "w.csv";
  std::string variant = "reweighted-l1", truth_path;
  int blocks = 1;
  nr::SolverConfig cfg;
  double solve_sigma2 = 0.0;
  bool solve_sigma2_set = false;
  solve->add_option("--problem", problem_prefix, "build-dict output prefix")
      ->required();
  solve->add_option("--blocks", blocks, "partition block count");
  solve->add_option("--workers", cfg.workers, "worker thread count");
  solve->add_option("--rho", cfg.rho, "sharing ADMM penalty");
  solve->add_option("--rho-hat", cfg.rho_hat, "inner ADMM penalty");
  solve->add_option("--lambda-scale", cfg.lambda_scale,
                    "lambda = scale * ||A^T y||_inf");
  solve->add_option("--eps-abs", cfg.eps_abs, "absolute tolerance");
  solve->add_option("--eps-rel", cfg.eps_rel, "relative tolerance");
  solve->add_option("--max-admm", cfg.max_admm_iters, "ADMM iteration cap");
  solve->add_option("--max-reweight", cfg.max_reweight_iters,
                    "reweight iteration cap");
  solve->add_option("--prune-rel", cfg.prune_rel, "relative pruning threshold");
  solve->add_option("--variant", variant,
                    "reweighted-l1 | reweighted-l2 | lasso");
  auto* solve_sigma2_opt =
      solve->add_option("--sigma2", solve_sigma2, "override noise variance");
  solve->add_option("--truth", truth_path, "true weight vector CSV (for NMSE)");
  solve->add_option("--out", solve_out, "estimated weights CSV");

  // bench
  auto* bench = app.add_subcommand("bench", "run an experiment sweep");
  std::string sizes_csv = "50", snrs_csv = "25", variants_csv = "reweighted-l1";
  std::string workers_csv = "1", bench_out = "bench";
  nr::SweepSpec spec;
  bench->add_option("--sizes", sizes_csv, "network sizes, comma separated");
  bench->add_option("--snrs", snrs_csv, "target SNRs in dB, comma separated");
  bench->add_option("--trials", spec.trials, "trials per cell");
  bench->add_option("--variants", variants_csv, "solver variants");
  bench->add_option("--blocks", spec.blocks, "partition block count");
  bench->add_option("--workers-list", workers_csv, "worker counts");
  bench->add_option("--base-seed", spec.base_seed, "base seed");
  bench->add_option("--node", spec.node, "node to reconstruct");
  bench->add_option("--dt", spec.dt, "sampling interval");
  bench->add_option("--steps", spec.steps, "update steps");
  bench->add_option("--out-prefix", bench_out, "output file prefix");

  CLI11_PARSE(app, argc, argv);
  snr_set = snr_opt->count() > 0;
  noise_set = noise_opt->count() > 0;
  node_set = node_opt->count() > 0;
  sigma2_set = build_sigma2_opt->count() > 0;
  solve_sigma2_set = solve_sigma2_opt->count() > 0;

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_out, nodes, density, dt, steps,
                          snr_set ? std::optional<double>(snr_value)
                                  : std::nullopt,
                          noise_set ? std::optional<double>(noise_value)
                                    : std::nullopt,
                          snr_node, weight_low, weight_high, omega_std,
                          sim_seed);
    }
    if (build->parsed()) {
      return cmd_build_dict(data_prefix, build_out,
                            node_set ? std::optional<int>(build_node)
                                     : std::nullopt,
                            all_nodes,
                            sigma2_set ? std::optional<double>(sigma2_value)
                                       : std::nullopt);
    }
    if (solve->parsed()) {
      return cmd_solve(problem_prefix, solve_out, variant, blocks, cfg,
                       solve_sigma2_set ? std::optional<double>(solve_sigma2)
                                        : std::nullopt,
                       truth_path);
    }
    if (bench->parsed()) {
      spec.sizes.clear();
      for (const auto& s : split_list(sizes_csv)) spec.sizes.push_back(std::stoi(s));
      spec.snrs_db.clear();
      for (const auto& s : split_list(snrs_csv)) spec.snrs_db.push_back(std::stod(s));
      spec.variants.clear();
      for (const auto& s : split_list(variants_csv)) {
        spec.variants.push_back(nr::variant_from_name(s));
      }
      spec.workers_list.clear();
      for (const auto& s : split_list(workers_csv)) {
        spec.workers_list.push_back(std::stoi(s));
      }
      return cmd_bench(spec, bench_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
