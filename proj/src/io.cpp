#include "netrecon/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace netrecon {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_matrix_csv(const std::string& path, const MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "# rows=" << m.rows() << " cols=" << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  if (!out) throw ValidationError("write failed: " + path);
}

MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open for reading: " + path);
  std::string header;
  std::getline(in, header);
  Index rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "# rows=%td cols=%td", &rows, &cols) != 2 ||
      rows < 1 || cols < 1) {
    throw ValidationError("bad matrix header in " + path + ": " + header);
  }
  MatrixXd m(rows, cols);
  std::string line;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw ValidationError("truncated matrix file " + path + " at row " +
                            std::to_string(i));
    }
    std::stringstream ss(line);
    std::string cell;
    for (Index j = 0; j < cols; ++j) {
      if (!std::getline(ss, cell, ',')) {
        throw ValidationError("short row " + std::to_string(i) + " in " + path);
      }
      m(i, j) = std::strtod(cell.c_str(), nullptr);
    }
  }
  return m;
}

void save_vector_csv(const std::string& path, const VectorXd& v) {
  save_matrix_csv(path, v);
}

VectorXd load_vector_csv(const std::string& path) {
  MatrixXd m = load_matrix_csv(path);
  if (m.cols() != 1) {
    throw ValidationError("expected single-column vector in " + path +
                          ", got " + std::to_string(m.cols()) + " columns");
  }
  return m.col(0);
}

void save_key_values(const std::string& path, const KeyValueMap& kv) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  for (const auto& [key, value] : kv) out << key << "=" << value << "\n";
}

KeyValueMap load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open for reading: " + path);
  KeyValueMap kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("bad key=value line in " + path + ": " + line);
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

SolverConfig config_from_key_values(const KeyValueMap& kv) {
  SolverConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "rho") cfg.rho = std::stod(value);
    else if (key == "rho_hat") cfg.rho_hat = std::stod(value);
    else if (key == "lambda_scale") cfg.lambda_scale = std::stod(value);
    else if (key == "eps_abs") cfg.eps_abs = std::stod(value);
    else if (key == "eps_rel") cfg.eps_rel = std::stod(value);
    else if (key == "max_admm_iters") cfg.max_admm_iters = std::stoi(value);
    else if (key == "max_reweight_iters") cfg.max_reweight_iters = std::stoi(value);
    else if (key == "prune_rel") cfg.prune_rel = std::stod(value);
    else if (key == "workers") cfg.workers = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoll(value);
    else throw ValidationError("unknown config key: " + key);
  }
  validate_config(cfg);
  return cfg;
}

KeyValueMap config_to_key_values(const SolverConfig& cfg) {
  KeyValueMap kv;
  kv["rho"] = format_double(cfg.rho);
  kv["rho_hat"] = format_double(cfg.rho_hat);
  kv["lambda_scale"] = format_double(cfg.lambda_scale);
  kv["eps_abs"] = format_double(cfg.eps_abs);
  kv["eps_rel"] = format_double(cfg.eps_rel);
  kv["max_admm_iters"] = std::to_string(cfg.max_admm_iters);
  kv["max_reweight_iters"] = std::to_string(cfg.max_reweight_iters);
  kv["prune_rel"] = format_double(cfg.prune_rel);
  kv["workers"] = std::to_string(cfg.workers);
  kv["seed"] = std::to_string(cfg.seed);
  return kv;
}

SolverConfig load_config(const std::string& path) {
  return config_from_key_values(load_key_values(path));
}

void save_config(const std::string& path, const SolverConfig& cfg) {
  save_key_values(path, config_to_key_values(cfg));
}

}  // namespace netrecon
