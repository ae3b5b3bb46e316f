#ifndef NETRECON_IO_HPP
#define NETRECON_IO_HPP

#include <map>
#include <string>

#include "netrecon/types.hpp"

namespace netrecon {

// Matrix CSV: first line `# rows=M cols=N`, then M comma-separated rows.
// Vectors are the single-column case. Doubles are written with 17
// significant digits so a save/load round trip is exact.

void save_matrix_csv(const std::string& path, const MatrixXd& m);
MatrixXd load_matrix_csv(const std::string& path);

void save_vector_csv(const std::string& path, const VectorXd& v);
VectorXd load_vector_csv(const std::string& path);

// Flat `key=value` text files, one pair per line, `#` starts a comment.
using KeyValueMap = std::map<std::string, std::string>;

void save_key_values(const std::string& path, const KeyValueMap& kv);
KeyValueMap load_key_values(const std::string& path);

/// Config file uses exactly the SolverConfig field names as keys.
/// Unknown keys are rejected; missing keys keep their defaults.
SolverConfig config_from_key_values(const KeyValueMap& kv);
KeyValueMap config_to_key_values(const SolverConfig& cfg);

SolverConfig load_config(const std::string& path);
void save_config(const std::string& path, const SolverConfig& cfg);

std::string format_double(double v);

}  // namespace netrecon

#endif
