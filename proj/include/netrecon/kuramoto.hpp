#ifndef NETRECON_KURAMOTO_HPP
#define NETRECON_KURAMOTO_HPP

#include <cstdint>
#include <string>

#include "netrecon/types.hpp"

namespace netrecon {

/// Ground-truth oscillator network: natural frequencies omega and the
/// coupling matrix W with zero diagonal. The ground-truth coupling family
/// is sine.
struct KuramotoModel {
  Index n = 0;
  VectorXd omega;    // length n
  MatrixXd W;        // n x n, diag(W) = 0
  std::string coupling = "sine";
};

/// Simulated trajectory. Phases are stored UNWRAPPED (no modulo 2*pi): the
/// dictionary depends on phases only through differences, and wrapping
/// would corrupt the finite-difference regression target.
struct TimeSeries {
  VectorXd times;           // length steps+1, uniform spacing dt
  MatrixXd phases;          // (steps+1) x n
  double dt = 0.0;
  MatrixXd noise_record;    // steps x n, realized xi_i(t_k)
  VectorXd snr_db_realized; // length n; +inf when the node's noise is zero
};

/// Random network with exactly round(density * n * (n-1)) nonzero
/// off-diagonal couplings, chosen uniformly without replacement; nonzero
/// weights ~ U[weight_low, weight_high], omega_i ~ N(0, omega_std^2).
///
/// Draw order under the seed: edge positions (row-major off-diagonal
/// index, partial Fisher-Yates), then weights in selection order, then
/// omega by ascending node index.
KuramotoModel generate_network(Index n, double density, double weight_low,
                               double weight_high, double omega_std,
                               std::uint64_t seed);

/// Discrete-time recursion
///   phi_i(t_{k+1}) = phi_i(t_k)
///                  + dt * [omega_i + sum_j W_ij sin(phi_j - phi_i) + xi_i(t_k)]
/// with xi_i(t_k) iid N(0, noise_std^2), recorded in noise_record. Noise is
/// drawn step-major, node-minor. Throws SimulationError naming the step if
/// the state leaves the finite range.
TimeSeries simulate(const KuramotoModel& model, double dt, Index steps,
                    const VectorXd& x0, double noise_std, std::uint64_t seed);

/// Initial phases drawn uniformly from [0, 2*pi), ascending node index.
VectorXd random_initial_phases(Index n, std::uint64_t seed);

/// Finds noise_std so that the realized SNR for `node`, defined as
/// 20*log10(||signal|| / ||xi||), lands within +-0.5 dB of target_snr_db.
/// The noise norm is linear in noise_std at fixed seed, so a few fixed-point
/// scalings suffice.
double calibrate_noise_for_snr(const KuramotoModel& model, double dt,
                               Index steps, const VectorXd& x0,
                               double target_snr_db, Index node,
                               std::uint64_t seed);

}  // namespace netrecon

#endif
