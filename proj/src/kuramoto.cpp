#include "netrecon/kuramoto.hpp"

#include <cmath>
#include <numbers>

#include "netrecon/rng.hpp"

namespace netrecon {

KuramotoModel generate_network(Index n, double density, double weight_low,
                               double weight_high, double omega_std,
                               std::uint64_t seed) {
  if (n < 1) throw ValidationError("node count must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) {
    throw ValidationError("density must lie in (0, 1]");
  }
  if (!(weight_low < weight_high)) {
    throw ValidationError("weight_low must be below weight_high");
  }
  if (!(omega_std > 0.0)) throw ValidationError("omega_std must be positive");

  const std::size_t off_diagonal = static_cast<std::size_t>(n) * (n - 1);
  const std::size_t edges =
      static_cast<std::size_t>(std::llround(density * static_cast<double>(off_diagonal)));
  if (n >= 2 && edges == 0) {
    throw SimulationError("degenerate network: density " +
                          std::to_string(density) + " yields zero edges for n=" +
                          std::to_string(n));
  }

  Rng rng(seed);
  KuramotoModel model;
  model.n = n;
  model.W = MatrixXd::Zero(n, n);
  model.omega = VectorXd::Zero(n);

  // Off-diagonal cells indexed row-major, skipping the diagonal.
  const auto cells = rng.sample_without_replacement(off_diagonal, edges);
  for (const std::size_t cell : cells) {
    const Index i = static_cast<Index>(cell / (n - 1));
    Index j = static_cast<Index>(cell % (n - 1));
    if (j >= i) ++j;
    model.W(i, j) = rng.uniform(weight_low, weight_high);
  }
  for (Index i = 0; i < n; ++i) model.omega(i) = rng.normal(0.0, omega_std);
  return model;
}

VectorXd random_initial_phases(Index n, std::uint64_t seed) {
  Rng rng(seed);
  VectorXd x0(n);
  for (Index i = 0; i < n; ++i) {
    x0(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return x0;
}

TimeSeries simulate(const KuramotoModel& model, double dt, Index steps,
                    const VectorXd& x0, double noise_std, std::uint64_t seed) {
  const Index n = model.n;
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (steps < 1) throw ValidationError("steps must be >= 1");
  if (x0.size() != n) {
    throw ValidationError("x0 has length " + std::to_string(x0.size()) +
                          " but the model has " + std::to_string(n) + " nodes");
  }
  if (noise_std < 0.0) throw ValidationError("noise_std must be >= 0");

  Rng rng(seed);
  TimeSeries series;
  series.dt = dt;
  series.times = VectorXd::LinSpaced(steps + 1, 0.0, dt * static_cast<double>(steps));
  series.phases.resize(steps + 1, n);
  series.noise_record.resize(steps, n);
  series.phases.row(0) = x0.transpose();

  VectorXd signal_sq = VectorXd::Zero(n);  // sum of squared noiseless drifts
  VectorXd noise_sq = VectorXd::Zero(n);

  for (Index k = 0; k < steps; ++k) {
    const auto phi = series.phases.row(k);
    for (Index i = 0; i < n; ++i) {
      double drift = model.omega(i);
      for (Index j = 0; j < n; ++j) {
        const double w = model.W(i, j);
        if (w != 0.0) drift += w * std::sin(phi(j) - phi(i));
      }
      const double xi = noise_std == 0.0 ? 0.0 : rng.normal(0.0, noise_std);
      series.noise_record(k, i) = xi;
      signal_sq(i) += drift * drift;
      noise_sq(i) += xi * xi;
      const double next = phi(i) + dt * (drift + xi);
      if (!std::isfinite(next)) {
        throw SimulationError("divergence at step " + std::to_string(k) +
                              ", node " + std::to_string(i));
      }
      series.phases(k + 1, i) = next;
    }
  }

  series.snr_db_realized.resize(n);
  for (Index i = 0; i < n; ++i) {
    series.snr_db_realized(i) =
        noise_sq(i) == 0.0
            ? std::numeric_limits<double>::infinity()
            : 10.0 * std::log10(signal_sq(i) / noise_sq(i));
  }
  return series;
}

double calibrate_noise_for_snr(const KuramotoModel& model, double dt,
                               Index steps, const VectorXd& x0,
                               double target_snr_db, Index node,
                               std::uint64_t seed) {
  if (!std::isfinite(target_snr_db)) {
    throw ValidationError("target SNR must be finite");
  }
  if (node < 0 || node >= model.n) {
    throw ValidationError("node index out of range: " + std::to_string(node));
  }

  double noise_std = 1.0;
  for (int pass = 0; pass < 30; ++pass) {
    const TimeSeries series = simulate(model, dt, steps, x0, noise_std, seed);
    const double realized = series.snr_db_realized(node);
    if (realized == -std::numeric_limits<double>::infinity() ||
        std::isnan(realized)) {
      throw SimulationError("undefined SNR: zero signal norm at node " +
                            std::to_string(node));
    }
    if (realized == std::numeric_limits<double>::infinity()) {
      throw SimulationError("undefined SNR: node " + std::to_string(node) +
                            " drew an all-zero noise vector");
    }
    if (std::abs(realized - target_snr_db) <= 0.4) return noise_std;
    noise_std *= std::pow(10.0, (realized - target_snr_db) / 20.0);
  }
  throw SimulationError("SNR calibration did not settle within 30 passes");
}

}  // namespace netrecon
