#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netrecon/kuramoto.hpp"
#include "netrecon/rng.hpp"
#include "oracles.hpp"

using namespace netrecon;

namespace {

KuramotoModel random_model(Index n, std::uint64_t seed) {
  return generate_network(n, 0.3, -2.0, 2.0, 1.0, seed);
}

}  // namespace

TEST_CASE("network has exactly round(density * n * (n-1)) edges") {
  const KuramotoModel model = generate_network(10, 0.1, -10, 10, 1.0, 5);
  int edges = 0;
  for (Index i = 0; i < 10; ++i) {
    for (Index j = 0; j < 10; ++j) {
      if (model.W(i, j) != 0.0) ++edges;
    }
    CHECK(model.W(i, i) == 0.0);
  }
  CHECK(edges == 9);  // round(0.1 * 90)
}

TEST_CASE("same seed reproduces the model bit for bit") {
  const KuramotoModel a = generate_network(17, 0.2, -3, 3, 2.0, 99);
  const KuramotoModel b = generate_network(17, 0.2, -3, 3, 2.0, 99);
  CHECK(a.W == b.W);
  CHECK(a.omega == b.omega);
}

TEST_CASE("nonzero weights average to the interval midpoint") {
  // Monte-Carlo: mean over all nonzero weights across seeds should sit
  // within 3 standard errors of (low+high)/2.
  const double low = -10.0, high = 10.0;
  double sum = 0.0, sum_sq = 0.0;
  long count = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const KuramotoModel model = generate_network(100, 0.1, low, high, 1.0, seed);
    for (Index i = 0; i < model.n; ++i) {
      for (Index j = 0; j < model.n; ++j) {
        if (model.W(i, j) != 0.0) {
          sum += model.W(i, j);
          sum_sq += model.W(i, j) * model.W(i, j);
          ++count;
        }
      }
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sum_sq / static_cast<double>(count) - mean * mean;
  const double standard_error = std::sqrt(var / static_cast<double>(count));
  CHECK(std::abs(mean - (low + high) / 2.0) < 3.0 * standard_error);
}

TEST_CASE("degenerate density is rejected") {
  CHECK_THROWS_WITH_AS(generate_network(5, 0.01, -1, 1, 1.0, 0),
                       doctest::Contains("degenerate network"),
                       SimulationError);
}

TEST_CASE("uncoupled noiseless oscillators drift linearly") {
  KuramotoModel model;
  model.n = 3;
  model.W = MatrixXd::Zero(3, 3);
  model.omega = VectorXd{{0.5, -1.0, 2.0}};
  const VectorXd x0{{0.1, 0.2, 0.3}};
  const TimeSeries series = simulate(model, 0.25, 8, x0, 0.0, 1);
  for (Index k = 0; k <= 8; ++k) {
    for (Index i = 0; i < 3; ++i) {
      CHECK(series.phases(k, i) ==
            doctest::Approx(x0(i) + static_cast<double>(k) * 0.25 * model.omega(i))
                .epsilon(1e-15));
    }
  }
  CHECK(series.noise_record.isZero(0.0));
}

TEST_CASE("equal phases with symmetric coupling stay equal") {
  KuramotoModel model;
  model.n = 2;
  model.W = MatrixXd{{0.0, 4.0}, {4.0, 0.0}};
  model.omega = VectorXd{{1.5, 1.5}};
  const VectorXd x0{{0.7, 0.7}};
  const TimeSeries series = simulate(model, 0.1, 10, x0, 0.0, 1);
  for (Index k = 0; k <= 10; ++k) {
    CHECK(series.phases(k, 0) == series.phases(k, 1));
    CHECK(series.phases(k, 0) ==
          doctest::Approx(0.7 + static_cast<double>(k) * 0.1 * 1.5).epsilon(1e-15));
  }
}

TEST_CASE("noisy trajectory matches a step-by-step recursion replay") {
  const KuramotoModel model = random_model(3, 21);
  const VectorXd x0{{0.3, 1.1, 2.9}};
  const TimeSeries series = simulate(model, 0.1, 5, x0, 0.4, 77);
  const MatrixXd replayed = oracles::replay_phase_recursion(
      model.W, model.omega, x0, 0.1, series.noise_record);
  CHECK((series.phases - replayed).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noise can be reconstructed from the stored phases") {
  const KuramotoModel model = random_model(4, 33);
  const VectorXd x0 = random_initial_phases(4, 8);
  const TimeSeries series = simulate(model, 0.05, 40, x0, 0.7, 13);
  for (Index k = 0; k < 40; ++k) {
    for (Index i = 0; i < 4; ++i) {
      double drift = model.omega(i);
      for (Index j = 0; j < 4; ++j) {
        drift += model.W(i, j) *
                 std::sin(series.phases(k, j) - series.phases(k, i));
      }
      const double xi =
          (series.phases(k + 1, i) - series.phases(k, i)) / 0.05 - drift;
      CHECK(xi == doctest::Approx(series.noise_record(k, i)).epsilon(1e-9));
    }
  }
}

TEST_CASE("simulate is bitwise deterministic") {
  const KuramotoModel model = random_model(6, 3);
  const VectorXd x0 = random_initial_phases(6, 4);
  const TimeSeries a = simulate(model, 0.1, 30, x0, 0.5, 5);
  const TimeSeries b = simulate(model, 0.1, 30, x0, 0.5, 5);
  CHECK(a.phases == b.phases);
  CHECK(a.noise_record == b.noise_record);
}

TEST_CASE("divergence names the first bad step") {
  KuramotoModel model;
  model.n = 1;
  model.W = MatrixXd::Zero(1, 1);
  model.omega = VectorXd{{1e308}};
  const VectorXd x0{{0.0}};
  CHECK_THROWS_WITH_AS(simulate(model, 10.0, 4, x0, 0.0, 0),
                       doctest::Contains("step 0"), SimulationError);
}

TEST_CASE("calibrated noise hits the target SNR within half a dB") {
  const KuramotoModel model = random_model(5, 12);
  const VectorXd x0 = random_initial_phases(5, 2);
  const double noise_std =
      calibrate_noise_for_snr(model, 0.1, 200, x0, 0.0, 0, 6);
  const TimeSeries series = simulate(model, 0.1, 200, x0, noise_std, 6);
  // 0 dB means the signal/noise norm ratio lies in 10^(-0.025..0.025)
  const double ratio = std::pow(10.0, series.snr_db_realized(0) / 20.0);
  CHECK(ratio > std::pow(10.0, -0.025));
  CHECK(ratio < std::pow(10.0, 0.025));
}

TEST_CASE("noise scales linearly between SNR targets at fixed seed") {
  // With zero coupling the signal is the constant omega drift, so the
  // calibrated noise level scales exactly with the target.
  KuramotoModel model;
  model.n = 2;
  model.W = MatrixXd::Zero(2, 2);
  model.omega = VectorXd{{2.0, -1.0}};
  const VectorXd x0{{0.4, 1.0}};
  const double at_0db = calibrate_noise_for_snr(model, 0.1, 100, x0, 0.0, 0, 9);
  const double at_20db =
      calibrate_noise_for_snr(model, 0.1, 100, x0, 20.0, 0, 9);
  CHECK(at_0db / at_20db == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("the benchmark SNR grid is reachable") {
  const KuramotoModel model = random_model(5, 40);
  const VectorXd x0 = random_initial_phases(5, 41);
  for (const double target : {5.0, 10.0, 15.0, 20.0, 25.0}) {
    const double noise_std =
        calibrate_noise_for_snr(model, 0.1, 150, x0, target, 0, 42);
    const TimeSeries series = simulate(model, 0.1, 150, x0, noise_std, 42);
    CHECK(std::abs(series.snr_db_realized(0) - target) <= 0.5);
  }
}

TEST_CASE("zero signal makes the SNR undefined") {
  KuramotoModel model;
  model.n = 1;
  model.W = MatrixXd::Zero(1, 1);
  model.omega = VectorXd{{0.0}};
  const VectorXd x0{{0.0}};
  CHECK_THROWS_WITH_AS(calibrate_noise_for_snr(model, 0.1, 50, x0, 10.0, 0, 3),
                       doctest::Contains("zero signal"), SimulationError);
}
