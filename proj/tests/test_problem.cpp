#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "netrecon/io.hpp"
#include "netrecon/rng.hpp"
#include "netrecon/types.hpp"

using namespace netrecon;

namespace {

RegressionProblem small_problem() {
  RegressionProblem p;
  p.A = MatrixXd{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
  p.y = VectorXd{{1.0, 2.0, 3.0}};
  p.sigma2 = 0.5;
  p.column_labels = {"a", "b"};
  return p;
}

}  // namespace

TEST_CASE("validate_problem accepts a consistent problem") {
  const RegressionProblem p = small_problem();
  CHECK_NOTHROW(validate_problem(p));
}

TEST_CASE("validate_problem rejects mismatched y length") {
  RegressionProblem p = small_problem();
  p.y = VectorXd::Zero(4);
  CHECK_THROWS_WITH_AS(validate_problem(p),
                       doctest::Contains("y has length 4"), ValidationError);
}

TEST_CASE("validate_problem names the non-finite entry") {
  RegressionProblem p = small_problem();
  p.A(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(validate_problem(p),
                       doctest::Contains("row 1, col 0"), ValidationError);
}

TEST_CASE("validate_problem rejects duplicate labels and bad sigma2") {
  RegressionProblem p = small_problem();
  p.column_labels = {"a", "a"};
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
  p = small_problem();
  p.sigma2 = -1.0;
  CHECK_THROWS_AS(validate_problem(p), ValidationError);
}

TEST_CASE("partition_columns splits 5 into [3,2]") {
  const BlockPartition part = partition_columns(5, 2);
  REQUIRE(part.blocks() == 2);
  CHECK(part.block_ranges[0] == ColRange{0, 3});
  CHECK(part.block_ranges[1] == ColRange{3, 5});
}

TEST_CASE("partition_columns gives singletons when P == N") {
  const BlockPartition part = partition_columns(4, 4);
  REQUIRE(part.blocks() == 4);
  for (Index b = 0; b < 4; ++b) {
    CHECK(part.block_ranges[static_cast<std::size_t>(b)] ==
          ColRange{b, b + 1});
  }
}

TEST_CASE("partition_columns 2001 into 1000 blocks") {
  const BlockPartition part = partition_columns(2001, 1000);
  REQUIRE(part.blocks() == 1000);
  Index total = 0;
  int of_size_3 = 0, of_size_2 = 0;
  for (const ColRange& r : part.block_ranges) {
    total += r.size();
    if (r.size() == 3) ++of_size_3;
    if (r.size() == 2) ++of_size_2;
  }
  CHECK(total == 2001);
  CHECK(of_size_3 == 1);
  CHECK(of_size_2 == 999);
}

TEST_CASE("partition_columns rejects out-of-range block counts") {
  CHECK_THROWS_AS(partition_columns(3, 4), ValidationError);
  CHECK_THROWS_AS(partition_columns(3, 0), ValidationError);
}

TEST_CASE("partition invariants hold for random N, P") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(300));
    const Index p = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    const BlockPartition part = partition_columns(n, p);
    REQUIRE(part.blocks() == static_cast<std::size_t>(p));
    Index cursor = 0;
    Index max_size = 0, min_size = n + 1;
    for (const ColRange& r : part.block_ranges) {
      REQUIRE(r.begin == cursor);   // contiguous, ordered, disjoint
      REQUIRE(r.size() >= 1);
      cursor = r.end;
      max_size = std::max(max_size, r.size());
      min_size = std::min(min_size, r.size());
    }
    REQUIRE(cursor == n);
    REQUIRE(max_size - min_size <= 1);
  }
}

TEST_CASE("block sub-matrices reassemble the original matrix") {
  Rng rng(11);
  MatrixXd A(6, 13);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) A(i, j) = rng.normal(0, 1);
  }
  const BlockPartition part = partition_columns(A.cols(), 4);
  MatrixXd rebuilt(A.rows(), A.cols());
  for (const ColRange& r : part.block_ranges) {
    rebuilt.middleCols(r.begin, r.size()) = A.middleCols(r.begin, r.size());
  }
  CHECK(rebuilt == A);
}

TEST_CASE("lambda rule resolves against the problem") {
  const RegressionProblem p = small_problem();
  const double expected =
      0.05 * (p.A.transpose() * p.y).lpNorm<Eigen::Infinity>();
  CHECK(lambda_from_scale(p.A, p.y, 0.05) == doctest::Approx(expected));
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(validate_config(cfg));
  cfg.rho = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
  cfg = SolverConfig{};
  cfg.max_admm_iters = 0;
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);
}

TEST_CASE("matrix CSV round trip is exact") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "netrecon_io_test";
  fs::create_directories(dir);
  Rng rng(3);
  MatrixXd m(7, 4);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal(0, 10);
  }
  const std::string path = (dir / "m.csv").string();
  save_matrix_csv(path, m);
  CHECK(load_matrix_csv(path) == m);

  const VectorXd v = m.col(2);
  const std::string vpath = (dir / "v.csv").string();
  save_vector_csv(vpath, v);
  CHECK(load_vector_csv(vpath) == v);
  fs::remove_all(dir);
}

TEST_CASE("config key=value round trip uses the exact field names") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "netrecon_cfg_test";
  fs::create_directories(dir);
  SolverConfig cfg;
  cfg.rho = 2.5;
  cfg.lambda_scale = 0.01;
  cfg.max_admm_iters = 321;
  cfg.workers = 3;
  cfg.seed = -7;
  const std::string path = (dir / "cfg.txt").string();
  save_config(path, cfg);
  const SolverConfig loaded = load_config(path);
  CHECK(loaded.rho == cfg.rho);
  CHECK(loaded.lambda_scale == cfg.lambda_scale);
  CHECK(loaded.max_admm_iters == cfg.max_admm_iters);
  CHECK(loaded.workers == cfg.workers);
  CHECK(loaded.seed == cfg.seed);

  const KeyValueMap kv = config_to_key_values(cfg);
  CHECK(kv.count("rho_hat") == 1);
  CHECK(kv.count("eps_abs") == 1);
  CHECK(kv.count("eps_rel") == 1);
  CHECK(kv.count("max_reweight_iters") == 1);
  CHECK(kv.count("prune_rel") == 1);
  CHECK_THROWS_AS(config_from_key_values({{"bogus", "1"}}), ValidationError);
  fs::remove_all(dir);
}
