#include <doctest.h>

#include <cmath>

#include "fcpd/energy.hpp"
#include "fcpd/errors.hpp"
#include "fcpd/longrun.hpp"
#include "fcpd/rng.hpp"

using namespace fcpd;

namespace {

FunctionalSample make_sample(Eigen::MatrixXd values, std::size_t r = 1) {
  FunctionalSample sample;
  sample.n_obs = static_cast<std::size_t>(values.rows());
  sample.n_components = r;
  sample.grid =
      Grid::uniform01(static_cast<std::size_t>(values.cols()) / r);
  sample.values = std::move(values);
  return sample;
}

// Integer-valued random curves: all sums in the statistic stay exactly
// representable, so the symmetry properties can be checked bitwise.
Eigen::MatrixXd integer_data(CounterRng& rng, int n, int s) {
  Eigen::MatrixXd values(n, s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < s; ++j)
      values(i, j) = static_cast<double>(
          static_cast<int>(rng.next_u64() % 17) - 8);
  return values;
}

}  // namespace

TEST_CASE("identical curves give a zero statistic") {
  Eigen::MatrixXd values = Eigen::MatrixXd::Ones(8, 6) * 3.7;
  const FunctionalSample sample = make_sample(values);
  const InnerProductCache cache = build_cache(sample);
  for (std::size_t k = 2; k <= 6; ++k) {
    CHECK(v_statistic_pairwise(sample, 0, 8, k) == 0.0);
    CHECK(std::abs(v_statistic_fast(cache, 0, 8, k)) < 1e-12);
  }
}

TEST_CASE("two-block example evaluates to 2c^2") {
  const double c = 1.7;
  Eigen::MatrixXd values(6, 10);
  values.topRows(3).setZero();
  values.bottomRows(3).setConstant(c);
  const FunctionalSample sample = make_sample(values);
  const InnerProductCache cache = build_cache(sample);

  CHECK(v_statistic_pairwise(sample, 0, 6, 3) ==
        doctest::Approx(2 * c * c).epsilon(1e-12));
  CHECK(v_statistic_fast(cache, 0, 6, 3) ==
        doctest::Approx(2 * c * c).epsilon(1e-12));

  // The full-sample weighted process peaks at the true split.
  const WeightedEnergyProcess process = weighted_process(cache, 0, 6, 0.5);
  CHECK(process.argmax_k == 3);
}

TEST_CASE("window preconditions") {
  const FunctionalSample sample = make_sample(Eigen::MatrixXd::Random(10, 4));
  const InnerProductCache cache = build_cache(sample);
  CHECK_THROWS_AS(v_statistic_pairwise(sample, 0, 10, 1), DomainError);
  CHECK_THROWS_AS(v_statistic_pairwise(sample, 0, 10, 9), DomainError);
  CHECK_THROWS_AS(v_statistic_pairwise(sample, 3, 7, 5), DomainError);
  CHECK_THROWS_AS(v_statistic_fast(cache, 0, 11, 5), DomainError);
  CHECK_THROWS_AS(weighted_process(cache, 0, 10, 1.0), ConfigError);
  CHECK_THROWS_AS(weighted_process(cache, 0, 10, -0.1), ConfigError);
}

TEST_CASE("fast path agrees with the pairwise oracle on random windows") {
  CounterRng rng(99);
  for (int instance = 0; instance < 25; ++instance) {
    const int n = 6 + static_cast<int>(rng.next_u64() % 20);
    const int s = 3 + static_cast<int>(rng.next_u64() % 10);
    Eigen::MatrixXd values(n, s);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < s; ++j) values(i, j) = rng.normal();
    const FunctionalSample sample = make_sample(values);
    const InnerProductCache cache = build_cache(sample);

    for (std::size_t l = 0; l + 5 <= static_cast<std::size_t>(n); ++l) {
      for (std::size_t u = l + 5; u <= static_cast<std::size_t>(n); ++u) {
        for (std::size_t k = l + 2; k + 2 <= u; ++k) {
          const double slow = v_statistic_pairwise(sample, l, u, k);
          const double fast = v_statistic_fast(cache, l, u, k);
          const double scale = std::max(std::abs(slow), 1e-3);
          CHECK(std::abs(fast - slow) / scale < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("shift invariance is exact for the pairwise oracle") {
  CounterRng rng(5);
  const Eigen::MatrixXd base = integer_data(rng, 9, 5);
  Eigen::RowVectorXd shift(5);
  for (int j = 0; j < 5; ++j)
    shift[j] = static_cast<double>(static_cast<int>(rng.next_u64() % 9) - 4);

  const FunctionalSample sample = make_sample(base);
  Eigen::MatrixXd shifted = base;
  shifted.rowwise() += shift;
  const FunctionalSample sample2 = make_sample(shifted);

  const InnerProductCache c1 = build_cache(sample);
  const InnerProductCache c2 = build_cache(sample2);
  for (std::size_t k = 2; k <= 7; ++k) {
    CHECK(v_statistic_pairwise(sample, 0, 9, k) ==
          v_statistic_pairwise(sample2, 0, 9, k));
    CHECK(v_statistic_fast(c1, 0, 9, k) ==
          doctest::Approx(v_statistic_fast(c2, 0, 9, k)).epsilon(1e-10));
  }
  const WeightedEnergyProcess p1 = weighted_process(c1, 0, 9, 0.5);
  const WeightedEnergyProcess p2 = weighted_process(c2, 0, 9, 0.5);
  CHECK(p1.argmax_k == p2.argmax_k);
}

TEST_CASE("scale equivariance: V scales with c^2") {
  CounterRng rng(6);
  const Eigen::MatrixXd base = integer_data(rng, 8, 6);
  const double c = 4.0;  // power of two keeps the check exact

  const FunctionalSample sample = make_sample(base);
  const FunctionalSample scaled = make_sample(c * base);
  for (std::size_t k = 2; k <= 6; ++k)
    CHECK(v_statistic_pairwise(scaled, 0, 8, k) ==
          c * c * v_statistic_pairwise(sample, 0, 8, k));

  const WeightedEnergyProcess p1 =
      weighted_process(build_cache(sample), 0, 8, 0.25);
  const WeightedEnergyProcess p2 =
      weighted_process(build_cache(scaled), 0, 8, 0.25);
  CHECK(p1.argmax_k == p2.argmax_k);
}

TEST_CASE("reversal symmetry of the process") {
  CounterRng rng(8);
  const int n = 10;
  const Eigen::MatrixXd base = integer_data(rng, n, 4);
  const FunctionalSample sample = make_sample(base);
  const FunctionalSample reversed = make_sample(base.colwise().reverse());

  for (std::size_t k = 2; k + 2 <= n; ++k)
    CHECK(v_statistic_pairwise(sample, 0, n, k) ==
          v_statistic_pairwise(reversed, 0, n, n - k));
}

TEST_CASE("weight factor") {
  // At u = 1/2 and alpha = 0 the split factor is (1/4)^2.
  CHECK(process_weight(0, 100, 50, 0.0) ==
        doctest::Approx(0.5 * 100 * 0.0625).epsilon(1e-15));
  // Symmetric in k around the midpoint for any alpha.
  for (double alpha : {0.0, 0.25, 0.5, 0.99})
    for (std::size_t k = 2; k <= 50; ++k)
      CHECK(process_weight(0, 100, k, alpha) ==
            doctest::Approx(process_weight(0, 100, 100 - k, alpha))
                .epsilon(1e-14));
}

TEST_CASE("constant data: zero max and smallest admissible argmax") {
  const FunctionalSample sample =
      make_sample(Eigen::MatrixXd::Constant(12, 5, 2.5));
  const WeightedEnergyProcess process =
      weighted_process(build_cache(sample), 0, 12, 0.5);
  CHECK(process.max_value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(process.argmax_k == 2);
  for (double v : process.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("breakdate estimation on the deterministic two-block sample") {
  const double c = 2.0;
  Eigen::MatrixXd values(6, 8);
  values.topRows(3).setZero();
  values.bottomRows(3).setConstant(c);
  // Add a tiny wiggle so the long-run covariance is not identically 0.
  CounterRng rng(17);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 8; ++j) values(i, j) += 1e-3 * rng.normal();

  const FunctionalSample sample = make_sample(values);
  const InnerProductCache cache = build_cache(sample);
  const WeightedEnergyProcess process = weighted_process(cache, 0, 6, 0.5);
  const LongRunCovarianceEstimate cov =
      estimate_longrun(sample, KernelSpec{}, 1.0);

  const BreakdateEstimate est = estimate_breakdate(sample, process, cov);
  CHECK(est.k_hat == 3);
  CHECK(est.theta_hat == doctest::Approx(0.5));
  CHECK(est.delta_norm == doctest::Approx(c).epsilon(1e-2));
  CHECK(est.sigma2_hat >= 0.0);

  SUBCASE("degenerate difference is rejected") {
    const FunctionalSample flat =
        make_sample(Eigen::MatrixXd::Constant(8, 4, 1.0));
    const InnerProductCache fc = build_cache(flat);
    const WeightedEnergyProcess fp = weighted_process(fc, 0, 8, 0.5);
    const LongRunCovarianceEstimate fcov =
        estimate_longrun(flat, KernelSpec{}, 1.0);
    CHECK_THROWS_AS(estimate_breakdate(flat, fp, fcov), DegenerateError);
  }
}
