#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fcpd/errors.hpp"
#include "fcpd/io.hpp"
#include "fcpd/rng.hpp"
#include "fcpd/sample.hpp"

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

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& contents)
      : path("fcpd_test_" + name) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("grid weight and validation") {
  Grid g = Grid::uniform01(128);
  CHECK(g.total_points() == 128);
  CHECK(g.weight() == doctest::Approx(1.0 / 128).epsilon(1e-15));

  Grid bad = g;
  bad.spacing[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  Grid d2;
  d2.dim = 2;
  d2.points_per_axis = {8, 4};
  d2.spacing = {0.125, 0.25};
  d2.validate();
  CHECK(d2.total_points() == 32);
  CHECK(d2.weight() == doctest::Approx(0.03125));
}

TEST_CASE("csv loading applies the default grid and precondition checks") {
  SUBCASE("too few observations") {
    TempFile f("small.csv", "1,2,3\n4,5,6\n7,8,9\n1,1,1\n");
    CHECK_THROWS_AS(load_sample(f.path, SampleFormat::csv_rows), DataError);
  }
  SUBCASE("default grid on a 10x128 file") {
    std::string body;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 128; ++j)
        body += (j ? "," : "") + std::to_string(i + j);
      body += "\n";
    }
    TempFile f("wide.csv", body);
    const FunctionalSample sample =
        load_sample(f.path, SampleFormat::csv_rows);
    CHECK(sample.n_obs == 10);
    CHECK(sample.n_components == 1);
    CHECK(sample.grid.total_points() == 128);
    CHECK(sample.grid.spacing[0] == doctest::Approx(1.0 / 128));
  }
  SUBCASE("NaN entries are rejected") {
    TempFile f("nan.csv",
               "1,2,3\n4,NaN,6\n7,8,9\n1,1,1\n2,2,2\n3,3,3\n");
    CHECK_THROWS_AS(load_sample(f.path, SampleFormat::csv_rows), DataError);
  }
  SUBCASE("ragged rows are a format error") {
    TempFile f("ragged.csv", "1,2,3\n4,5\n7,8,9\n1,1,1\n2,2,2\n3,3,3\n");
    CHECK_THROWS_AS(load_sample(f.path, SampleFormat::csv_rows), FormatError);
  }
  SUBCASE("labels and header are detected") {
    TempFile f("labeled.csv",
               "date,t0,t1,t2\n"
               "d1,1,2,3\nd2,4,5,6\nd3,7,8,9\nd4,1,1,1\nd5,2,2,2\n");
    const FunctionalSample sample =
        load_sample(f.path, SampleFormat::csv_rows);
    CHECK(sample.n_obs == 5);
    REQUIRE(sample.labels.size() == 5);
    CHECK(sample.labels[0] == "d1");
    CHECK(sample.values(0, 2) == 3.0);
  }
}

TEST_CASE("json round trip preserves grid metadata and labels") {
  FunctionalSample sample = make_sample(Eigen::MatrixXd::Random(6, 16), 2);
  sample.grid.spacing[0] = 0.25;
  sample.labels = {"a", "b", "c", "d", "e", "f"};
  save_sample_json(sample, "fcpd_test_roundtrip.json");
  const FunctionalSample loaded =
      load_sample("fcpd_test_roundtrip.json", SampleFormat::json);
  std::remove("fcpd_test_roundtrip.json");

  CHECK(loaded.n_obs == 6);
  CHECK(loaded.n_components == 2);
  CHECK(loaded.grid.spacing[0] == 0.25);
  CHECK(loaded.labels == sample.labels);
  CHECK((loaded.values - sample.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("inner product quadrature") {
  const Grid grid = Grid::uniform01(128);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(128);

  CHECK(inner_product(ones, ones, grid) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(inner_product(2 * ones, 3 * ones, grid) == doctest::Approx(6.0));

  SUBCASE("orthogonality of sin and cos") {
    const Grid g256 = Grid::uniform01(256);
    Eigen::VectorXd sine(256), cosine(256);
    for (int j = 0; j < 256; ++j) {
      const double t = j / 256.0;
      sine[j] = std::sin(2 * M_PI * t);
      cosine[j] = std::cos(2 * M_PI * t);
    }
    CHECK(std::abs(inner_product(sine, cosine, g256)) < 1e-6);
  }

  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(inner_product(ones, Eigen::VectorXd::Ones(64), grid),
                    DataError);
  }

  SUBCASE("linearity and positivity") {
    CounterRng rng(7);
    Eigen::VectorXd x(128), y(128), z(128);
    for (int j = 0; j < 128; ++j) {
      x[j] = rng.normal();
      y[j] = rng.normal();
      z[j] = rng.normal();
    }
    const double lhs = inner_product(2.5 * x + 0.5 * y, z, grid);
    const double rhs =
        2.5 * inner_product(x, z, grid) + 0.5 * inner_product(y, z, grid);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(inner_product(x, x, grid) >= 0.0);
  }
}

TEST_CASE("cache construction") {
  SUBCASE("all-zero sample") {
    const FunctionalSample sample = make_sample(Eigen::MatrixXd::Zero(6, 8));
    const InnerProductCache cache = build_cache(sample);
    CHECK(cache.prefix_sums.cwiseAbs().maxCoeff() == 0.0);
    CHECK(cache.prefix_sq_norms.cwiseAbs().maxCoeff() == 0.0);
    CHECK(cache.squared_norms.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("constant-one curves have unit squared norm") {
    const FunctionalSample sample = make_sample(Eigen::MatrixXd::Ones(3, 16));
    const InnerProductCache cache = build_cache(sample);
    for (int k = 0; k <= 3; ++k)
      CHECK(cache.prefix_sq_norms[k] ==
            doctest::Approx(static_cast<double>(k)).epsilon(1e-15));
  }

  SUBCASE("prefix sums match a direct same-order summation bitwise") {
    CounterRng rng(11);
    Eigen::MatrixXd values(12, 10);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 10; ++j) values(i, j) = rng.normal();
    const FunctionalSample sample = make_sample(values);
    const InnerProductCache cache = build_cache(sample);

    Eigen::RowVectorXd direct = Eigen::RowVectorXd::Zero(10);
    for (int i = 0; i < 12; ++i) direct += values.row(i);
    CHECK((cache.prefix_sums.row(12) - direct).cwiseAbs().maxCoeff() == 0.0);

    // Row differences recover each curve (dyadic data makes it exact).
    Eigen::MatrixXd dyadic(6, 4);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 4; ++j)
        dyadic(i, j) = static_cast<double>((i * 7 + j * 3) % 9) * 0.5;
    const InnerProductCache c2 = build_cache(make_sample(dyadic));
    for (int k = 0; k < 6; ++k)
      CHECK((c2.prefix_sums.row(k + 1) - c2.prefix_sums.row(k) -
             dyadic.row(k))
                .cwiseAbs()
                .maxCoeff() == 0.0);

    // prefix_sq_norms is nondecreasing.
    for (int k = 0; k < 12; ++k)
      CHECK(cache.prefix_sq_norms[k + 1] >= cache.prefix_sq_norms[k]);
  }

  SUBCASE("bitwise reproducible") {
    const FunctionalSample sample = make_sample(Eigen::MatrixXd::Random(9, 7));
    const InnerProductCache a = build_cache(sample);
    const InnerProductCache b = build_cache(sample);
    CHECK((a.prefix_sums - b.prefix_sums).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.prefix_sq_norms - b.prefix_sq_norms).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("descriptive statistics") {
  SUBCASE("gaussian noise has skewness 0 and kurtosis 3") {
    CounterRng rng(2024);
    Eigen::MatrixXd values(5000, 16);
    for (int i = 0; i < 5000; ++i)
      for (int j = 0; j < 16; ++j) values(i, j) = rng.normal();
    const DescriptiveStats stats = descriptive_stats(make_sample(values));
    CHECK(std::abs(stats.skewness) < 0.1);
    CHECK(stats.kurtosis == doctest::Approx(3.0).epsilon(0.05));
    CHECK(stats.sigma2 == doctest::Approx(1.0).epsilon(0.05));
  }

  SUBCASE("symmetric pairing gives exactly zero skewness") {
    CounterRng rng(3);
    Eigen::MatrixXd values(6, 8);
    for (int p = 0; p < 3; ++p) {
      for (int j = 0; j < 8; ++j) {
        const double v = rng.normal();
        values(2 * p, j) = v;
        values(2 * p + 1, j) = -v;
      }
    }
    const DescriptiveStats stats = descriptive_stats(make_sample(values));
    CHECK(stats.skewness == 0.0);
  }

  SUBCASE("constant curves are degenerate") {
    CHECK_THROWS_AS(descriptive_stats(make_sample(Eigen::MatrixXd::Ones(5, 8))),
                    DegenerateError);
    // sigma2 is still available on its own.
    CHECK(sample_sigma2(make_sample(Eigen::MatrixXd::Ones(5, 8))) == 0.0);
  }

  SUBCASE("multivariate input is rejected") {
    CHECK_THROWS_AS(
        descriptive_stats(make_sample(Eigen::MatrixXd::Random(8, 12), 2)),
        DataError);
  }
}
