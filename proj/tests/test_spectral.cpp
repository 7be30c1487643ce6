#include <doctest.h>

#include <cmath>

#include "fcpd/errors.hpp"
#include "fcpd/rng.hpp"
#include "fcpd/spectral.hpp"

using namespace fcpd;

namespace {

LongRunCovarianceEstimate wrap(Eigen::MatrixXd matrix, double w) {
  LongRunCovarianceEstimate cov;
  cov.matrix = std::move(matrix);
  cov.quad_weight = w;
  cov.bandwidth = 1.0;
  return cov;
}

}  // namespace

TEST_CASE("rank-1 kernel has a single unit eigenvalue") {
  const int s = 32;
  const double w = 1.0 / s;
  // phi normalized so that w * sum phi^2 = 1.
  Eigen::VectorXd phi(s);
  for (int j = 0; j < s; ++j)
    phi[j] = std::sqrt(2.0) * std::sin(2 * M_PI * (j + 0.5) / s);
  const double norm = std::sqrt(w * phi.squaredNorm());
  phi /= norm;

  const SpectralModel model =
      operator_eigenvalues(wrap(phi * phi.transpose(), w), true);
  CHECK(model.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (int i = 1; i < s; ++i)
    CHECK(std::abs(model.eigenvalues[i]) < 1e-10);

  // The leading eigenvector is w-normalized and matches phi up to sign.
  const Eigen::VectorXd lead = model.eigenvectors.col(0);
  CHECK(w * lead.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
  const double overlap = std::abs(w * lead.dot(phi));
  CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("zero matrix yields all-zero eigenvalues") {
  const SpectralModel model =
      operator_eigenvalues(wrap(Eigen::MatrixXd::Zero(8, 8), 0.125));
  CHECK(model.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(select_m(model, 0.95), DegenerateError);
}

TEST_CASE("asymmetric and oversized inputs are rejected") {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Random(6, 6);
  bad(0, 5) += 1.0;
  CHECK_THROWS_AS(operator_eigenvalues(wrap(std::move(bad), 1.0)), DataError);
}

TEST_CASE("cpv truncation") {
  SpectralModel model;
  model.eigenvalues = Eigen::Vector3d(0.6, 0.3, 0.1);
  CHECK(select_m(model, 0.85) == 2);
  CHECK(select_m(model, 0.6) == 1);
  CHECK(select_m(model, 1.0) == 3);

  SpectralModel single;
  single.eigenvalues = Eigen::Vector3d(0.5, 0.0, 0.0);
  CHECK(select_m(single, 0.25) == 1);
  CHECK(select_m(single, 1.0) == 1);
  CHECK_THROWS_AS(select_m(single, 1.5), ConfigError);
}

TEST_CASE("trace preservation and scale equivariance") {
  CounterRng rng(1234);
  const int s = 24;
  Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(
      s, s, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  const double w = 1.0 / s;

  const SpectralModel model = operator_eigenvalues(wrap(sym, w));
  CHECK(model.raw_trace ==
        doctest::Approx(w * sym.trace()).epsilon(1e-8));

  // Scaling the matrix scales every eigenvalue; m_hat is unchanged.
  const Eigen::MatrixXd psd = a * a.transpose();
  const SpectralModel base = spectral_model(wrap(psd, w), 0.95);
  const SpectralModel scaled = spectral_model(wrap(3.0 * psd, w), 0.95);
  for (int i = 0; i < s; ++i)
    CHECK(scaled.eigenvalues[i] ==
          doctest::Approx(3.0 * base.eigenvalues[i]).epsilon(1e-9));
  CHECK(scaled.m_hat == base.m_hat);
}

TEST_CASE("spectral reconstruction of a PSD kernel") {
  CounterRng rng(77);
  const int s = 16;
  Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(
      s, s, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
  const Eigen::MatrixXd psd = a * a.transpose();
  const double w = 1.0 / s;

  const SpectralModel model = operator_eigenvalues(wrap(psd, w), true);
  // Kernel values rebuild as sum_l lambda_l v_l(t) v_l(s).
  Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(s, s);
  for (int l = 0; l < s; ++l)
    rebuilt += model.eigenvalues[l] * model.eigenvectors.col(l) *
               model.eigenvectors.col(l).transpose();
  CHECK((rebuilt - psd).norm() / psd.norm() < 1e-6);
}

TEST_CASE("eigenvalues are sorted and clipped") {
  Eigen::MatrixXd indef(3, 3);
  indef << 1.0, 0.0, 0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 0.25;
  const SpectralModel model = operator_eigenvalues(wrap(indef, 1.0));
  CHECK(model.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(model.eigenvalues[1] == doctest::Approx(0.25));
  CHECK(model.eigenvalues[2] == 0.0);  // -0.5 clipped
  CHECK(model.raw_trace == doctest::Approx(0.75));
}
