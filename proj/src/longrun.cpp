#include "fcpd/longrun.hpp"

#include <cmath>
#include <fstream>

#include "fcpd/errors.hpp"

namespace fcpd {

double KernelSpec::operator()(double x) const {
  const double a = std::abs(x) / support_c;
  if (a > 1.0) return 0.0;
  switch (name) {
    case Name::parzen:
      if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
      return 2.0 * std::pow(1.0 - a, 3.0);
    case Name::bartlett:
      return 1.0 - a;
    case Name::flat_top_truncated:
      return a <= 0.5 ? 1.0 : 2.0 * (1.0 - a);
  }
  return 0.0;
}

namespace {

// Demeaned data matrix; split demeaning subtracts separate pre/post
// break means.
Eigen::MatrixXd demeaned(const FunctionalSample& sample, Demeaning demeaning,
                         std::optional<std::size_t> k_hat) {
  Eigen::MatrixXd x = sample.values;
  if (demeaning == Demeaning::full_sample) {
    x.rowwise() -= Eigen::RowVectorXd(x.colwise().mean());
    return x;
  }
  if (!k_hat || *k_hat < 2 || *k_hat > sample.n_obs - 2)
    throw ConfigError("split demeaning needs k_hat in [2, N-2]");
  const auto k = static_cast<Eigen::Index>(*k_hat);
  const auto n = static_cast<Eigen::Index>(sample.n_obs);
  x.topRows(k).rowwise() -=
      Eigen::RowVectorXd(x.topRows(k).colwise().mean());
  x.bottomRows(n - k).rowwise() -=
      Eigen::RowVectorXd(x.bottomRows(n - k).colwise().mean());
  return x;
}

Eigen::MatrixXd lag_cov(const Eigen::MatrixXd& x, std::size_t lag) {
  const auto n = x.rows();
  const auto l = static_cast<Eigen::Index>(lag);
  if (l >= n) return Eigen::MatrixXd::Zero(x.cols(), x.cols());
  return x.topRows(n - l).transpose() * x.bottomRows(n - l) /
         static_cast<double>(n - l);
}

}  // namespace

Eigen::MatrixXd autocovariance(const FunctionalSample& sample, std::size_t lag,
                               Demeaning demeaning,
                               std::optional<std::size_t> k_hat) {
  return lag_cov(demeaned(sample, demeaning, k_hat), lag);
}

double andrews_h_from_rho(double rho, std::size_t n) {
  const double one_minus = 1.0 - rho;
  double h;
  if (std::abs(one_minus) < 1e-12) {
    h = static_cast<double>(n);  // clamped below
  } else {
    const double factor = 4.0 * rho * rho / std::pow(one_minus, 4.0) *
                          static_cast<double>(n);
    h = 2.6614 * std::pow(std::abs(factor), 0.2);
  }
  const double upper = static_cast<double>(n) / 4.0;
  return std::min(std::max(h, 1.0), upper);
}

double andrews_bandwidth(const FunctionalSample& sample) {
  if (sample.n_obs < 10)
    throw DataError("bandwidth selection needs N >= 10");
  const Eigen::MatrixXd x =
      demeaned(sample, Demeaning::full_sample, std::nullopt);
  const auto n = x.rows();

  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    num += x.row(i).dot(x.row(i - 1));
    den += x.row(i - 1).squaredNorm();
  }
  if (!(den > 0.0)) return 1.0;
  return andrews_h_from_rho(num / den, sample.n_obs);
}

LongRunCovarianceEstimate estimate_longrun(const FunctionalSample& sample,
                                           const KernelSpec& kernel,
                                           std::optional<double> bandwidth,
                                           Demeaning demeaning,
                                           std::optional<std::size_t> k_hat) {
  LongRunCovarianceEstimate est;
  est.quad_weight = sample.grid.weight();
  est.demeaning = demeaning;
  est.bandwidth = bandwidth ? *bandwidth : andrews_bandwidth(sample);
  if (!(est.bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");

  const Eigen::MatrixXd x = demeaned(sample, demeaning, k_hat);
  est.sigma0_sq =
      est.quad_weight * x.squaredNorm() / static_cast<double>(sample.n_obs);

  Eigen::MatrixXd d = lag_cov(x, 0);
  const auto max_lag = static_cast<std::size_t>(
      std::floor(kernel.support_c * est.bandwidth));
  for (std::size_t lag = 1; lag <= max_lag && lag < sample.n_obs; ++lag) {
    const double weight = kernel(static_cast<double>(lag) / est.bandwidth);
    if (weight == 0.0) continue;
    const Eigen::MatrixXd g = lag_cov(x, lag);
    d += weight * (g + g.transpose());
  }
  est.matrix = 0.5 * (d + d.transpose());
  return est;
}

void save_covariance_csv(const LongRunCovarianceEstimate& cov,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "# dim=" << cov.matrix.rows() << " quad_weight=" << cov.quad_weight
      << " bandwidth=" << cov.bandwidth << " sigma0_sq=" << cov.sigma0_sq
      << '\n';
  for (Eigen::Index i = 0; i < cov.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.matrix.cols(); ++j) {
      if (j) out << ',';
      out << cov.matrix(i, j);
    }
    out << '\n';
  }
}

}  // namespace fcpd
