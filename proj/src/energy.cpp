#include "fcpd/energy.hpp"

#include <cmath>
#include <fstream>

#include "fcpd/errors.hpp"
#include "fcpd/longrun.hpp"

namespace fcpd {

namespace {

void check_window(std::size_t l, std::size_t u, std::size_t k,
                  std::size_t n_obs) {
  if (u > n_obs || l >= u)
    throw DomainError("window (" + std::to_string(l) + ", " +
                      std::to_string(u) + "] out of range");
  if (u - l <= 4)
    throw DomainError("window length must exceed 4");
  if (k < l + 2 || k > u - 2)
    throw DomainError("split k=" + std::to_string(k) +
                      " outside [l+2, u-2]");
}

}  // namespace

double v_statistic_pairwise(const FunctionalSample& sample, std::size_t l,
                            std::size_t u, std::size_t k) {
  check_window(l, u, k, sample.n_obs);
  const double w = sample.grid.weight();
  const auto row = [&](std::size_t i) {
    return sample.values.row(static_cast<Eigen::Index>(i - 1));
  };
  const double n_left = static_cast<double>(k - l);
  const double n_right = static_cast<double>(u - k);

  double cross = 0.0;
  for (std::size_t i = l + 1; i <= k; ++i)
    for (std::size_t j = k + 1; j <= u; ++j)
      cross += (row(i) - row(j)).squaredNorm();

  double within_left = 0.0;
  for (std::size_t i = l + 1; i <= k; ++i)
    for (std::size_t j = i + 1; j <= k; ++j)
      within_left += (row(i) - row(j)).squaredNorm();

  double within_right = 0.0;
  for (std::size_t i = k + 1; i <= u; ++i)
    for (std::size_t j = i + 1; j <= u; ++j)
      within_right += (row(i) - row(j)).squaredNorm();

  // The within terms are combined symmetrically so that reversing the
  // observation order maps the value at k to the value at u+l-k bitwise.
  const double within = within_left / (n_left * (n_left - 1.0) / 2.0) +
                        within_right / (n_right * (n_right - 1.0) / 2.0);
  return w * (2.0 / (n_left * n_right) * cross - within);
}

double v_statistic_fast(const InnerProductCache& cache, std::size_t l,
                        std::size_t u, std::size_t k) {
  check_window(l, u, k, cache.n_obs);
  const double w = cache.quad_weight;
  const double kl = static_cast<double>(k - l);  // left block size
  const double uk = static_cast<double>(u - k);  // right block size

  const double sq_left = cache.prefix_sq_norms[static_cast<Eigen::Index>(k)] -
                         cache.prefix_sq_norms[static_cast<Eigen::Index>(l)];
  const double sq_right = cache.prefix_sq_norms[static_cast<Eigen::Index>(u)] -
                          cache.prefix_sq_norms[static_cast<Eigen::Index>(k)];
  const Eigen::RowVectorXd sum_left =
      cache.prefix_sums.row(static_cast<Eigen::Index>(k)) -
      cache.prefix_sums.row(static_cast<Eigen::Index>(l));
  const Eigen::RowVectorXd sum_right =
      cache.prefix_sums.row(static_cast<Eigen::Index>(u)) -
      cache.prefix_sums.row(static_cast<Eigen::Index>(k));

  const double cross_ip = w * sum_left.dot(sum_right);
  const double left_sq = w * sum_left.squaredNorm();
  const double right_sq = w * sum_right.squaredNorm();

  const double t1 =
      2.0 * sq_left / kl + 2.0 * sq_right / uk - 4.0 * cross_ip / (kl * uk);
  const double t2 =
      2.0 * sq_left / (kl - 1.0) - 2.0 * left_sq / (kl * (kl - 1.0));
  const double t3 =
      2.0 * sq_right / (uk - 1.0) - 2.0 * right_sq / (uk * (uk - 1.0));
  return t1 - t2 - t3;
}

double process_weight(std::size_t l, std::size_t u, std::size_t k,
                      double alpha) {
  const double len = static_cast<double>(u - l);
  const double frac =
      static_cast<double>(k - l) * static_cast<double>(u - k) / (len * len);
  return 0.5 * len * std::pow(frac, 2.0 - alpha);
}

WeightedEnergyProcess weighted_process(const InnerProductCache& cache,
                                       std::size_t l, std::size_t u,
                                       double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw ConfigError("alpha must lie in [0, 1)");
  if (u > cache.n_obs || l >= u || u - l <= 4)
    throw DomainError("window length must exceed 4");

  WeightedEnergyProcess process;
  process.alpha = alpha;
  process.lower = l;
  process.upper = u;

  process.values.reserve(u - l - 3);
  process.argmax_k = l + 2;
  process.max_value = -1.0;
  for (std::size_t k = l + 2; k + 2 <= u; ++k) {
    const double value =
        process_weight(l, u, k, alpha) * v_statistic_fast(cache, l, u, k);
    process.values.push_back(value);
    if (std::abs(value) > process.max_value) {
      process.max_value = std::abs(value);
      process.argmax_k = k;
    }
  }
  return process;
}

void save_process_csv(const WeightedEnergyProcess& process,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "k,u,weighted_value\n";
  const double len =
      static_cast<double>(process.upper - process.lower);
  for (std::size_t k = process.first_k(); k <= process.last_k(); ++k) {
    const double frac = static_cast<double>(k - process.lower) / len;
    out << k << ',' << frac << ',' << process.value_at(k) << '\n';
  }
}

BreakdateEstimate estimate_breakdate(const FunctionalSample& sample,
                                     const WeightedEnergyProcess& process,
                                     const LongRunCovarianceEstimate& cov) {
  if (process.lower != 0 || process.upper != sample.n_obs)
    throw DomainError("breakdate estimation needs a full-sample process");

  BreakdateEstimate est;
  est.k_hat = process.argmax_k;
  est.n_obs = sample.n_obs;
  est.theta_hat =
      static_cast<double>(est.k_hat) / static_cast<double>(sample.n_obs);

  const auto k = static_cast<Eigen::Index>(est.k_hat);
  const auto n = static_cast<Eigen::Index>(sample.n_obs);
  const Eigen::RowVectorXd pre_mean =
      sample.values.topRows(k).colwise().mean();
  const Eigen::RowVectorXd post_mean =
      sample.values.bottomRows(n - k).colwise().mean();
  est.delta_hat = (pre_mean - post_mean).transpose();

  const double w = sample.grid.weight();
  est.delta_norm = std::sqrt(w * est.delta_hat.squaredNorm());
  if (!(est.delta_norm > 0.0))
    throw DegenerateError("estimated break size is zero");

  // sigma^2 = integral integral rho(t)' D(t,s) rho(s) dt ds with
  // rho = delta / ||delta||; each integral contributes one factor w.
  const Eigen::VectorXd rho = est.delta_hat / est.delta_norm;
  est.sigma2_hat = w * w * rho.dot(cov.matrix * rho);
  return est;
}

}  // namespace fcpd
