#include "fcpd/charfn.hpp"

#include <cmath>

#include "fcpd/errors.hpp"
#include "fcpd/spectral.hpp"

namespace fcpd {

PcaProjection estimate_pca(const FunctionalSample& sample, std::size_t d,
                           bool centered) {
  if (sample.n_components != 1)
    throw DataError("PCA projection expects scalar curves");
  if (d < 1) throw ConfigError("d must be positive");
  if (sample.n_obs < d + 2)
    throw DataError("need at least d + 2 observations");

  const double w = sample.grid.weight();
  Eigen::MatrixXd y = sample.values;
  y.rowwise() -= Eigen::RowVectorXd(y.colwise().mean());

  // C_hat(t,s) from the demeaned curves; eigenpairs via the operator
  // solver so the eigenfunctions come back quadrature-normalized.
  LongRunCovarianceEstimate cov;
  cov.matrix = y.transpose() * y / static_cast<double>(sample.n_obs);
  cov.quad_weight = w;
  const SpectralModel model = operator_eigenvalues(cov, true);

  std::size_t positive = 0;
  while (positive < static_cast<std::size_t>(model.eigenvalues.size()) &&
         model.eigenvalues[static_cast<Eigen::Index>(positive)] > 0.0)
    ++positive;
  if (d > positive)
    throw ConfigError("d exceeds the number of positive eigenvalues (" +
                      std::to_string(positive) + ")");

  PcaProjection projection;
  projection.d = d;
  projection.psi_hat =
      model.eigenvectors.leftCols(static_cast<Eigen::Index>(d));
  projection.chi_hat =
      model.eigenvalues.head(static_cast<Eigen::Index>(d));
  const Eigen::MatrixXd& curves = centered ? y : sample.values;
  projection.xi_hat = w * curves * projection.psi_hat;
  return projection;
}

FunctionalSample char_transform(const PcaProjection& projection,
                                std::size_t points_per_axis) {
  if (points_per_axis < 8)
    throw ConfigError("characteristic-function grid needs >= 8 points");
  if (projection.d > 3)
    throw ConfigError("tensor grids are capped at d = 3");

  const std::size_t d = projection.d;
  const auto n = projection.xi_hat.rows();
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= points_per_axis;

  FunctionalSample out;
  out.n_obs = static_cast<std::size_t>(n);
  out.n_components = 2;
  out.grid.dim = d;
  out.grid.points_per_axis.assign(d, points_per_axis);
  out.grid.spacing.assign(d, 2.0 / static_cast<double>(points_per_axis));
  out.values.resize(n, static_cast<Eigen::Index>(2 * total));

  // Row-major tensor grid over [-1,1]^d; axis j's coordinate at cell
  // index idx is -1 + (component digit) * 2/points.
  const double step = 2.0 / static_cast<double>(points_per_axis);
  Eigen::MatrixXd grid_points(total, d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t j = d; j-- > 0;) {
      const std::size_t digit = rest % points_per_axis;
      rest /= points_per_axis;
      grid_points(static_cast<Eigen::Index>(idx),
                  static_cast<Eigen::Index>(j)) =
          -1.0 + static_cast<double>(digit) * step;
    }
  }

  // phase(i, idx) = sum_j t_j xi_{j,i}; Re = cos, Im = sin.
  const Eigen::MatrixXd phase = projection.xi_hat * grid_points.transpose();
  out.values.leftCols(static_cast<Eigen::Index>(total)) =
      phase.array().cos();
  out.values.rightCols(static_cast<Eigen::Index>(total)) =
      phase.array().sin();
  return out;
}

DetectionResult dist_change_test(const FunctionalSample& sample,
                                 const DistTestConfig& config) {
  const PcaProjection projection =
      estimate_pca(sample, config.d, config.centered_scores);
  const FunctionalSample transformed =
      char_transform(projection, config.char_grid);
  return mean_change_test(transformed, config.detect);
}

}  // namespace fcpd
