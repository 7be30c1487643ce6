#include "fcpd/sample.hpp"

#include <cmath>

#include "fcpd/errors.hpp"

namespace fcpd {

void FunctionalSample::validate() const {
  grid.validate();
  if (n_obs < 5)
    throw DataError("need at least 5 observations, got " +
                    std::to_string(n_obs));
  if (n_components < 1) throw DataError("n_components must be positive");
  if (static_cast<std::size_t>(values.rows()) != n_obs ||
      static_cast<std::size_t>(values.cols()) != flat_dim())
    throw DataError("value matrix shape does not match N x (r*S)");
  if (!values.allFinite())
    throw DataError("sample contains non-finite values");
  if (!labels.empty() && labels.size() != n_obs)
    throw DataError("label count does not match N");
}

double inner_product(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y,
                     const Grid& grid) {
  if (x.size() != y.size())
    throw DataError("inner product operands have different lengths");
  return grid.weight() * x.dot(y);
}

InnerProductCache build_cache(const FunctionalSample& sample) {
  const auto n = static_cast<Eigen::Index>(sample.n_obs);
  const auto dim = static_cast<Eigen::Index>(sample.flat_dim());
  const double w = sample.grid.weight();

  InnerProductCache cache;
  cache.n_obs = sample.n_obs;
  cache.n_components = sample.n_components;
  cache.quad_weight = w;
  cache.squared_norms.resize(n);
  cache.prefix_sums.setZero(n + 1, dim);
  cache.prefix_sq_norms.resize(n + 1);
  cache.prefix_sq_norms[0] = 0.0;

  // Kahan-compensated running sum of the squared norms; the curve
  // prefix sums stay plain so row differences reproduce the data.
  double sq_sum = 0.0, sq_comp = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cache.squared_norms[i] = w * sample.values.row(i).squaredNorm();
    cache.prefix_sums.row(i + 1) =
        cache.prefix_sums.row(i) + sample.values.row(i);
    const double y = cache.squared_norms[i] - sq_comp;
    const double t = sq_sum + y;
    sq_comp = (t - sq_sum) - y;
    sq_sum = t;
    cache.prefix_sq_norms[i + 1] = sq_sum;
  }
  return cache;
}

double sample_sigma2(const FunctionalSample& sample) {
  const Eigen::RowVectorXd mean = sample.values.colwise().mean();
  const double w = sample.grid.weight();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sample.values.rows(); ++i)
    acc += (sample.values.row(i) - mean).squaredNorm();
  return w * acc / static_cast<double>(sample.n_obs);
}

DescriptiveStats descriptive_stats(const FunctionalSample& sample) {
  if (sample.n_components != 1)
    throw DataError("skewness/kurtosis are defined for scalar curves only");
  if (sample.n_obs < 3) throw DataError("need at least 3 observations");

  DescriptiveStats out;
  out.sigma2 = sample_sigma2(sample);

  const Eigen::Index n = sample.values.rows();
  const Eigen::Index s = sample.values.cols();
  const Eigen::RowVectorXd mean = sample.values.colwise().mean();

  double sk_acc = 0.0, ku_acc = 0.0;
  for (Eigen::Index j = 0; j < s; ++j) {
    const Eigen::ArrayXd centered =
        sample.values.col(j).array() - mean[j];
    const double m2 = centered.square().mean();
    if (!(m2 > 0.0))
      throw DegenerateError(
          "pointwise variance vanishes at a grid point; "
          "skewness/kurtosis undefined");
    const double m3 = centered.cube().mean();
    const double m4 = centered.square().square().mean();
    sk_acc += m3 / std::pow(m2, 1.5);
    ku_acc += m4 / (m2 * m2);
  }
  out.skewness = sk_acc / static_cast<double>(s);
  out.kurtosis = ku_acc / static_cast<double>(s);
  return out;
}

FunctionalSample subsample(const FunctionalSample& sample, std::size_t first,
                           std::size_t last) {
  if (first >= last || last > sample.n_obs)
    throw DomainError("invalid subsample range");
  FunctionalSample out;
  out.n_obs = last - first;
  out.n_components = sample.n_components;
  out.grid = sample.grid;
  out.values = sample.values.middleRows(static_cast<Eigen::Index>(first),
                                        static_cast<Eigen::Index>(last - first));
  if (!sample.labels.empty())
    out.labels.assign(sample.labels.begin() + static_cast<std::ptrdiff_t>(first),
                      sample.labels.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

}  // namespace fcpd
