#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "fcpd/grid.hpp"

namespace fcpd {

// A discretized functional time series: N observed curves, each an
// r-vector-valued function sampled on a common grid of S points.
// Row i of `values` is curve i flattened component-major, i.e. the S
// samples of component 0 followed by the S samples of component 1, etc.
// Immutable after construction; safe to share across workers.
struct FunctionalSample {
  std::size_t n_obs = 0;         // N
  std::size_t n_components = 1;  // r
  Grid grid;
  Eigen::MatrixXd values;  // N x (r*S)
  std::vector<std::string> labels;  // optional, size 0 or N

  std::size_t flat_dim() const { return n_components * grid.total_points(); }

  // Validates shapes, finiteness and N >= 5; throws DataError.
  void validate() const;
};

// Riemann quadrature inner product of two flattened curves:
// w * sum_j x[j] * y[j]. Throws DataError on a shape mismatch.
double inner_product(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y,
                     const Grid& grid);

// Precomputed sums that make the energy statistic O(S) per split:
// prefix sums of the curves, and quadrature squared norms with their
// compensated prefix sums.
struct InnerProductCache {
  std::size_t n_obs = 0;
  std::size_t n_components = 1;
  double quad_weight = 0.0;
  Eigen::VectorXd squared_norms;   // N, ||X_i||^2
  Eigen::MatrixXd prefix_sums;     // (N+1) x (r*S), row k = sum of curves < k
  Eigen::VectorXd prefix_sq_norms; // N+1, running sum of ||X_i||^2
};

InnerProductCache build_cache(const FunctionalSample& sample);

// Quadrature variance N^-1 sum ||X_i - mu_hat||^2. Works for any r.
double sample_sigma2(const FunctionalSample& sample);

// Pointwise-standardized moment summaries, averaged over the grid.
struct DescriptiveStats {
  double sigma2 = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

// Requires r == 1 and N >= 3 (DataError otherwise). Throws
// DegenerateError if the pointwise variance vanishes anywhere; sigma2
// alone is still available through sample_sigma2().
DescriptiveStats descriptive_stats(const FunctionalSample& sample);

// Sample restricted to observations [first, last) in 0-based row order.
FunctionalSample subsample(const FunctionalSample& sample, std::size_t first,
                           std::size_t last);

}  // namespace fcpd
