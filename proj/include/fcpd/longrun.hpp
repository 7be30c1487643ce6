#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>

#include "fcpd/sample.hpp"

namespace fcpd {

// Lag-weighting kernel. All three choices satisfy K(0)=1, evenness,
// compact support [-c, c] and Lipschitz continuity; kernels without
// compact support are not representable here on purpose.
struct KernelSpec {
  enum class Name { parzen, bartlett, flat_top_truncated };
  Name name = Name::parzen;
  double support_c = 1.0;

  double operator()(double x) const;
};

enum class Demeaning { full_sample, split_at_khat };

// Discretized long-run covariance kernel: matrix(a, b) estimates
// D(t_a, t_b) on the flattened (r*S) grid, to be integrated with the
// quadrature weight. sigma0_sq is the companion variance estimate
// N^-1 sum ||X_i - mean||^2.
struct LongRunCovarianceEstimate {
  Eigen::MatrixXd matrix;  // (r*S) x (r*S), symmetric
  double quad_weight = 0.0;
  double bandwidth = 0.0;
  Demeaning demeaning = Demeaning::full_sample;
  double sigma0_sq = 0.0;
};

// Lag-l autocovariance matrix (N-l)^-1 sum_j xbar_j xbar_{j+l}' on the
// grid; returns the zero matrix for l >= N. Under split demeaning the
// mean is estimated separately before and after k_hat.
Eigen::MatrixXd autocovariance(const FunctionalSample& sample, std::size_t lag,
                               Demeaning demeaning = Demeaning::full_sample,
                               std::optional<std::size_t> k_hat = std::nullopt);

// Plug-in bandwidth h = 2.6614 * (4 rho^2 / (1-rho)^4 * n)^(1/5),
// clamped to [1, n/4] (the Parzen-kernel constant).
double andrews_h_from_rho(double rho, std::size_t n);

// Andrews-style AR(1) plug-in bandwidth, with the AR coefficient pooled
// across the grid through inner products:
//   rho = sum <Xbar_i, Xbar_{i-1}> / sum ||Xbar_{i-1}||^2.
// Requires N >= 10; a zero denominator yields h = 1.
double andrews_bandwidth(const FunctionalSample& sample);

// Weighted sum of autocovariances D = gamma_0 + sum K(l/h)(gamma_l +
// gamma_l'), truncated at floor(c*h) and symmetrized. With no bandwidth
// supplied the Andrews rule is used.
LongRunCovarianceEstimate estimate_longrun(
    const FunctionalSample& sample, const KernelSpec& kernel = {},
    std::optional<double> bandwidth = std::nullopt,
    Demeaning demeaning = Demeaning::full_sample,
    std::optional<std::size_t> k_hat = std::nullopt);

// Debug dump: one comment line with grid metadata, then the matrix rows
// as CSV.
void save_covariance_csv(const LongRunCovarianceEstimate& cov,
                         const std::string& path);

}  // namespace fcpd
