#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "fcpd/sample.hpp"

namespace fcpd {

struct LongRunCovarianceEstimate;  // longrun.hpp

// Empirical energy statistic of the window (l, u] split at k, computed
// by literal summation over all pairs of observations. Blocks are
// {l+1..k} and {k+1..u} in 1-based observation numbering; the full
// sample is l = 0, u = N. O((u-l)^2 * S) time -- this is the
// verification oracle for the fast path.
//
// Requires l+2 <= k <= u-2 and u-l > 4 (DomainError otherwise).
double v_statistic_pairwise(const FunctionalSample& sample, std::size_t l,
                            std::size_t u, std::size_t k);

// Same value through the prefix-sum decomposition of the pairwise sums;
// O(S) per k once the cache is built. Agrees with the oracle to 1e-10
// relative error.
double v_statistic_fast(const InnerProductCache& cache, std::size_t l,
                        std::size_t u, std::size_t k);

// The weighted energy process of a window: for each admissible split k,
//   0.5 * (u-l) * ((k-l)(u-k)/(u-l)^2)^(2-alpha) * V(k).
// Values keep their sign; the max statistic and the argmax are taken
// over absolute values, ties broken to the smallest k.
struct WeightedEnergyProcess {
  double alpha = 0.0;
  std::size_t lower = 0;      // l
  std::size_t upper = 0;      // u
  std::vector<double> values; // index 0 corresponds to k = l+2
  std::size_t argmax_k = 0;   // smallest maximizer of |value|
  double max_value = 0.0;     // max_k |value|

  std::size_t first_k() const { return lower + 2; }
  std::size_t last_k() const { return upper - 2; }
  double value_at(std::size_t k) const { return values[k - first_k()]; }
};

// The multiplier applied to V at split k:
// 0.5 * (u-l) * ((k-l)(u-k)/(u-l)^2)^(2-alpha).
double process_weight(std::size_t l, std::size_t u, std::size_t k,
                      double alpha);

// Requires 0 <= alpha < 1 (ConfigError) and u-l > 4 (DomainError).
WeightedEnergyProcess weighted_process(const InnerProductCache& cache,
                                       std::size_t l, std::size_t u,
                                       double alpha);

// CSV export with columns (k, u, weighted_value); u is the split
// fraction (k-l)/(u-l) within the analyzed window.
void save_process_csv(const WeightedEnergyProcess& process,
                      const std::string& path);

struct BreakdateEstimate {
  std::size_t k_hat = 0;
  std::size_t n_obs = 0;
  double theta_hat = 0.0;      // k_hat / N
  Eigen::VectorXd delta_hat;   // mean(1..k_hat) - mean(k_hat+1..N)
  double delta_norm = 0.0;     // quadrature L2 norm of delta_hat
  double sigma2_hat = 0.0;     // projected long-run variance
};

// Breakdate estimator from a full-sample process: k_hat = argmax, the
// mean-difference curve, and the long-run variance projected on the
// normalized break direction. Throws DegenerateError when the
// difference curve is identically zero.
BreakdateEstimate estimate_breakdate(const FunctionalSample& sample,
                                     const WeightedEnergyProcess& process,
                                     const LongRunCovarianceEstimate& cov);

}  // namespace fcpd
