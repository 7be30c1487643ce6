#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fcpd/energy.hpp"
#include "fcpd/spectral.hpp"

namespace fcpd {

struct NullSimConfig {
  std::size_t n_grid = 0;   // evaluation points; callers default this to N
  std::size_t n_reps = 500;
  double alpha_weight = 0.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Empirical law of the weighted sup statistic under the null, from
// Monte Carlo replications of the limit process.
struct CriticalValueTable {
  std::vector<double> levels;    // descending significance, e.g. .10 .05 .01
  std::vector<double> critvals;  // matching upper-tail critical values
  std::vector<double> sup_samples;  // sorted ascending

  // Upper-tail critical value at level a: the ceil((1-a)*n)-th order
  // statistic of the simulated sups.
  double critical_value(double level) const;
};

// Simulates sup_u |sum_l lambda_l B_l(u)^2 - sigma0^2 u(1-u)| /
// (u(1-u))^alpha on the interior grid u_j = j/n_grid, using m_hat
// independent Brownian bridges per replication. Bridges are cumulative
// Gaussian partial sums with the terminal correction, one counter-based
// stream per replication, so results do not depend on thread count.
CriticalValueTable simulate_delta_sup(const SpectralModel& model,
                                      const NullSimConfig& config);

// Same simulation evaluated for several weight exponents at once,
// reusing each replication's bridge paths; config.alpha_weight is
// ignored. Element i matches alphas[i].
std::vector<CriticalValueTable> simulate_delta_sup_multi(
    const SpectralModel& model, const NullSimConfig& config,
    const std::vector<double>& alphas);

// Right-tail p-value with an add-one correction: never exactly zero.
double p_value(const CriticalValueTable& table, double observed);

struct XiSimConfig {
  double u_max = 50.0;  // window half-width in sigma^2/||delta||^2 units
  double u_step = 0.01;
  std::size_t n_reps = 10000;
  std::uint64_t seed = 0;
};

// Law of the scaled breakdate error: smallest argmax over u of
// W~(u) - |u| m_alpha(u), a two-sided Wiener process with piecewise
// constant drift determined by (alpha, theta).
struct XiAlphaModel {
  double alpha = 0.0;
  double theta = 0.5;
  double m_alpha_left = 0.0;
  double m_alpha_right = 0.0;
  std::vector<double> samples;  // sorted ascending
  std::size_t window_exceedances = 0;  // argmax hit the +-u_max boundary

  double quantile(double p) const;
};

double m_alpha_drift_left(double alpha, double theta);
double m_alpha_drift_right(double alpha, double theta);

XiAlphaModel simulate_xi_alpha(double alpha, double theta,
                               const XiSimConfig& config);

// Same law with explicit drift levels on each side; the quantiles
// widen as the drifts shrink.
XiAlphaModel simulate_xi_drifted(double m_left, double m_right,
                                 const XiSimConfig& config);

// Confidence interval for the break index at the given level:
// [k_hat - q_{1-a/2} * scale, k_hat - q_{a/2} * scale] with
// scale = sigma2_hat / delta_norm^2, rounded outward and clamped to
// [1, N]. Throws DegenerateError when the estimate cannot support one.
std::pair<std::size_t, std::size_t> breakdate_ci(
    const BreakdateEstimate& estimate, const XiAlphaModel& xi, double level);

// CSV export with columns (level, critical_value); optionally all sup
// samples as a second file.
void save_critical_values_csv(const CriticalValueTable& table,
                              const std::string& path);
void save_sup_samples_csv(const CriticalValueTable& table,
                          const std::string& path);

}  // namespace fcpd
