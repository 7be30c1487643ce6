#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fcpd/energy.hpp"
#include "fcpd/longrun.hpp"
#include "fcpd/null_dist.hpp"
#include "fcpd/spectral.hpp"

namespace fcpd {

struct DetectConfig {
  double alpha = 0.5;                  // weight exponent in [0, 1)
  KernelSpec kernel{};                 // Parzen by default
  std::optional<double> bandwidth;     // override; otherwise Andrews rule
  Demeaning demeaning = Demeaning::full_sample;
  double cpv = 0.95;
  std::size_t null_reps = 500;
  std::optional<std::size_t> null_grid;  // defaults to the sample size
  double level = 0.05;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct DetectionResult {
  double statistic = 0.0;       // T_N = max_k |weighted process|
  double alpha = 0.0;
  double bandwidth = 0.0;
  double sigma0_sq = 0.0;
  std::size_t m_hat = 0;
  std::vector<double> eigenvalue_head;  // leading m_hat eigenvalues
  std::vector<double> levels;           // {0.10, 0.05, 0.01}
  std::vector<double> critical_values;  // matching critvals
  double critical_value = 0.0;          // at the configured level
  double p_value = 1.0;
  bool reject = false;
  std::size_t k_hat = 0;
  double theta_hat = 0.0;
  std::optional<std::size_t> ci_lower, ci_upper;  // filled by with_ci
};

// Full mean-change test: weighted energy process -> long-run covariance
// -> operator spectrum -> simulated critical values. Split demeaning,
// when selected, recomputes the covariance around the estimated break.
DetectionResult mean_change_test(const FunctionalSample& sample,
                                 const DetectConfig& config);

// Extends a detection result with a breakdate confidence interval at
// the given level. Throws DegenerateError when the break size estimate
// is zero.
DetectionResult with_ci(const FunctionalSample& sample,
                        const DetectConfig& config, double ci_level,
                        const XiSimConfig& xi_config);

}  // namespace fcpd
