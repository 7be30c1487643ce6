#include "fcpd/detect.hpp"

#include <algorithm>

#include "fcpd/errors.hpp"

namespace fcpd {

namespace {

struct PipelineParts {
  WeightedEnergyProcess process;
  LongRunCovarianceEstimate cov;
  SpectralModel model;
  CriticalValueTable table;
};

PipelineParts run_pipeline(const FunctionalSample& sample,
                           const DetectConfig& config) {
  sample.validate();
  const InnerProductCache cache = build_cache(sample);

  PipelineParts parts;
  parts.process = weighted_process(cache, 0, sample.n_obs, config.alpha);

  std::optional<std::size_t> split_k;
  if (config.demeaning == Demeaning::split_at_khat)
    split_k =
        std::clamp<std::size_t>(parts.process.argmax_k, 2, sample.n_obs - 2);
  parts.cov = estimate_longrun(sample, config.kernel, config.bandwidth,
                               config.demeaning, split_k);
  parts.model = spectral_model(parts.cov, config.cpv);

  NullSimConfig sim;
  sim.n_grid = std::max<std::size_t>(
      config.null_grid.value_or(sample.n_obs), 8);
  sim.n_reps = config.null_reps;
  sim.alpha_weight = config.alpha;
  sim.seed = config.seed;
  sim.threads = config.threads;
  parts.table = simulate_delta_sup(parts.model, sim);
  return parts;
}

DetectionResult summarize(const PipelineParts& parts,
                          const DetectConfig& config, std::size_t n_obs) {
  DetectionResult result;
  result.statistic = parts.process.max_value;
  result.alpha = config.alpha;
  result.bandwidth = parts.cov.bandwidth;
  result.sigma0_sq = parts.cov.sigma0_sq;
  result.m_hat = parts.model.m_hat;
  result.eigenvalue_head.assign(
      parts.model.eigenvalues.data(),
      parts.model.eigenvalues.data() +
          static_cast<Eigen::Index>(parts.model.m_hat));
  result.levels = parts.table.levels;
  result.critical_values = parts.table.critvals;
  result.critical_value = parts.table.critical_value(config.level);
  result.p_value = p_value(parts.table, result.statistic);
  result.reject = result.statistic > result.critical_value;
  result.k_hat = parts.process.argmax_k;
  result.theta_hat =
      static_cast<double>(parts.process.argmax_k) / static_cast<double>(n_obs);
  return result;
}

}  // namespace

DetectionResult mean_change_test(const FunctionalSample& sample,
                                 const DetectConfig& config) {
  return summarize(run_pipeline(sample, config), config, sample.n_obs);
}

DetectionResult with_ci(const FunctionalSample& sample,
                        const DetectConfig& config, double ci_level,
                        const XiSimConfig& xi_config) {
  const PipelineParts parts = run_pipeline(sample, config);
  DetectionResult result = summarize(parts, config, sample.n_obs);

  const BreakdateEstimate estimate =
      estimate_breakdate(sample, parts.process, parts.cov);
  const XiAlphaModel xi =
      simulate_xi_alpha(config.alpha, estimate.theta_hat, xi_config);
  const auto [lo, hi] = breakdate_ci(estimate, xi, ci_level);
  result.ci_lower = lo;
  result.ci_upper = hi;
  return result;
}

}  // namespace fcpd
