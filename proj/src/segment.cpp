#include "fcpd/segment.hpp"

#include <algorithm>
#include <cmath>

#include "fcpd/errors.hpp"

namespace fcpd {

double threshold_value(const ThresholdRule& rule, std::size_t segment_length,
                       double c_a) {
  if (segment_length <= 4)
    throw DomainError("threshold needs a segment longer than 4");
  const double n = static_cast<double>(segment_length);
  switch (rule.kind) {
    case ThresholdRule::Kind::fixed:
      return rule.fixed_value;
    case ThresholdRule::Kind::cv_sqrt_log:
      return c_a * std::sqrt(std::log(n));
    case ThresholdRule::Kind::cv_loglog:
      if (segment_length < 16)
        throw ConfigError("cv_loglog rule needs n >= 16");
      return c_a * std::log(std::log(n));
    case ThresholdRule::Kind::cv_log:
      return c_a * std::log(n);
  }
  throw ConfigError("unknown threshold rule");
}

namespace {

// Critical value of a window, simulated from the spectral model of
// either the whole sample or the window itself.
class CritvalProvider {
 public:
  CritvalProvider(const FunctionalSample& sample,
                  const SegmentationConfig& config)
      : sample_(sample), config_(config) {
    if (config.cov_policy == CovariancePolicy::global) {
      try {
        global_model_ = segment_model(0, sample.n_obs);
      } catch (const DegenerateError&) {
        global_degenerate_ = true;
      }
    }
  }

  double operator()(std::size_t l, std::size_t u) const {
    SpectralModel model;
    if (config_.cov_policy == CovariancePolicy::global) {
      if (global_degenerate_) return 0.0;
      model = global_model_;
    } else {
      try {
        model = segment_model(l, u);
      } catch (const DegenerateError&) {
        return 0.0;  // no variation in the window: the null law is zero
      }
    }
    NullSimConfig sim;
    sim.n_grid = std::max<std::size_t>(u - l, 8);
    sim.n_reps = config_.null_reps;
    sim.alpha_weight = config_.alpha;
    sim.seed = config_.seed;
    sim.threads = config_.threads;
    const CriticalValueTable table = simulate_delta_sup(model, sim);
    return table.critical_value(config_.rule.level);
  }

 private:
  SpectralModel segment_model(std::size_t l, std::size_t u) const {
    const FunctionalSample segment = subsample(sample_, l, u);
    std::optional<double> bandwidth = config_.bandwidth;
    if (!bandwidth && segment.n_obs < 10) bandwidth = 1.0;
    const LongRunCovarianceEstimate cov =
        estimate_longrun(segment, config_.kernel, bandwidth);
    return spectral_model(cov, config_.cpv);
  }

  const FunctionalSample& sample_;
  const SegmentationConfig& config_;
  SpectralModel global_model_;
  bool global_degenerate_ = false;
};

struct Walker {
  const InnerProductCache& cache;
  const SegmentationConfig& config;
  const CritvalProvider& critval;
  SegmentationResult& result;

  void visit(std::size_t l, std::size_t u) {
    if (u - l <= 4) return;
    if (config.min_segment > 0 && u - l < config.min_segment) return;

    const WeightedEnergyProcess process =
        weighted_process(cache, l, u, config.alpha);
    double c_a = 0.0;
    if (config.rule.kind != ThresholdRule::Kind::fixed) c_a = critval(l, u);
    const double tau = threshold_value(config.rule, u - l, c_a);

    SegmentTraceEntry entry;
    entry.lower = l;
    entry.upper = u;
    entry.max_stat = process.max_value;
    entry.k_hat = process.argmax_k;
    entry.tau = tau;
    entry.rejected = process.max_value > tau;
    result.trace.push_back(entry);

    if (!entry.rejected) return;
    result.changepoints.push_back(process.argmax_k);
    visit(l, process.argmax_k);
    visit(process.argmax_k, u);
  }
};

SegmentSummary summarize_segment(const FunctionalSample& sample,
                                 std::size_t first, std::size_t last) {
  SegmentSummary summary;
  summary.start = first + 1;
  summary.end = last;
  const FunctionalSample part = subsample(sample, first, last);
  const Eigen::RowVectorXd mean = part.values.colwise().mean();
  summary.mean_curve.assign(mean.data(), mean.data() + mean.size());
  summary.sigma2 = sample_sigma2(part);
  if (sample.n_components == 1 && part.n_obs >= 3) {
    try {
      const DescriptiveStats stats = descriptive_stats(part);
      summary.skewness = stats.skewness;
      summary.kurtosis = stats.kurtosis;
    } catch (const DegenerateError&) {
      // constant segment: moments undefined, sigma2 already recorded
    }
  }
  return summary;
}

}  // namespace

SegmentationResult binary_segment(const FunctionalSample& sample,
                                  const SegmentationConfig& config,
                                  const FunctionalSample* stats_sample) {
  sample.validate();
  if (!(config.alpha >= 0.0 && config.alpha < 1.0))
    throw ConfigError("alpha must lie in [0, 1)");
  if (config.alpha == 0.0 && !config.allow_alpha_zero)
    throw ConfigError(
        "segmentation needs alpha > 0; set allow_alpha_zero to override");

  const InnerProductCache cache = build_cache(sample);
  const CritvalProvider critval(sample, config);

  SegmentationResult result;
  Walker walker{cache, config, critval, result};
  walker.visit(0, sample.n_obs);

  std::sort(result.changepoints.begin(), result.changepoints.end());
  result.r_hat = result.changepoints.size();

  const FunctionalSample& stats_src = stats_sample ? *stats_sample : sample;
  std::size_t start = 0;
  for (std::size_t cp : result.changepoints) {
    result.segments.push_back(summarize_segment(stats_src, start, cp));
    start = cp;
  }
  result.segments.push_back(
      summarize_segment(stats_src, start, stats_src.n_obs));
  return result;
}

}  // namespace fcpd
