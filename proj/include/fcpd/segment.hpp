#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fcpd/detect.hpp"
#include "fcpd/sample.hpp"

namespace fcpd {

// Threshold sequence for accepting a split. The cv_* rules scale a
// simulated critical value c_a by a slowly growing function of the
// segment length, so tau -> infinity and tau/n -> 0 along n.
struct ThresholdRule {
  enum class Kind { cv_sqrt_log, cv_loglog, cv_log, fixed };
  Kind kind = Kind::cv_sqrt_log;
  double level = 0.05;        // nominal level behind c_a
  double fixed_value = 0.0;   // for Kind::fixed
};

// Pure threshold arithmetic; c_a is ignored by the fixed rule. The
// cv_loglog rule requires n >= 16 so ln ln n is positive (ConfigError).
double threshold_value(const ThresholdRule& rule, std::size_t segment_length,
                       double c_a);

enum class CovariancePolicy { per_segment, global };

struct SegmentationConfig {
  double alpha = 0.5;  // must be > 0 unless allow_alpha_zero
  ThresholdRule rule{};
  CovariancePolicy cov_policy = CovariancePolicy::per_segment;
  KernelSpec kernel{};
  std::optional<double> bandwidth;
  double cpv = 0.95;
  std::size_t null_reps = 500;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t min_segment = 0;  // extra floor on top of the u-l > 4 stop
  bool allow_alpha_zero = false;
};

struct SegmentTraceEntry {
  std::size_t lower = 0;  // l
  std::size_t upper = 0;  // u
  double max_stat = 0.0;
  std::size_t k_hat = 0;
  double tau = 0.0;
  bool rejected = false;
};

struct SegmentSummary {
  std::size_t start = 0;  // first observation (1-based)
  std::size_t end = 0;    // last observation (1-based)
  std::vector<double> mean_curve;
  double sigma2 = 0.0;
  std::optional<double> skewness, kurtosis;  // scalar samples only
};

struct SegmentationResult {
  std::vector<std::size_t> changepoints;  // sorted ascending
  std::size_t r_hat = 0;
  std::vector<SegmentTraceEntry> trace;   // depth-first visit order
  std::vector<SegmentSummary> segments;
};

// Binary segmentation over the weighted energy statistic: test the
// window, split at the smallest argmax when the max exceeds the
// threshold, recurse left then right, stop on u-l <= 4 or non-
// rejection. Per-segment stats come from stats_sample when given
// (useful when segmenting a transform of the original data).
SegmentationResult binary_segment(const FunctionalSample& sample,
                                  const SegmentationConfig& config,
                                  const FunctionalSample* stats_sample = nullptr);

}  // namespace fcpd
