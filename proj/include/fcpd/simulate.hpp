#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcpd/charfn.hpp"
#include "fcpd/detect.hpp"
#include "fcpd/sample.hpp"
#include "fcpd/segment.hpp"

namespace fcpd {

// Scenario for the truncated Karhunen-Loeve generator
//   X_i = mu_i + sum_l lambda_l^(1/2) Z_{l,i} phi_l + nu_i,
// with lambda_l = exp(-(l-1)/2), an orthonormal Fourier basis phi_l on
// [0,1], AR(1) scores with standard Gaussian innovations (200-step
// burn-in), and i.i.d. Gaussian measurement error scaled so that
// E||nu||^2 = sigma_nu_sq.
//
// A break always happens AFTER index k: observation k is the last one
// of the old regime. k_star defaults to floor(N/2).
struct DgpSpec {
  enum class Break {
    none,
    amoc,        // mean shifts by the constant delta_size after k_star
    multi_mean,  // mean levels (0, 2, 3) split at floor(.35N), floor(.7N)
    dist_mean,   // like amoc; conventional alternative for the dist test
    dist_var,    // score scale doubles after k_star
    dist_tail,   // scores switch to t(3) after k_star
    epidemic     // t(3) scores inside (floor(.35N), floor(.7N)]
  };

  std::size_t n_obs = 100;
  std::size_t n_points = 128;   // S
  std::size_t n_basis = 40;     // M
  double rho = 0.0;             // AR(1) score coefficient
  double sigma_nu_sq = 0.0;     // E||nu||^2
  Break break_kind = Break::none;
  double delta_size = 0.0;      // ||delta|| for the mean alternatives
  std::optional<std::size_t> k_star;
  // The literal AR recursion leaves the scores with marginal variance
  // 1/(1-rho^2); this rescales them back to unit variance.
  bool normalize_score_variance = false;
  std::uint64_t seed = 0;

  std::size_t break_index() const {
    return k_star.value_or(n_obs / 2);
  }
};

FunctionalSample generate(const DgpSpec& spec);

// The orthonormal Fourier basis used by the generator, as an M x S
// matrix of samples on the left-endpoint grid of [0,1].
Eigen::MatrixXd fourier_basis(std::size_t n_basis, std::size_t n_points);

// One row of a rejection-frequency table.
struct McCell {
  double alpha = 0.0;
  double level = 0.05;
  std::size_t n_reps = 0;
  std::size_t n_rejections = 0;
  double rejection_rate = 0.0;
  // Location stats of k_hat across rejecting replications.
  double k_median = 0.0, k_mean = 0.0, k_min = 0.0, k_max = 0.0;
};

struct McReport {
  std::string study;  // "size_power" or "segmentation"
  std::size_t n_reps = 0;
  std::vector<McCell> cells;
  // Segmentation summaries (valid when study == "segmentation").
  double r_mean = 0.0, r_median = 0.0, r_min = 0.0, r_max = 0.0;
  std::vector<double> breakdate_medians;
  double runtime_seconds = 0.0;
  std::string config_echo;
};

struct SizePowerStudy {
  DgpSpec dgp;
  DetectConfig detect;         // alpha is overridden per cell
  std::vector<double> alphas = {0.0, 0.5, 0.99};
  std::size_t n_reps = 1000;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
};

// Generates a fresh sample per replication, shares the covariance and
// the bridge paths across the alpha cells of that replication, and
// tallies rejections at detect.level.
McReport run_size_power_study(const SizePowerStudy& study);

struct SegmentationStudy {
  DgpSpec dgp;
  SegmentationConfig segment;
  // When set, each replication is transformed through the
  // characteristic-function pipeline before segmentation.
  std::optional<DistTestConfig> distributional;
  std::size_t n_reps = 500;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
};

McReport run_segmentation_study(const SegmentationStudy& study);

void save_report_json(const McReport& report, const std::string& path);
void save_report_csv(const McReport& report, const std::string& path);

}  // namespace fcpd
