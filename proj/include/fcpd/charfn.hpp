#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "fcpd/detect.hpp"
#include "fcpd/sample.hpp"

namespace fcpd {

// PCA basis of the data covariance C(t,s) plus the projection scores:
// the finite-dimensional summary behind the distributional test.
struct PcaProjection {
  std::size_t d = 1;
  Eigen::MatrixXd psi_hat;   // S x d eigenfunction samples, w-normalized
  Eigen::VectorXd chi_hat;   // d leading eigenvalues of C_hat
  Eigen::MatrixXd xi_hat;    // N x d scores
};

// Eigenfunctions of the sample covariance of scalar curves and the
// projection scores <Y_i, psi_m>. Scores are computed from demeaned
// curves by default so the distributional test ignores common location
// shifts; centered=false reproduces raw-curve projections instead.
// Throws ConfigError when d exceeds the number of positive eigenvalues.
PcaProjection estimate_pca(const FunctionalSample& sample, std::size_t d,
                           bool centered = true);

// Empirical characteristic function curves: observation i maps to
// t |-> exp(i * sum_j t_j xi_{j,i}) on a tensor grid of [-1,1]^d with
// points_per_axis points per axis, packaged as an r = 2 sample
// (real part then imaginary part). Requires points_per_axis >= 8 and
// d <= 3.
FunctionalSample char_transform(const PcaProjection& projection,
                                std::size_t points_per_axis = 64);

struct DistTestConfig {
  std::size_t d = 1;
  std::size_t char_grid = 64;
  bool centered_scores = true;
  DetectConfig detect{};
};

// Distributional change test: project, transform to characteristic
// function curves, then run the mean-change machinery on the
// transformed sample. Requires scalar input curves.
DetectionResult dist_change_test(const FunctionalSample& sample,
                                 const DistTestConfig& config);

}  // namespace fcpd
