#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>

#include "fcpd/longrun.hpp"

namespace fcpd {

// Spectral summary of a covariance integral operator: the eigenvalues
// of the quadrature-scaled kernel matrix, clipped at zero and sorted
// nonincreasing. This is the sufficient statistic for simulating the
// null law.
struct SpectralModel {
  Eigen::VectorXd eigenvalues;   // clipped, descending
  Eigen::MatrixXd eigenvectors;  // columns, w-normalized; may be empty
  std::size_t m_hat = 0;
  double cpv_threshold = 0.0;
  double sigma0_sq = 0.0;

  // Diagnostics: sum of eigenvalues before clipping (equals the
  // operator trace) and the smallest gap among the leading clipped
  // eigenvalues. Closely spaced eigenvalues make individual
  // eigenfunctions poorly identified; the gap is reported, not acted
  // on.
  double raw_trace = 0.0;
  double min_gap = 0.0;
};

// Nystrom discretization of the eigenproblem
// lambda phi(t) = integral D(t,s) phi(s) ds: eigendecomposition of
// w * matrix, eigenvalues clipped at 0, eigenvectors rescaled so that
// w * sum_j v[j]^2 = 1. Requires a symmetric input (DataError) and
// r*S <= 2048 (ConfigError).
SpectralModel operator_eigenvalues(const LongRunCovarianceEstimate& cov,
                                   bool want_eigenvectors = false);

// Smallest M with cumulative eigenvalue share >= cpv_threshold. Throws
// DegenerateError when every eigenvalue is zero.
std::size_t select_m(const SpectralModel& model, double cpv_threshold);

// Convenience: eigendecompose and fix m_hat/cpv in one step.
SpectralModel spectral_model(const LongRunCovarianceEstimate& cov,
                             double cpv_threshold,
                             bool want_eigenvectors = false);

// CSV export with columns (index, eigenvalue, cumulative_cpv).
void save_scree_csv(const SpectralModel& model, const std::string& path);

}  // namespace fcpd
