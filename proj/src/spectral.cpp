#include "fcpd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fcpd/errors.hpp"

namespace fcpd {

SpectralModel operator_eigenvalues(const LongRunCovarianceEstimate& cov,
                                   bool want_eigenvectors) {
  const auto dim = cov.matrix.rows();
  if (dim != cov.matrix.cols()) throw DataError("covariance matrix not square");
  if (dim > 2048)
    throw ConfigError("grid too large for the dense eigensolver (r*S > 2048)");
  const double scale = cov.matrix.cwiseAbs().maxCoeff();
  const double tol = 1e-10 * std::max(scale, 1.0);
  if (((cov.matrix - cov.matrix.transpose()).cwiseAbs().maxCoeff()) > tol)
    throw DataError("covariance matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(cov.quad_weight * cov.matrix,
                 want_eigenvectors ? Eigen::ComputeEigenvectors
                                   : Eigen::EigenvaluesOnly);

  SpectralModel model;
  model.sigma0_sq = cov.sigma0_sq;
  model.raw_trace = solver.eigenvalues().sum();

  // Eigen returns ascending order; reverse, then clip at zero (the
  // eigenvalues feed squared-bridge variances downstream).
  model.eigenvalues = solver.eigenvalues().reverse();
  if (want_eigenvectors) {
    model.eigenvectors = solver.eigenvectors().rowwise().reverse();
    model.eigenvectors /= std::sqrt(cov.quad_weight);
  }
  model.eigenvalues = model.eigenvalues.cwiseMax(0.0);

  model.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < model.eigenvalues.size(); ++i) {
    if (model.eigenvalues[i + 1] <= 0.0) break;
    model.min_gap =
        std::min(model.min_gap, model.eigenvalues[i] - model.eigenvalues[i + 1]);
  }
  if (!std::isfinite(model.min_gap)) model.min_gap = 0.0;
  return model;
}

std::size_t select_m(const SpectralModel& model, double cpv_threshold) {
  if (!(cpv_threshold > 0.0 && cpv_threshold <= 1.0))
    throw ConfigError("CPV threshold must lie in (0, 1]");
  const double total = model.eigenvalues.sum();
  if (!(total > 0.0))
    throw DegenerateError("all operator eigenvalues are zero");

  double cumulative = 0.0;
  std::size_t positive = 0;
  for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
    if (model.eigenvalues[i] <= 0.0) break;
    ++positive;
    cumulative += model.eigenvalues[i];
    if (cumulative / total >= cpv_threshold)
      return static_cast<std::size_t>(i + 1);
  }
  return positive;
}

SpectralModel spectral_model(const LongRunCovarianceEstimate& cov,
                             double cpv_threshold, bool want_eigenvectors) {
  SpectralModel model = operator_eigenvalues(cov, want_eigenvectors);
  model.cpv_threshold = cpv_threshold;
  model.m_hat = select_m(model, cpv_threshold);
  return model;
}

void save_scree_csv(const SpectralModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "index,eigenvalue,cumulative_cpv\n";
  const double total = model.eigenvalues.sum();
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
    cumulative += model.eigenvalues[i];
    out << (i + 1) << ',' << model.eigenvalues[i] << ','
        << (total > 0.0 ? cumulative / total : 0.0) << '\n';
  }
}

}  // namespace fcpd
