#include "fcpd/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numeric>
#include <thread>

#include "fcpd/errors.hpp"
#include "fcpd/rng.hpp"

namespace fcpd {

namespace {

constexpr std::uint64_t kDgpDomain = 0x6467702D73636F72ULL;
constexpr std::uint64_t kStudyDomain = 0x73747564792D6D63ULL;
constexpr double kTwoPi = 6.28318530717958647692;

double median_of(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2]
               : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void run_partitioned(std::size_t n_tasks, std::size_t threads,
                     const std::function<void(std::size_t)>& task) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n_tasks; i += threads) task(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (const auto& error : errors)
    if (error) std::rethrow_exception(error);
}

}  // namespace

Eigen::MatrixXd fourier_basis(std::size_t n_basis, std::size_t n_points) {
  Eigen::MatrixXd basis(n_basis, n_points);
  const double sqrt2 = std::sqrt(2.0);
  for (std::size_t j = 0; j < n_points; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(n_points);
    for (std::size_t l = 0; l < n_basis; ++l) {
      double value;
      if (l == 0) {
        value = 1.0;
      } else {
        const double freq = static_cast<double>((l + 1) / 2);
        value = l % 2 ? sqrt2 * std::cos(kTwoPi * freq * t)
                      : sqrt2 * std::sin(kTwoPi * freq * t);
      }
      basis(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) =
          value;
    }
  }
  return basis;
}

FunctionalSample generate(const DgpSpec& spec) {
  if (spec.n_obs < 5) throw ConfigError("n_obs must be at least 5");
  if (spec.n_points < 2) throw ConfigError("n_points must be at least 2");
  if (spec.n_basis < 1) throw ConfigError("n_basis must be at least 1");
  if (!(spec.rho > -1.0 && spec.rho < 1.0))
    throw ConfigError("rho must lie in (-1, 1)");
  if (spec.sigma_nu_sq < 0.0)
    throw ConfigError("sigma_nu_sq must be nonnegative");
  const std::size_t n = spec.n_obs;
  const std::size_t s = spec.n_points;
  const std::size_t m = spec.n_basis;
  const std::size_t k_star = spec.break_index();
  if (spec.break_kind != DgpSpec::Break::none &&
      spec.break_kind != DgpSpec::Break::multi_mean &&
      spec.break_kind != DgpSpec::Break::epidemic) {
    if (k_star <= 2 || k_star >= n - 2)
      throw ConfigError("k_star must lie in (2, N-2)");
  }

  CounterRng rng(spec.seed, kDgpDomain);

  // Scores: one AR(1) chain per basis function, switched to the
  // regime-specific innovation law where a spec asks for it.
  const std::size_t k1 =
      static_cast<std::size_t>(0.35 * static_cast<double>(n));
  const std::size_t k2 =
      static_cast<std::size_t>(0.70 * static_cast<double>(n));
  const bool tail_at = spec.break_kind == DgpSpec::Break::dist_tail;
  const bool epidemic = spec.break_kind == DgpSpec::Break::epidemic;
  const bool var_at = spec.break_kind == DgpSpec::Break::dist_var;
  const double score_scale =
      spec.normalize_score_variance ? std::sqrt(1.0 - spec.rho * spec.rho)
                                    : 1.0;

  Eigen::MatrixXd scores(n, m);
  constexpr std::size_t kBurnIn = 200;
  for (std::size_t l = 0; l < m; ++l) {
    double z = 0.0;
    for (std::size_t b = 0; b < kBurnIn; ++b)
      z = spec.rho * z + rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      // Observation index is 1-based in the regime rules below.
      const std::size_t obs = i + 1;
      const bool heavy = (tail_at && obs > k_star) ||
                         (epidemic && obs > k1 && obs <= k2);
      const double innovation = heavy ? rng.student_t3() : rng.normal();
      z = spec.rho * z + innovation;
      double value = score_scale * z;
      if (var_at && obs > k_star) value *= 2.0;
      scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          value;
    }
  }

  const Eigen::MatrixXd basis = fourier_basis(m, s);
  Eigen::VectorXd sqrt_lambda(m);
  for (std::size_t l = 0; l < m; ++l)
    sqrt_lambda[static_cast<Eigen::Index>(l)] =
        std::exp(-static_cast<double>(l) / 4.0);  // lambda_l^(1/2)

  FunctionalSample sample;
  sample.n_obs = n;
  sample.n_components = 1;
  sample.grid = Grid::uniform01(s);
  sample.values = scores * sqrt_lambda.asDiagonal() * basis;

  // Mean regimes: constant-level curves, switching after the break
  // index.
  switch (spec.break_kind) {
    case DgpSpec::Break::amoc:
    case DgpSpec::Break::dist_mean:
      for (std::size_t i = k_star; i < n; ++i)
        sample.values.row(static_cast<Eigen::Index>(i)).array() +=
            spec.delta_size;
      break;
    case DgpSpec::Break::multi_mean:
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t obs = i + 1;
        const double level = obs <= k1 ? 0.0 : (obs <= k2 ? 2.0 : 3.0);
        sample.values.row(static_cast<Eigen::Index>(i)).array() += level;
      }
      break;
    default:
      break;
  }

  if (spec.sigma_nu_sq > 0.0) {
    const double w = sample.grid.weight();
    const double point_sd =
        std::sqrt(spec.sigma_nu_sq / (w * static_cast<double>(s)));
    for (Eigen::Index i = 0; i < sample.values.rows(); ++i)
      for (Eigen::Index j = 0; j < sample.values.cols(); ++j)
        sample.values(i, j) += point_sd * rng.normal();
  }
  return sample;
}

McReport run_size_power_study(const SizePowerStudy& study) {
  if (study.alphas.empty()) throw ConfigError("study needs at least one alpha");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n_alpha = study.alphas.size();
  const std::size_t n_reps = study.n_reps;

  std::vector<std::vector<char>> rejected(
      n_alpha, std::vector<char>(n_reps, 0));
  std::vector<std::vector<double>> k_hats(
      n_alpha, std::vector<double>(n_reps, 0.0));

  run_partitioned(n_reps, study.threads, [&](std::size_t rep) {
    DgpSpec dgp = study.dgp;
    dgp.seed = mix64(study.master_seed ^ mix64(kStudyDomain + rep));
    const FunctionalSample sample = generate(dgp);

    const InnerProductCache cache = build_cache(sample);
    const LongRunCovarianceEstimate cov =
        estimate_longrun(sample, study.detect.kernel, study.detect.bandwidth,
                         study.detect.demeaning);
    const SpectralModel model = spectral_model(cov, study.detect.cpv);

    NullSimConfig sim;
    sim.n_grid =
        std::max<std::size_t>(study.detect.null_grid.value_or(sample.n_obs), 8);
    sim.n_reps = study.detect.null_reps;
    sim.seed = mix64(dgp.seed + 1);
    sim.threads = 1;
    const std::vector<CriticalValueTable> tables =
        simulate_delta_sup_multi(model, sim, study.alphas);

    for (std::size_t a = 0; a < n_alpha; ++a) {
      const WeightedEnergyProcess process =
          weighted_process(cache, 0, sample.n_obs, study.alphas[a]);
      const double critval =
          tables[a].critical_value(study.detect.level);
      rejected[a][rep] = process.max_value > critval ? 1 : 0;
      k_hats[a][rep] = static_cast<double>(process.argmax_k);
    }
  });

  McReport report;
  report.study = "size_power";
  report.n_reps = n_reps;
  for (std::size_t a = 0; a < n_alpha; ++a) {
    McCell cell;
    cell.alpha = study.alphas[a];
    cell.level = study.detect.level;
    cell.n_reps = n_reps;
    std::vector<double> k_rejected;
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
      if (rejected[a][rep]) {
        ++cell.n_rejections;
        k_rejected.push_back(k_hats[a][rep]);
      }
    }
    cell.rejection_rate =
        static_cast<double>(cell.n_rejections) / static_cast<double>(n_reps);
    if (!k_rejected.empty()) {
      cell.k_median = median_of(k_rejected);
      cell.k_mean =
          std::accumulate(k_rejected.begin(), k_rejected.end(), 0.0) /
          static_cast<double>(k_rejected.size());
      cell.k_min = *std::min_element(k_rejected.begin(), k_rejected.end());
      cell.k_max = *std::max_element(k_rejected.begin(), k_rejected.end());
    } else {
      cell.k_median = cell.k_mean = cell.k_min = cell.k_max = std::nan("");
    }
    report.cells.push_back(cell);
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

McReport run_segmentation_study(const SegmentationStudy& study) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n_reps = study.n_reps;

  std::vector<double> r_hats(n_reps, 0.0);
  std::vector<std::vector<double>> breaks(n_reps);

  run_partitioned(n_reps, study.threads, [&](std::size_t rep) {
    DgpSpec dgp = study.dgp;
    dgp.seed = mix64(study.master_seed ^ mix64(kStudyDomain + rep));

    const FunctionalSample sample = generate(dgp);
    SegmentationConfig seg = study.segment;
    seg.seed = mix64(dgp.seed + 2);

    SegmentationResult result;
    if (study.distributional) {
      const PcaProjection projection = estimate_pca(
          sample, study.distributional->d,
          study.distributional->centered_scores);
      const FunctionalSample transformed =
          char_transform(projection, study.distributional->char_grid);
      result = binary_segment(transformed, seg, &sample);
    } else {
      result = binary_segment(sample, seg);
    }
    r_hats[rep] = static_cast<double>(result.r_hat);
    breaks[rep].assign(result.changepoints.begin(),
                       result.changepoints.end());
  });

  McReport report;
  report.study = "segmentation";
  report.n_reps = n_reps;
  report.r_mean = std::accumulate(r_hats.begin(), r_hats.end(), 0.0) /
                  static_cast<double>(n_reps);
  report.r_median = median_of(r_hats);
  report.r_min = *std::min_element(r_hats.begin(), r_hats.end());
  report.r_max = *std::max_element(r_hats.begin(), r_hats.end());

  const auto max_breaks = static_cast<std::size_t>(report.r_max);
  for (std::size_t j = 0; j < max_breaks; ++j) {
    std::vector<double> jth;
    for (const auto& row : breaks)
      if (row.size() > j) jth.push_back(row[j]);
    report.breakdate_medians.push_back(median_of(std::move(jth)));
  }

  McCell cell;
  cell.alpha = study.segment.alpha;
  cell.level = study.segment.rule.level;
  cell.n_reps = n_reps;
  for (double r : r_hats)
    if (r > 0) ++cell.n_rejections;
  cell.rejection_rate =
      static_cast<double>(cell.n_rejections) / static_cast<double>(n_reps);
  cell.k_median = cell.k_mean = cell.k_min = cell.k_max = std::nan("");
  report.cells.push_back(cell);

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

void save_report_json(const McReport& report, const std::string& path) {
  nlohmann::json doc;
  doc["study"] = report.study;
  doc["n_reps"] = report.n_reps;
  if (!report.config_echo.empty()) {
    auto parsed =
        nlohmann::json::parse(report.config_echo, nullptr, false);
    doc["config"] =
        parsed.is_discarded() ? nlohmann::json(report.config_echo) : parsed;
  }
  auto cells = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json row;
    row["alpha"] = cell.alpha;
    row["level"] = cell.level;
    row["n_reps"] = cell.n_reps;
    row["n_rejections"] = cell.n_rejections;
    row["rejection_rate"] = cell.rejection_rate;
    if (std::isfinite(cell.k_median)) {
      row["k_hat"] = {{"median", cell.k_median},
                      {"mean", cell.k_mean},
                      {"min", cell.k_min},
                      {"max", cell.k_max}};
    } else {
      row["k_hat"] = nullptr;
    }
    cells.push_back(std::move(row));
  }
  doc["cells"] = std::move(cells);
  if (report.study == "segmentation") {
    doc["r_hat"] = {{"mean", report.r_mean},
                    {"median", report.r_median},
                    {"min", report.r_min},
                    {"max", report.r_max}};
    doc["breakdate_medians"] = report.breakdate_medians;
  }

  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << doc.dump(2) << '\n';
}

void save_report_csv(const McReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "alpha,level,n_reps,n_rejections,rejection_rate,"
         "k_median,k_mean,k_min,k_max\n";
  for (const auto& cell : report.cells) {
    out << cell.alpha << ',' << cell.level << ',' << cell.n_reps << ','
        << cell.n_rejections << ',' << cell.rejection_rate << ',';
    if (std::isfinite(cell.k_median))
      out << cell.k_median << ',' << cell.k_mean << ',' << cell.k_min << ','
          << cell.k_max;
    else
      out << ",,,";
    out << '\n';
  }
  if (report.study == "segmentation") {
    out << "r_mean,r_median,r_min,r_max";
    for (std::size_t j = 0; j < report.breakdate_medians.size(); ++j)
      out << ",break" << (j + 1) << "_median";
    out << '\n';
    out << report.r_mean << ',' << report.r_median << ',' << report.r_min
        << ',' << report.r_max;
    for (double b : report.breakdate_medians) out << ',' << b;
    out << '\n';
  }
}

}  // namespace fcpd
