#include "fcpd/null_dist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include "fcpd/errors.hpp"
#include "fcpd/rng.hpp"

namespace fcpd {

namespace {

// Stream-id tags keeping the RNG domains of the two simulators apart.
constexpr std::uint64_t kDeltaSupDomain = 0x64656C7461737570ULL;
constexpr std::uint64_t kXiDomain = 0x7869616C70686100ULL;

void check_config(const NullSimConfig& config) {
  if (config.n_grid < 8) throw ConfigError("n_grid must be at least 8");
  if (config.n_reps < 100) throw ConfigError("n_reps must be at least 100");
  if (!(config.alpha_weight >= 0.0 && config.alpha_weight < 1.0))
    throw ConfigError("alpha must lie in [0, 1)");
}

// Order statistic quantile: the ceil(p*n)-th smallest value.
double order_statistic(const std::vector<double>& sorted, double p) {
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(n)));
  rank = std::min(std::max<std::size_t>(rank, 1), n);
  return sorted[rank - 1];
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

double CriticalValueTable::critical_value(double level) const {
  if (sup_samples.empty()) throw DataError("empty critical value table");
  if (!(level > 0.0 && level < 1.0))
    throw ConfigError("level must lie in (0, 1)");
  return order_statistic(sup_samples, 1.0 - level);
}

std::vector<CriticalValueTable> simulate_delta_sup_multi(
    const SpectralModel& model, const NullSimConfig& config,
    const std::vector<double>& alphas) {
  check_config(config);
  if (model.m_hat < 1) throw ConfigError("spectral model has m_hat < 1");
  if (model.sigma0_sq < 0.0) throw ConfigError("sigma0_sq must be >= 0");
  if (alphas.empty()) throw ConfigError("need at least one alpha");
  for (double alpha : alphas)
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw ConfigError("alpha must lie in [0, 1)");

  const std::size_t n = config.n_grid;
  const std::size_t m = model.m_hat;
  const std::size_t n_alpha = alphas.size();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  // Grid factors u(1-u) and the weights (u(1-u))^-alpha, shared
  // read-only across replications.
  std::vector<double> uu(n - 1);
  std::vector<std::vector<double>> inv_weight(n_alpha,
                                              std::vector<double>(n - 1));
  for (std::size_t j = 1; j < n; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(n);
    uu[j - 1] = u * (1.0 - u);
    for (std::size_t a = 0; a < n_alpha; ++a)
      inv_weight[a][j - 1] =
          alphas[a] == 0.0 ? 1.0 : std::pow(uu[j - 1], -alphas[a]);
  }

  std::vector<std::vector<double>> sups(n_alpha,
                                        std::vector<double>(config.n_reps));
  run_partitioned(config.n_reps, config.threads, [&](std::size_t rep) {
    CounterRng rng(config.seed, kDeltaSupDomain, rep);
    std::vector<double> delta(n - 1, 0.0);
    std::vector<double> path(n);
    for (std::size_t l = 0; l < m; ++l) {
      const double lambda = model.eigenvalues[static_cast<Eigen::Index>(l)];
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cum += rng.normal();
        path[i] = inv_sqrt_n * cum;
      }
      const double terminal = path[n - 1];
      for (std::size_t j = 1; j < n; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(n);
        const double bridge = path[j - 1] - u * terminal;
        delta[j - 1] += lambda * bridge * bridge;
      }
    }
    for (std::size_t a = 0; a < n_alpha; ++a) {
      double sup = 0.0;
      for (std::size_t j = 1; j < n; ++j) {
        const double value =
            std::abs(delta[j - 1] - model.sigma0_sq * uu[j - 1]) *
            inv_weight[a][j - 1];
        if (value > sup) sup = value;
      }
      if (!std::isfinite(sup))
        throw DataError("non-finite sup sample in the null simulation");
      sups[a][rep] = sup;
    }
  });

  std::vector<CriticalValueTable> tables(n_alpha);
  for (std::size_t a = 0; a < n_alpha; ++a) {
    tables[a].sup_samples = std::move(sups[a]);
    std::sort(tables[a].sup_samples.begin(), tables[a].sup_samples.end());
    tables[a].levels = {0.10, 0.05, 0.01};
    for (double level : tables[a].levels)
      tables[a].critvals.push_back(tables[a].critical_value(level));
  }
  return tables;
}

CriticalValueTable simulate_delta_sup(const SpectralModel& model,
                                      const NullSimConfig& config) {
  return simulate_delta_sup_multi(model, config,
                                  {config.alpha_weight})[0];
}

double p_value(const CriticalValueTable& table, double observed) {
  if (table.sup_samples.empty()) throw DataError("empty critical value table");
  const auto first_ge = std::lower_bound(table.sup_samples.begin(),
                                         table.sup_samples.end(), observed);
  const auto count_ge =
      static_cast<double>(table.sup_samples.end() - first_ge);
  return (1.0 + count_ge) /
         (static_cast<double>(table.sup_samples.size()) + 1.0);
}

double m_alpha_drift_left(double alpha, double theta) {
  return (1.0 - alpha / 2.0) * (1.0 - theta) + alpha * theta / 2.0;
}

double m_alpha_drift_right(double alpha, double theta) {
  return (1.0 - alpha / 2.0) * theta + alpha * (1.0 - theta) / 2.0;
}

XiAlphaModel simulate_xi_drifted(double m_left, double m_right,
                                 const XiSimConfig& config) {
  if (!(m_left > 0.0) || !(m_right > 0.0))
    throw ConfigError("drift levels must be positive");
  if (!(config.u_step > 0.0) || !(config.u_max > config.u_step))
    throw ConfigError("invalid xi simulation grid");
  if (config.n_reps < 100) throw ConfigError("n_reps must be at least 100");

  XiAlphaModel model;
  model.m_alpha_left = m_left;
  model.m_alpha_right = m_right;

  const auto n_steps = static_cast<std::size_t>(
      std::llround(config.u_max / config.u_step));
  const double sqrt_step = std::sqrt(config.u_step);

  model.samples.resize(config.n_reps);
  std::size_t exceedances = 0;
  for (std::size_t rep = 0; rep < config.n_reps; ++rep) {
    CounterRng rng(config.seed, kXiDomain, rep);
    // Scan ascending in u and keep strict improvements only, so ties
    // resolve to the smallest maximizer. The u = 0 value is exactly 0.
    double best_value = 0.0;
    double best_u = 0.0;
    // Left branch: W1 runs outward from 0, so build it first, then
    // scan from -u_max towards 0.
    std::vector<double> left(n_steps);
    double cum = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
      cum += sqrt_step * rng.normal();
      const double dist = static_cast<double>(i + 1) * config.u_step;
      left[i] = cum - dist * model.m_alpha_left;
    }
    for (std::size_t i = n_steps; i-- > 0;) {
      if (left[i] > best_value) {
        best_value = left[i];
        best_u = -static_cast<double>(i + 1) * config.u_step;
      }
    }
    // Right branch: values at u > 0 must beat the current best
    // strictly, keeping the smallest-argmax convention.
    cum = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
      cum += sqrt_step * rng.normal();
      const double dist = static_cast<double>(i + 1) * config.u_step;
      const double value = cum - dist * model.m_alpha_right;
      if (value > best_value) {
        best_value = value;
        best_u = dist;
      }
    }
    if (std::abs(std::abs(best_u) - config.u_max) < 0.5 * config.u_step)
      ++exceedances;
    model.samples[rep] = best_u;
  }
  model.window_exceedances = exceedances;
  std::sort(model.samples.begin(), model.samples.end());
  return model;
}

XiAlphaModel simulate_xi_alpha(double alpha, double theta,
                               const XiSimConfig& config) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw ConfigError("alpha must lie in [0, 1)");
  if (!(theta > 0.0 && theta < 1.0))
    throw ConfigError("theta must lie in (0, 1)");
  XiAlphaModel model = simulate_xi_drifted(
      m_alpha_drift_left(alpha, theta), m_alpha_drift_right(alpha, theta),
      config);
  model.alpha = alpha;
  model.theta = theta;
  return model;
}

double XiAlphaModel::quantile(double p) const {
  if (samples.empty()) throw DataError("empty xi model");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  return order_statistic(samples, p);
}

std::pair<std::size_t, std::size_t> breakdate_ci(
    const BreakdateEstimate& estimate, const XiAlphaModel& xi, double level) {
  if (!(estimate.delta_norm > 0.0) || !(estimate.sigma2_hat > 0.0))
    throw DegenerateError("breakdate estimate has no usable scale");
  if (!(level > 0.0 && level < 1.0))
    throw ConfigError("level must lie in (0, 1)");

  const double scale =
      estimate.sigma2_hat / (estimate.delta_norm * estimate.delta_norm);
  const double k = static_cast<double>(estimate.k_hat);
  const double lo_raw = k - xi.quantile(1.0 - level / 2.0) * scale;
  const double hi_raw = k - xi.quantile(level / 2.0) * scale;

  const double n = static_cast<double>(estimate.n_obs);
  const double lo = std::max(1.0, std::min(std::floor(lo_raw), n));
  const double hi = std::max(1.0, std::min(std::ceil(hi_raw), n));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

void save_critical_values_csv(const CriticalValueTable& table,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "level,critical_value\n";
  for (std::size_t i = 0; i < table.levels.size(); ++i)
    out << table.levels[i] << ',' << table.critvals[i] << '\n';
}

void save_sup_samples_csv(const CriticalValueTable& table,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "sup_sample\n";
  for (double s : table.sup_samples) out << s << '\n';
}

}  // namespace fcpd
