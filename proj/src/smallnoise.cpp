#include "kbstab/smallnoise.hpp"

#include "kbstab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kbstab {

namespace {

SimulationSpec sweep_spec(const ExperimentConfig& cfg, double epsilon) {
  SimulationSpec spec;
  spec.grid = TimeGrid::over(cfg.horizon, cfg.dt);
  spec.substeps = cfg.substeps;
  spec.epsilon = epsilon;
  spec.init = cfg.true_init;
  return spec;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  std::vector<double> residuals;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line line;
  line.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  line.intercept = my - line.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    line.residuals.push_back(r);
    line.max_residual = std::max(line.max_residual, std::abs(r));
  }
  return line;
}

// Decay rate of log|Psi| over nodes [lo, hi].
Line log_norm_fit(const MatrixPath& psi, std::size_t lo, std::size_t hi) {
  std::vector<double> t, y;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double norm = spectral_norm(psi[k]);
    if (!(norm > 1e-300) || !std::isfinite(norm)) continue;
    t.push_back(psi.grid.t(k));
    y.push_back(std::log(norm));
  }
  if (t.size() < 2) throw NumericalError("exponential_stability_estimate: Psi norm under/overflows on the tail");
  return least_squares(t, y);
}

}  // namespace

EpsilonPair run_epsilon_pair(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed,
                             const std::shared_ptr<const FilterGains>& noisy_gains,
                             const std::shared_ptr<const FilterGains>& clean_gains) {
  const ObservationPath obs = generate_observations(cfg.model, sweep_spec(cfg, epsilon), seed);
  const FilterRun noisy = run_filter(cfg.model, obs, cfg.true_init.mean, noisy_gains);
  const FilterRun clean = run_filter(cfg.model, obs, cfg.true_init.mean, clean_gains);
  EpsilonPair out;
  out.epsilon = epsilon;
  out.seed = seed;
  const CovarianceGap cov = covariance_gap(noisy_gains->riccati, clean_gains->riccati);
  out.cov_gap = cov.norm;
  out.sup_cov_gap = cov.sup;
  out.mean_gap.reserve(obs.grid.nodes());
  for (long k = 0; k < noisy.mean.cols(); ++k) {
    const double gap = (noisy.mean.col(k) - clean.mean.col(k)).norm();
    out.mean_gap.push_back(gap);
    out.sup_mean_gap = std::max(out.sup_mean_gap, gap);
  }
  return out;
}

EpsilonPair run_epsilon_pair(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed) {
  const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
  auto clean = make_filter_gains(cfg.model, cfg.true_init.cov, grid, 0.0);
  auto noisy = epsilon == 0.0 ? clean : make_filter_gains(cfg.model, cfg.true_init.cov, grid, epsilon);
  return run_epsilon_pair(cfg, epsilon, seed, noisy, clean);
}

ScalingFit fit_loglog(const std::vector<double>& epsilons, const std::vector<double>& values) {
  ScalingFit fit;
  if (epsilons.size() != values.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (epsilons.size() < 2) {
    fit.reason = "fewer than two points";
    return fit;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(values[i])) {
      fit.reason = "degenerate sweep: nonpositive gap or epsilon";
      return fit;
    }
    x.push_back(std::log(epsilons[i]));
    y.push_back(std::log(values[i]));
  }
  if (*std::max_element(x.begin(), x.end()) == *std::min_element(x.begin(), x.end())) {
    fit.reason = "degenerate sweep: all epsilons equal";
    return fit;
  }
  const Line line = least_squares(x, y);
  fit.valid = true;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.residuals = line.residuals;
  return fit;
}

EpsilonSweep run_epsilon_sweep(const ExperimentConfig& cfg, Exec exec) {
  EpsilonSweep sweep;
  sweep.epsilons = cfg.epsilons;
  for (int i = 0; i < cfg.mc_runs; ++i) sweep.seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
  const auto ne = static_cast<long>(sweep.epsilons.size());
  const auto ns = static_cast<long>(sweep.seeds.size());
  const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);

  auto clean = make_filter_gains(cfg.model, cfg.true_init.cov, grid, 0.0);
  std::vector<std::shared_ptr<const FilterGains>> noisy(static_cast<std::size_t>(ne));
  for_each_index(ne, exec, [&](long e) {
    const double eps = sweep.epsilons[static_cast<std::size_t>(e)];
    noisy[static_cast<std::size_t>(e)] =
        eps == 0.0 ? clean : make_filter_gains(cfg.model, cfg.true_init.cov, grid, eps);
  });

  sweep.sup_mean.resize(ne, ns);
  sweep.sup_cov.resize(ne, ns);
  for_each_index(ne * ns, exec, [&](long job) {
    const long e = job / ns, s = job % ns;
    const EpsilonPair pair = run_epsilon_pair(cfg, sweep.epsilons[static_cast<std::size_t>(e)],
                                              sweep.seeds[static_cast<std::size_t>(s)],
                                              noisy[static_cast<std::size_t>(e)], clean);
    sweep.sup_mean(e, s) = pair.sup_mean_gap;
    sweep.sup_cov(e, s) = pair.sup_cov_gap;
  });

  for (long e = 0; e < ne; ++e) {
    const VectorXd rm = sweep.sup_mean.row(e).transpose();
    const VectorXd rc = sweep.sup_cov.row(e).transpose();
    sweep.median_mean.push_back(median({rm.data(), rm.data() + rm.size()}));
    sweep.median_cov.push_back(median({rc.data(), rc.data() + rc.size()}));
  }
  return sweep;
}

SweepFit fit_scaling(const EpsilonSweep& sweep) {
  SweepFit fit;
  if (sweep.epsilons.size() < 3 || sweep.seeds.size() < 10) {
    fit.mean.reason = fit.cov.reason = "sweep too small: need at least 3 epsilons and 10 seeds";
    return fit;
  }
  fit.mean = fit_loglog(sweep.epsilons, sweep.median_mean);
  fit.cov = fit_loglog(sweep.epsilons, sweep.median_cov);
  return fit;
}

int monotonicity_violations(const EpsilonSweep& sweep, double slack) {
  std::vector<std::size_t> order(sweep.epsilons.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sweep.epsilons[a] > sweep.epsilons[b]; });
  int violations = 0;
  for (long s = 0; s < sweep.sup_mean.cols(); ++s) {
    for (std::size_t j = 1; j < order.size(); ++j) {
      const auto big = static_cast<long>(order[j - 1]), small = static_cast<long>(order[j]);
      if (sweep.sup_mean(small, s) > (1.0 + slack) * sweep.sup_mean(big, s)) ++violations;
      if (sweep.sup_cov(small, s) > (1.0 + slack) * sweep.sup_cov(big, s)) ++violations;
    }
  }
  return violations;
}

StabilityEstimate exponential_stability_estimate(const MatrixPath& psi) {
  const std::size_t n = psi.size() - 1;
  if (n < 8) throw std::invalid_argument("exponential_stability_estimate: horizon too short");
  const Line tail = log_norm_fit(psi, n / 2, n);
  const Line third = log_norm_fit(psi, n / 2, (3 * n) / 4);
  const Line last = log_norm_fit(psi, (3 * n) / 4, n);
  StabilityEstimate est;
  est.alpha = -tail.slope;
  est.k = std::exp(tail.intercept);
  est.residual = tail.max_residual;
  est.rate_ratio = -third.slope > 0.0 ? last.slope / third.slope : 0.0;
  const double half = psi.grid.t(n) - psi.grid.t(n / 2);
  if (est.alpha <= 0.0) {
    est.verdict = "not stable: fitted rate is nonpositive";
  } else if (est.alpha * half < 1.0) {
    est.verdict = "not exponential: decay over the tail is less than one e-fold";
  } else if (est.rate_ratio < 0.8) {
    est.verdict = "not exponential: decay rate drifts toward zero";
  } else {
    est.exponential = true;
    est.verdict = "exponentially stable";
  }
  return est;
}

double cov_gap_bound(double epsilon, const StabilityEstimate& est, double sup_f_norm) {
  return epsilon * epsilon * est.k * sup_f_norm * sup_f_norm / (2.0 * est.alpha);
}

void write_csv(std::ostream& os, const EpsilonSweep& sweep) {
  os << "epsilon,seed,sup_mean_gap,sup_cov_gap\n";
  for (std::size_t e = 0; e < sweep.epsilons.size(); ++e)
    for (std::size_t s = 0; s < sweep.seeds.size(); ++s)
      os << fmt_g17(sweep.epsilons[e]) << "," << sweep.seeds[s] << ","
         << fmt_g17(sweep.sup_mean(static_cast<long>(e), static_cast<long>(s))) << ","
         << fmt_g17(sweep.sup_cov(static_cast<long>(e), static_cast<long>(s))) << "\n";
}

void write_summary_csv(std::ostream& os, const EpsilonSweep& sweep, const SweepFit& fit) {
  os << "epsilon,median_sup_mean_gap,median_sup_cov_gap\n";
  for (std::size_t e = 0; e < sweep.epsilons.size(); ++e)
    os << fmt_g17(sweep.epsilons[e]) << "," << fmt_g17(sweep.median_mean[e]) << ","
       << fmt_g17(sweep.median_cov[e]) << "\n";
  os << "slope_mean," << (fit.mean.valid ? fmt_g17(fit.mean.slope) : "") << ",\n";
  os << "slope_cov,," << (fit.cov.valid ? fmt_g17(fit.cov.slope) : "") << "\n";
}

}  // namespace kbstab
