#pragma once

#include "kbstab/batch.hpp"
#include "kbstab/config.hpp"
#include "kbstab/kalman.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace kbstab {

/// Observations y^eps from the eps-noisy system, filtered twice from the same
/// initial mean: once with the optimal gain from Q^eps and once with the
/// noise-free gain from P^Q (Q^eps at eps = 0). Both filters see y^eps.
struct EpsilonPair {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> mean_gap;  // |xhat^eps - xhat^0|
  std::vector<double> cov_gap;   // |Q^eps - P^Q|
  double sup_mean_gap = 0.0;
  double sup_cov_gap = 0.0;
};

EpsilonPair run_epsilon_pair(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed);

/// As above with gains prepared once per epsilon.
EpsilonPair run_epsilon_pair(const ExperimentConfig& cfg, double epsilon, std::uint64_t seed,
                             const std::shared_ptr<const FilterGains>& noisy_gains,
                             const std::shared_ptr<const FilterGains>& clean_gains);

/// Least-squares line through (log eps, log value).
struct ScalingFit {
  bool valid = false;
  std::string reason;  // why no fit was produced
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

ScalingFit fit_loglog(const std::vector<double>& epsilons, const std::vector<double>& values);

struct EpsilonSweep {
  std::vector<double> epsilons;
  std::vector<std::uint64_t> seeds;
  MatrixXd sup_mean;  // epsilons x seeds
  MatrixXd sup_cov;
  std::vector<double> median_mean;
  std::vector<double> median_cov;
};

/// Runs every (eps, seed) pair with seeds cfg.seed .. cfg.seed + mc_runs - 1.
/// Results do not depend on `exec`.
EpsilonSweep run_epsilon_sweep(const ExperimentConfig& cfg, Exec exec = Exec::serial);

struct SweepFit {
  ScalingFit mean;
  ScalingFit cov;
};

/// Slopes of the per-epsilon medians. Needs at least 3 epsilons and 10
/// seeds; a sweep whose medians include zero is reported as degenerate.
SweepFit fit_scaling(const EpsilonSweep& sweep);

/// Number of (seed, consecutive eps pair) where a sup gap grows by more than
/// the slack as eps decreases.
int monotonicity_violations(const EpsilonSweep& sweep, double slack);

/// Fit of log |Psi_t| = log K - alpha t over the tail half of the horizon.
struct StabilityEstimate {
  double k = 0.0;
  double alpha = 0.0;
  double residual = 0.0;  // max abs residual of the log fit
  /// alpha fitted on the last quarter over alpha on the third quarter.
  double rate_ratio = 0.0;
  bool exponential = false;
  std::string verdict;
};

/// Declared exponential when alpha > 0, alpha * (T/2) >= 1 and the rate does
/// not drift (rate_ratio >= 0.8). Algebraic decay fails the last two.
StabilityEstimate exponential_stability_estimate(const MatrixPath& psi);

/// eps^2 K sup|F|^2 / (2 alpha).
double cov_gap_bound(double epsilon, const StabilityEstimate& est, double sup_f_norm);

/// `epsilon,seed,sup_mean_gap,sup_cov_gap`.
void write_csv(std::ostream& os, const EpsilonSweep& sweep);

/// `epsilon,median_sup_mean_gap,median_sup_cov_gap`, then rows
/// `slope_mean,<slope>,` and `slope_cov,,<slope>` (empty when no fit).
void write_summary_csv(std::ostream& os, const EpsilonSweep& sweep, const SweepFit& fit);

}  // namespace kbstab
