#pragma once

#include "kbstab/kalman.hpp"

#include <memory>
#include <ostream>
#include <vector>

namespace kbstab {

/// Gaussian part and coupling terms of the optimal filter for
/// x0 = v0 + xbar0 with xbar0 ~ N(m', P') and v0 independent of xbar0.
///
/// Component means are m~_t + G_t x with G = Phi + S. Time integrals in b~,
/// Q and M use the trapezoid rule on grid nodes, matching the discrete
/// likelihood of bank_oracle term by term.
struct ExtendedSystem {
  FilterRun reference;  // m~ (mean) and P~ (riccati) with init (m', P')
  MatrixPath phi;
  MatrixPath g;         // Phi + S, equal to Psi^{P'}
  MatrixPath s;
  MatrixPath q;
  MatrixPath m;
  MatrixPath exponent;  // Q - M
  MatrixXd btilde;      // m x nodes

  const TimeGrid& grid() const { return phi.grid; }
};

ExtendedSystem integrate_extended_system(const LtvModel& model, const ObservationPath& obs,
                                         const GaussianInit& init);

/// Posterior path of a finite Gaussian mixture whose components share the
/// covariance path of `gains`.
struct MixturePath {
  TimeGrid grid;
  MatrixXd atoms;                       // k x m
  MatrixXd log_weights;                 // k x nodes, normalized
  std::vector<MatrixXd> component_means;  // per node, m x k
  MatrixXd mean;                        // m x nodes
  std::vector<MatrixXd> cov;            // per node
  std::shared_ptr<const FilterGains> gains;

  VectorXd weights(std::size_t k) const;
  const MatrixXd& component_cov(std::size_t k) const { return gains->riccati[k]; }
};

/// log w_i = log pi_i + x_i^T (Q - M) x_i / 2 + x_i^T b~, normalized by
/// logsumexp. Throws std::invalid_argument unless atoms are nonempty with
/// weights summing to 1, NumericalError on NaN weights.
MixturePath mixture_filter(const ExtendedSystem& ext, const AtomSet& atoms);

MixturePath mixture_filter(const LtvModel& model, const ObservationPath& obs, const AtomSet& atoms,
                           const GaussianInit& init);

/// Static multiple-model bank: one Kalman-Bucy filter per atom with init
/// (m' + x_i, P'), weighted by its discrete observation likelihood. Used as
/// the independent reference for mixture_filter. Components run in parallel
/// under Exec::parallel; normalization is serial.
MixturePath bank_oracle(const LtvModel& model, const ObservationPath& obs, const AtomSet& atoms,
                        const GaussianInit& init, Exec exec = Exec::serial);

/// Distance between the mixture posterior and a Gaussian filter run with
/// init (mbar, Pbar), through the mean and the expectations of
/// g_a(x) = cos(a^T x) for each row a of `frequencies`.
struct MergingReport {
  MatrixXd frequencies;  // q x m
  VectorXd ref_mean;
  MatrixXd ref_cov;
  std::vector<double> mean_gap;
  MatrixXd cos_gap;  // q x nodes
  double early_time = 1.0;
  /// gap(T) / gap(early_time); 0 when both vanish, infinity when only the early gap does.
  double mean_ratio = 0.0;
  VectorXd cos_ratio;
};

MergingReport merging_report(const MixturePath& mixture, const FilterRun& reference,
                             const MatrixXd& frequencies, double early_time = 1.0);

/// E cos(a^T X) for X ~ sum_i w_i N(mu_i, cov). Weights are renormalized so
/// that a = 0 gives exactly 1.
double mixture_cosine(const VectorXd& a, const MatrixXd& means, const VectorXd& weights,
                      const MatrixXd& cov);

/// `t,mean_gap,gap_cos_a1,...,w_1..w_k`.
void write_csv(std::ostream& os, const MixturePath& mixture, const MergingReport& report,
               std::size_t stride = 1);

}  // namespace kbstab
