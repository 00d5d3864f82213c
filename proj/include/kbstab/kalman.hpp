#pragma once

#include "kbstab/config.hpp"
#include "kbstab/propagate.hpp"
#include "kbstab/riccati.hpp"
#include "kbstab/simulate.hpp"

#include <memory>
#include <ostream>
#include <vector>

namespace kbstab {

/// Everything about a Kalman-Bucy filter that does not depend on the
/// observations: the covariance path, the closed-loop propagator and the
/// per-step update matrices. Shared read-only across Monte Carlo runs.
///
/// The mean update over [t_k, t_{k+1}] is
///
///   x_{k+1} = S_k x_k + W_k dy_k,
///
/// where S_k is the RK4 step of z' = (A - P C^T R^{-1} C) z and
/// W_k = (S_k K_k + K_{k+1}) / 2 with K = P C^T R^{-1} is the trapezoid
/// weight of the gain transported to t_{k+1}.
struct FilterGains {
  RiccatiSolution riccati;
  MatrixPath psi;
  std::vector<MatrixXd> steps;
  std::vector<MatrixXd> weights;
};

std::shared_ptr<const FilterGains> make_filter_gains(const LtvModel& model, const MatrixXd& p0,
                                                     const TimeGrid& grid, double epsilon = 0.0);

struct FilterRun {
  MatrixXd mean;        // m x nodes
  MatrixXd innovation;  // n x steps; dy_k - C_k x_k dt
  VectorXd init_mean;
  std::shared_ptr<const FilterGains> gains;
  std::uint64_t seed = 0;

  const RiccatiSolution& riccati() const { return gains->riccati; }
  VectorXd at(std::size_t k) const { return mean.col(static_cast<long>(k)); }
};

/// Runs the mean equation on `obs` with precomputed gains. Deterministic
/// given (obs, init). Throws NumericalError naming the step on NaN/overflow.
FilterRun run_filter(const LtvModel& model, const ObservationPath& obs, const VectorXd& init_mean,
                     std::shared_ptr<const FilterGains> gains);

/// Convenience: builds gains for (init.cov, eps_gain) and runs the filter.
FilterRun run_filter(const LtvModel& model, const ObservationPath& obs, const GaussianInit& init,
                     double eps_gain = 0.0);

struct PairRun {
  FilterRun correct;
  FilterRun wrong;
  std::vector<double> gap_mean;  // |xhat - xbar|
  std::vector<double> gap_cov;   // |P - Pbar|
};

PairRun mismatched_pair(const LtvModel& model, const ObservationPath& obs, const GaussianInit& correct,
                        const GaussianInit& wrong);

/// Same, reusing precomputed gains for both filters.
PairRun mismatched_pair(const LtvModel& model, const ObservationPath& obs, const VectorXd& correct_mean,
                        std::shared_ptr<const FilterGains> correct_gains, const VectorXd& wrong_mean,
                        std::shared_ptr<const FilterGains> wrong_gains);

/// Decomposition of the mean gap as
///
///   xhat_t - xbar_t = Psibar_t (m0 - mbar) + Psibar_t Zhat_t,
///
/// with Zhat accumulated from the discrete innovation-driven increments
/// Psibar_{k+1}^{-1} [(S_k - Sbar_k) xhat_k + (W_k - Wbar_k) dy_k], the
/// discretization of int Psibar_s^{-1} (P_s - Pbar_s) C^T R^{-1} dnu_s.
struct MeanDecomposition {
  MatrixXd term1;  // m x nodes
  MatrixXd zhat;   // m x nodes
  MatrixXd term2;  // m x nodes
  std::vector<double> residual;
  double max_residual = 0.0;
  /// |Zhat_T - Zhat_{T/2}|, evidence that Zhat converges.
  double zhat_settling = 0.0;
  /// V_t = term1^T Pbar_t^{-1} term1, the Lyapunov function along term1.
  std::vector<double> lyapunov;
};

MeanDecomposition mean_decomposition_diagnostics(const LtvModel& model, const ObservationPath& obs,
                                                 const PairRun& pair);

/// V(z_t, t) = z_t^T P_t^{-1} z_t along z_t = Psi_t z0.
std::vector<double> lyapunov_trace(const MatrixPath& psi, const RiccatiSolution& riccati,
                                   const VectorXd& z0);

/// `t,gap_mean,gap_cov,term1,znorm,V`.
void write_csv(std::ostream& os, const PairRun& pair, const MeanDecomposition& dec,
               std::size_t stride = 1);

}  // namespace kbstab
