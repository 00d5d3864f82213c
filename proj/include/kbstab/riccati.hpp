#pragma once

#include "kbstab/matrix_path.hpp"
#include "kbstab/model.hpp"

#include <string>
#include <vector>

namespace kbstab {

/// Solution of
///
///   P' = A P + P A^T - P C^T R^{-1} C P + eps^2 F F^T,   P_0 = init,
///
/// on a grid. eps = 0 is the noise-free filter covariance.
struct RiccatiSolution {
  MatrixPath path;  // carries rates (the right-hand side at each node)
  MatrixXd init;
  double epsilon = 0.0;
  std::vector<double> min_eig;
  bool symmetrized = true;
  /// Non-fatal findings, e.g. an eigenvalue below -1e-10.
  std::vector<std::string> diagnostics;

  const MatrixXd& operator[](std::size_t k) const { return path[k]; }
  const TimeGrid& grid() const { return path.grid; }
};

/// Fixed-step RK4 with symmetrization after every step. Throws
/// NumericalError naming t if the solution exceeds 1e12 in norm.
RiccatiSolution integrate_dre(const LtvModel& model, const MatrixXd& p0, const TimeGrid& grid,
                              double epsilon = 0.0);

/// Exact noise-free solution P_t = Phi sqrt(P0) (I + sqrt(P0) Cbar sqrt(P0))^{-1} sqrt(P0) Phi^T.
MatrixPath closed_form_dre(const MatrixXd& p0, const MatrixPath& phi, const MatrixPath& cbar);

struct FactorizationCheck {
  std::vector<double> residual;  // per node
  double max_residual = 0.0;
  RiccatiSolution first;
  RiccatiSolution second;
  MatrixPath psi_first;
  MatrixPath psi_second;
};

/// Compares P^P - P^Pbar with Psi^P (P - Pbar) (Psi^Pbar)^T node by node.
FactorizationCheck error_factorization_check(const LtvModel& model, const MatrixXd& p,
                                             const MatrixXd& pbar, const TimeGrid& grid);

struct CovarianceGap {
  std::vector<double> norm;     // |Q^eps_t - P^Q_t| (spectral)
  std::vector<double> min_eig;  // smallest eigenvalue of the gap
  double sup = 0.0;
  /// Gap PSD within -1e-10 at every node.
  bool psd = true;
};

/// Throws std::invalid_argument on grid or initial-condition mismatch.
CovarianceGap covariance_gap(const RiccatiSolution& q_eps, const RiccatiSolution& p);

}  // namespace kbstab
