#pragma once

#include "kbstab/matrix_path.hpp"
#include "kbstab/model.hpp"

#include <vector>

namespace kbstab {

/// Execution policy for kernels that have an OpenMP variant. Both policies
/// produce bitwise-identical results; the serial path is the reference.
enum class Exec { serial, parallel };

/// Phi' = A(t) Phi, Phi_0 = I, by fixed-step RK4 on the grid.
MatrixPath fundamental_matrix(const LtvModel& model, const TimeGrid& grid);

/// One-step RK4 matrices of z' = (A - P C^T R^{-1} C) z over each grid
/// interval. `riccati` must carry rates so that P can be interpolated at
/// interval midpoints.
std::vector<MatrixXd> closed_loop_steps(const LtvModel& model, const MatrixPath& riccati);

/// Psi^P on the grid, Psi_0 = I, as the running product of closed_loop_steps.
/// Throws std::invalid_argument if riccati lives on a different grid.
MatrixPath closed_loop_propagator(const LtvModel& model, const MatrixPath& riccati,
                                  const TimeGrid& grid);

/// Running integral of U_s^T C_s^T R_s^{-1} C_s U_s for a propagator path
/// U (Phi gives Cbar; Psi gives the closed-loop information). Per-interval
/// Simpson with Hermite midpoints, so fourth-order when U carries rates.
MatrixPath accumulated_information(const LtvModel& model, const MatrixPath& propagator);

enum class WindowAnchor {
  /// Window [t - tau, t], normalized by U_t: the observability Gramian form.
  end,
  /// Window [t, t + tau], normalized by U_t: the Lyapunov-decrease form.
  start,
};

struct UcoEstimate {
  double window = 0.0;
  std::vector<double> times;  // window-end (or start) times
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;
  double rho1 = 0.0;
  double rho2 = 0.0;
  /// rho1 > 0 on the sampled windows. A finite-horizon estimate only.
  bool plausible = false;
};

/// Window Gramians U_a^{-T} (I_{b} - I_{a'}) U_a^{-1} where I is the
/// accumulated information of U and a is the anchor node. Windows are
/// taken every `stride` nodes. Throws NumericalError when U at an anchor
/// has condition number above 1e12.
UcoEstimate window_gramians(const MatrixPath& information, const MatrixPath& propagator,
                            double window, WindowAnchor anchor, std::size_t stride = 1,
                            Exec exec = Exec::serial);

/// Observability Gramian estimate for [A, C] from Phi.
UcoEstimate uco_gramian(const LtvModel& model, const MatrixPath& phi, double window,
                        std::size_t stride = 1, Exec exec = Exec::serial);

/// Closed-loop Gramian of [A - P C^T R^{-1} C, C] over forward windows
/// [t, t + tau]; its floor is the constant in V(z_t) - V(z_{t+tau}) >= rho3 |z_t|^2.
UcoEstimate closed_loop_gramian(const LtvModel& model, const MatrixPath& psi, double window,
                                std::size_t stride = 1, Exec exec = Exec::serial);

struct PsiDecay {
  MatrixXd integral;     // int_0^T Psi^T Psi
  MatrixPath cumulative; // int_0^t Psi^T Psi on the grid
  std::vector<double> checkpoints;
  std::vector<double> tail_norms;  // |int_{t/2}^{t} Psi^T Psi| at each checkpoint
};

PsiDecay psi_decay_integral(const MatrixPath& psi, int checkpoints = 10);

/// tau P^{-1} / rho3, the upper bound on int_0^inf Psi^T Psi.
MatrixXd psi_decay_bound(const MatrixXd& p0, double tau, double rho3);

}  // namespace kbstab
