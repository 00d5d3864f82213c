#pragma once

#include "kbstab/linalg.hpp"

#include <stdexcept>
#include <string>

namespace kbstab {

/// Raised for invalid model parameters or coefficient evaluations (for
/// instance a singular observation-noise covariance at some t).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { constant, periodic, rotation_damped };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// Coefficient values at one instant. `H` is the information rate
/// C^T R^{-1} C and `gain_factor` is C^T R^{-1}; both are cached because
/// every filter step needs them.
struct Coefficients {
  MatrixXd A;
  MatrixXd C;
  MatrixXd R;
  MatrixXd R_inv;
  MatrixXd F;
  MatrixXd H;
  MatrixXd gain_factor;
};

/// Linear time-varying model
///
///   dx = A(t) x dt + eps F(t) dV,     dy = C(t) x dt + R(t)^{1/2} dW.
///
/// Three coefficient families are built in:
///   constant         A(t) = A0, C(t) = C0, R(t) = R0, F(t) = F0
///   periodic         X(t) = X0 + sin(omega t) X1 for X in {A, C, R, F}
///   rotation_damped  m = 2, A = [[-d, omega], [-omega, -d]], C, R, F constant
///
/// A negative damping d makes the rotation family expanding.
struct LtvModel {
  int m = 1;
  int n = 1;
  Family family = Family::constant;
  MatrixXd A0, A1;
  MatrixXd C0, C1;
  MatrixXd R0, R1;
  MatrixXd F0, F1;
  double omega = 1.0;
  double damping = 0.0;
  /// Upper bound on coefficient entry magnitudes over the sampled grid.
  double bound = 1e6;

  /// Fills unset matrices with their defaults (A1, C1, R1, F1, F0 zero;
  /// R0 identity) and checks shapes. Throws ModelError on mismatch.
  void finalize();

  bool time_invariant() const;

  /// Throws ModelError for t < 0 or when R(t) is not symmetric positive
  /// definite.
  Coefficients eval(double t) const;

  static LtvModel constant(const MatrixXd& A, const MatrixXd& C, const MatrixXd& R);
  static LtvModel constant(const MatrixXd& A, const MatrixXd& C, const MatrixXd& R,
                           const MatrixXd& F);
  static LtvModel rotation(double omega, double damping, const MatrixXd& C, const MatrixXd& R);
  static LtvModel periodic(const MatrixXd& A0, const MatrixXd& A1, double omega, const MatrixXd& C0,
                           const MatrixXd& R0);
  static LtvModel scalar(double a, double c, double r, double f = 0.0);
};

/// Evaluates coefficients once for time-invariant models and on demand
/// otherwise. Not thread-safe; create one per thread.
class CoefficientCache {
 public:
  explicit CoefficientCache(const LtvModel& model);
  const Coefficients& at(double t);

 private:
  const LtvModel* model_;
  bool invariant_;
  bool filled_ = false;
  double last_t_ = -1.0;
  Coefficients value_;
};

}  // namespace kbstab
