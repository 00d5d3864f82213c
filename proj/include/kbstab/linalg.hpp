#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace kbstab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Raised when a numerical routine cannot produce a trustworthy result
/// (singular matrix, blow-up, NaN).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

/// Largest singular value.
double spectral_norm(const MatrixXd& m);

/// Smallest eigenvalue of the symmetric part of `m`.
double min_eigenvalue(const MatrixXd& m);
double max_eigenvalue(const MatrixXd& m);

/// 2-norm condition number; infinity for singular input.
double condition_number(const MatrixXd& m);

/// Symmetric PSD square root. Negative eigenvalues are clamped to zero
/// before taking the root, so slightly indefinite input is accepted.
MatrixXd psd_sqrt(const MatrixXd& m);

/// Solves m * X = rhs; throws NumericalError if cond(m) exceeds `max_cond`.
MatrixXd checked_solve(const MatrixXd& m, const MatrixXd& rhs, double max_cond,
                       const std::string& what);

/// Cubic Hermite value at the midpoint of an interval of width h, given
/// endpoint values and derivatives. Fourth-order accurate.
inline MatrixXd hermite_midpoint(const MatrixXd& x0, const MatrixXd& x1, const MatrixXd& d0,
                                 const MatrixXd& d1, double h) {
  return 0.5 * (x0 + x1) + (h / 8.0) * (d0 - d1);
}

/// One classical RK4 step for the linear ODE z' = B(t) z, returned as the
/// step matrix. `b0`, `bm`, `b1` are B at the start, midpoint and end.
MatrixXd linear_rk4_step(const MatrixXd& b0, const MatrixXd& bm, const MatrixXd& b1, double h);

bool all_finite(const MatrixXd& m);

}  // namespace kbstab
