#include "kbstab/linalg.hpp"

#include <cmath>
#include <limits>

namespace kbstab {

double spectral_norm(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double min_eigenvalue(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double condition_number(const MatrixXd& m) {
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

MatrixXd psd_sqrt(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(m));
  VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const MatrixXd& v = es.eigenvectors();
  return symmetrize(v * roots.asDiagonal() * v.transpose());
}

MatrixXd checked_solve(const MatrixXd& m, const MatrixXd& rhs, double max_cond,
                       const std::string& what) {
  const double cond = condition_number(m);
  if (!(cond <= max_cond)) {
    throw NumericalError(what + ": condition number " + std::to_string(cond) + " exceeds " +
                         std::to_string(max_cond));
  }
  return m.partialPivLu().solve(rhs);
}

MatrixXd linear_rk4_step(const MatrixXd& b0, const MatrixXd& bm, const MatrixXd& b1, double h) {
  const auto n = b0.rows();
  const MatrixXd eye = MatrixXd::Identity(n, n);
  const MatrixXd k1 = b0;
  const MatrixXd k2 = bm * (eye + 0.5 * h * k1);
  const MatrixXd k3 = bm * (eye + 0.5 * h * k2);
  const MatrixXd k4 = b1 * (eye + h * k3);
  return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool all_finite(const MatrixXd& m) { return m.allFinite(); }

}  // namespace kbstab
