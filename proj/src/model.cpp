#include "kbstab/model.hpp"

#include <cmath>
#include <sstream>

namespace kbstab {

std::string to_string(Family f) {
  switch (f) {
    case Family::constant:
      return "constant";
    case Family::periodic:
      return "periodic";
    case Family::rotation_damped:
      return "rotation_damped";
  }
  return "constant";
}

Family family_from_string(const std::string& s) {
  if (s == "constant") return Family::constant;
  if (s == "periodic") return Family::periodic;
  if (s == "rotation_damped") return Family::rotation_damped;
  throw ModelError("unknown model family '" + s + "'");
}

namespace {

void fill_default(MatrixXd& x, int rows, int cols) {
  if (x.size() == 0) x = MatrixXd::Zero(rows, cols);
}

void require_shape(const MatrixXd& x, int rows, int cols, const char* name) {
  if (x.rows() != rows || x.cols() != cols) {
    std::ostringstream os;
    os << "dimension mismatch: " << name << " is " << x.rows() << "x" << x.cols() << ", expected "
       << rows << "x" << cols;
    throw ModelError(os.str());
  }
}

}  // namespace

void LtvModel::finalize() {
  if (m <= 0 || n <= 0) throw ModelError("dimensions m and n must be positive");
  if (family == Family::rotation_damped) {
    if (m != 2) throw ModelError("rotation_damped family requires m = 2");
    A0.resize(2, 2);
    A0 << -damping, omega, -omega, -damping;
  }
  fill_default(A0, m, m);
  fill_default(A1, m, m);
  fill_default(C0, n, m);
  fill_default(C1, n, m);
  if (R0.size() == 0) R0 = MatrixXd::Identity(n, n);
  fill_default(R1, n, n);
  fill_default(F0, m, m);
  fill_default(F1, m, m);
  require_shape(A0, m, m, "A0");
  require_shape(A1, m, m, "A1");
  require_shape(C0, n, m, "C0");
  require_shape(C1, n, m, "C1");
  require_shape(R0, n, n, "R0");
  require_shape(R1, n, n, "R1");
  require_shape(F0, m, m, "F0");
  require_shape(F1, m, m, "F1");
}

bool LtvModel::time_invariant() const {
  if (family != Family::periodic) return true;
  return A1.isZero(0.0) && C1.isZero(0.0) && R1.isZero(0.0) && F1.isZero(0.0);
}

Coefficients LtvModel::eval(double t) const {
  if (!(t >= 0.0)) throw ModelError("coefficient evaluation at negative time t=" + std::to_string(t));
  Coefficients c;
  if (family == Family::periodic) {
    const double s = std::sin(omega * t);
    c.A = A0 + s * A1;
    c.C = C0 + s * C1;
    c.R = R0 + s * R1;
    c.F = F0 + s * F1;
  } else {
    c.A = A0;
    c.C = C0;
    c.R = R0;
    c.F = F0;
  }
  c.R = symmetrize(c.R);
  Eigen::LLT<MatrixXd> llt(c.R);
  if (llt.info() != Eigen::Success) {
    throw ModelError("R(t) is not symmetric positive definite at t=" + std::to_string(t));
  }
  c.R_inv = symmetrize(llt.solve(MatrixXd::Identity(n, n)));
  c.gain_factor = c.C.transpose() * c.R_inv;
  c.H = symmetrize(c.gain_factor * c.C);
  return c;
}

LtvModel LtvModel::constant(const MatrixXd& A, const MatrixXd& C, const MatrixXd& R) {
  return constant(A, C, R, MatrixXd::Zero(A.rows(), A.rows()));
}

LtvModel LtvModel::constant(const MatrixXd& A, const MatrixXd& C, const MatrixXd& R,
                            const MatrixXd& F) {
  LtvModel model;
  model.m = static_cast<int>(A.rows());
  model.n = static_cast<int>(C.rows());
  model.family = Family::constant;
  model.A0 = A;
  model.C0 = C;
  model.R0 = R;
  model.F0 = F;
  model.finalize();
  return model;
}

LtvModel LtvModel::rotation(double omega, double damping, const MatrixXd& C, const MatrixXd& R) {
  LtvModel model;
  model.m = 2;
  model.n = static_cast<int>(C.rows());
  model.family = Family::rotation_damped;
  model.omega = omega;
  model.damping = damping;
  model.C0 = C;
  model.R0 = R;
  model.finalize();
  return model;
}

LtvModel LtvModel::periodic(const MatrixXd& A0, const MatrixXd& A1, double omega,
                            const MatrixXd& C0, const MatrixXd& R0) {
  LtvModel model;
  model.m = static_cast<int>(A0.rows());
  model.n = static_cast<int>(C0.rows());
  model.family = Family::periodic;
  model.A0 = A0;
  model.A1 = A1;
  model.omega = omega;
  model.C0 = C0;
  model.R0 = R0;
  model.finalize();
  return model;
}

LtvModel LtvModel::scalar(double a, double c, double r, double f) {
  return constant(MatrixXd::Constant(1, 1, a), MatrixXd::Constant(1, 1, c),
                  MatrixXd::Constant(1, 1, r), MatrixXd::Constant(1, 1, f));
}

CoefficientCache::CoefficientCache(const LtvModel& model)
    : model_(&model), invariant_(model.time_invariant()) {}

const Coefficients& CoefficientCache::at(double t) {
  if (filled_ && (invariant_ || t == last_t_)) return value_;
  value_ = model_->eval(t);
  last_t_ = t;
  filled_ = true;
  return value_;
}

}  // namespace kbstab
