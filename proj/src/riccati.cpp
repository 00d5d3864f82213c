#include "kbstab/riccati.hpp"

#include "kbstab/propagate.hpp"

#include <stdexcept>

namespace kbstab {

namespace {

constexpr double kBlowUp = 1e12;
constexpr double kEigFloor = -1e-10;

}  // namespace

RiccatiSolution integrate_dre(const LtvModel& model, const MatrixXd& p0, const TimeGrid& grid,
                              double epsilon) {
  RiccatiSolution sol;
  sol.init = p0;
  sol.epsilon = epsilon;
  sol.path.grid = grid;
  sol.path.label = epsilon == 0.0 ? "P" : "Q";
  sol.path.values.reserve(grid.nodes());
  sol.path.rates.reserve(grid.nodes());
  sol.min_eig.reserve(grid.nodes());

  CoefficientCache coef(model);
  const double eps2 = epsilon * epsilon;
  auto rhs = [&](double t, const MatrixXd& p) {
    const Coefficients& c = coef.at(t);
    MatrixXd ap = c.A * p;
    MatrixXd out = ap + ap.transpose() - p * c.H * p;
    if (eps2 != 0.0) out += eps2 * c.F * c.F.transpose();
    return out;
  };

  const double h = grid.dt;
  MatrixXd p = symmetrize(p0);
  bool warned = false;
  auto record = [&](std::size_t k, const MatrixXd& f) {
    sol.path.values.push_back(p);
    sol.path.rates.push_back(symmetrize(f));
    const double lmin = min_eigenvalue(p);
    sol.min_eig.push_back(lmin);
    if (lmin < kEigFloor && !warned) {
      sol.diagnostics.push_back("eigenvalue " + std::to_string(lmin) + " below -1e-10 at t=" +
                                std::to_string(grid.t(k)));
      warned = true;
    }
  };

  MatrixXd k1 = rhs(0.0, p);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t = grid.t(k);
    record(k, k1);
    const MatrixXd k2 = rhs(t + 0.5 * h, p + 0.5 * h * k1);
    const MatrixXd k3 = rhs(t + 0.5 * h, p + 0.5 * h * k2);
    const MatrixXd k4 = rhs(grid.t(k + 1), p + h * k3);
    p = symmetrize(p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    if (!p.allFinite() || p.norm() > kBlowUp) {
      throw NumericalError("Riccati solution blew up at t=" + std::to_string(grid.t(k + 1)));
    }
    k1 = rhs(grid.t(k + 1), p);
  }
  record(grid.steps, k1);
  return sol;
}

MatrixPath closed_form_dre(const MatrixXd& p0, const MatrixPath& phi, const MatrixPath& cbar) {
  if (!(phi.grid == cbar.grid)) throw std::invalid_argument("closed_form_dre: grid mismatch");
  const MatrixXd root = psd_sqrt(p0);
  const auto m = p0.rows();
  const MatrixXd eye = MatrixXd::Identity(m, m);
  MatrixPath out;
  out.grid = phi.grid;
  out.label = "P";
  out.values.reserve(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const MatrixXd inner = eye + root * cbar[k] * root;
    const MatrixXd core = checked_solve(inner, root, 1e12,
                                        "closed_form_dre at t=" + std::to_string(phi.grid.t(k)));
    out.values.push_back(symmetrize(phi[k] * root * core * phi[k].transpose()));
  }
  return out;
}

FactorizationCheck error_factorization_check(const LtvModel& model, const MatrixXd& p,
                                             const MatrixXd& pbar, const TimeGrid& grid) {
  FactorizationCheck out;
  out.first = integrate_dre(model, p, grid);
  out.second = integrate_dre(model, pbar, grid);
  out.psi_first = closed_loop_propagator(model, out.first.path, grid);
  out.psi_second = closed_loop_propagator(model, out.second.path, grid);
  const MatrixXd d0 = p - pbar;
  out.residual.reserve(grid.nodes());
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    const MatrixXd direct = out.first[k] - out.second[k];
    const MatrixXd factored = out.psi_first[k] * d0 * out.psi_second[k].transpose();
    const double r = spectral_norm(direct - factored);
    out.residual.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

CovarianceGap covariance_gap(const RiccatiSolution& q_eps, const RiccatiSolution& p) {
  if (!(q_eps.grid() == p.grid())) throw std::invalid_argument("covariance_gap: grid mismatch");
  if (q_eps.init.rows() != p.init.rows() || !(q_eps.init - p.init).isZero(0.0)) {
    throw std::invalid_argument("covariance_gap: initial conditions differ");
  }
  CovarianceGap gap;
  gap.norm.reserve(p.path.size());
  gap.min_eig.reserve(p.path.size());
  for (std::size_t k = 0; k < p.path.size(); ++k) {
    const MatrixXd d = q_eps[k] - p[k];
    const double norm = spectral_norm(d);
    const double lmin = min_eigenvalue(d);
    gap.norm.push_back(norm);
    gap.min_eig.push_back(lmin);
    gap.sup = std::max(gap.sup, norm);
    if (lmin < kEigFloor) gap.psd = false;
  }
  return gap;
}

}  // namespace kbstab
