#include "kbstab/propagate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace kbstab {

namespace {

constexpr double kMaxCondition = 1e12;

MatrixXd sandwich_inverse(const MatrixXd& u, const MatrixXd& d, double t) {
  // U^{-T} D U^{-1} via two solves with U^T.
  const double cond = condition_number(u);
  if (!(cond <= kMaxCondition)) {
    throw NumericalError("propagator numerically singular at t=" + std::to_string(t) +
                         " (condition number " + std::to_string(cond) + ")");
  }
  const auto lu = u.transpose().partialPivLu();
  const MatrixXd x = lu.solve(d);                  // U^{-T} D
  const MatrixXd y = lu.solve(x.transpose());      // U^{-T} (U^{-T} D)^T = U^{-T} D^T U^{-1}
  return symmetrize(y.transpose());
}

}  // namespace

MatrixPath fundamental_matrix(const LtvModel& model, const TimeGrid& grid) {
  MatrixPath out;
  out.grid = grid;
  out.label = "Phi";
  out.values.reserve(grid.nodes());
  out.rates.reserve(grid.nodes());
  const double h = grid.dt;
  MatrixXd phi = MatrixXd::Identity(model.m, model.m);
  CoefficientCache coef(model);
  MatrixXd a0 = coef.at(0.0).A;
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t = grid.t(k);
    out.values.push_back(phi);
    out.rates.push_back(a0 * phi);
    const MatrixXd am = coef.at(t + 0.5 * h).A;
    const MatrixXd a1 = coef.at(grid.t(k + 1)).A;
    phi = linear_rk4_step(a0, am, a1, h) * phi;
    a0 = a1;
  }
  out.values.push_back(phi);
  out.rates.push_back(a0 * phi);
  return out;
}

std::vector<MatrixXd> closed_loop_steps(const LtvModel& model, const MatrixPath& riccati) {
  if (!riccati.has_rates()) throw std::invalid_argument("closed_loop_steps: riccati path needs rates");
  const TimeGrid& grid = riccati.grid;
  const double h = grid.dt;
  std::vector<MatrixXd> steps;
  steps.reserve(grid.steps);
  CoefficientCache coef(model);
  auto generator = [&](double t, const MatrixXd& p) {
    const Coefficients& c = coef.at(t);
    return MatrixXd(c.A - p * c.H);
  };
  MatrixXd b0 = generator(0.0, riccati[0]);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const MatrixXd bm = generator(grid.t(k) + 0.5 * h, riccati.midpoint(k));
    const MatrixXd b1 = generator(grid.t(k + 1), riccati[k + 1]);
    steps.push_back(linear_rk4_step(b0, bm, b1, h));
    b0 = b1;
  }
  return steps;
}

MatrixPath closed_loop_propagator(const LtvModel& model, const MatrixPath& riccati,
                                  const TimeGrid& grid) {
  if (!(riccati.grid == grid) || riccati.size() != grid.nodes()) {
    throw std::invalid_argument("closed_loop_propagator: riccati path is on a different grid");
  }
  const auto steps = closed_loop_steps(model, riccati);
  MatrixPath out;
  out.grid = grid;
  out.label = "Psi";
  out.values.reserve(grid.nodes());
  out.rates.reserve(grid.nodes());
  MatrixXd psi = MatrixXd::Identity(model.m, model.m);
  CoefficientCache coef(model);
  for (std::size_t k = 0; k <= grid.steps; ++k) {
    const Coefficients& c = coef.at(grid.t(k));
    out.values.push_back(psi);
    out.rates.push_back((c.A - riccati[k] * c.H) * psi);
    if (k < grid.steps) psi = steps[k] * psi;
  }
  return out;
}

MatrixPath accumulated_information(const LtvModel& model, const MatrixPath& propagator) {
  const TimeGrid& grid = propagator.grid;
  const double h = grid.dt;
  MatrixPath out;
  out.grid = grid;
  out.label = "Cbar";
  out.values.reserve(grid.nodes());
  out.rates.reserve(grid.nodes());
  CoefficientCache coef(model);
  auto integrand = [&](double t, const MatrixXd& u) {
    return MatrixXd(u.transpose() * coef.at(t).H * u);
  };
  const auto m = propagator[0].cols();
  MatrixXd acc = MatrixXd::Zero(m, m);
  MatrixXd f0 = integrand(0.0, propagator[0]);
  out.values.push_back(acc);
  out.rates.push_back(f0);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const MatrixXd fm = integrand(grid.t(k) + 0.5 * h, propagator.midpoint(k));
    const MatrixXd f1 = integrand(grid.t(k + 1), propagator[k + 1]);
    acc += (h / 6.0) * (f0 + 4.0 * fm + f1);
    acc = symmetrize(acc);
    out.values.push_back(acc);
    out.rates.push_back(f1);
    f0 = f1;
  }
  return out;
}

UcoEstimate window_gramians(const MatrixPath& information, const MatrixPath& propagator,
                            double window, WindowAnchor anchor, std::size_t stride, Exec exec) {
  const TimeGrid& grid = propagator.grid;
  const auto w = static_cast<std::size_t>(std::llround(window / grid.dt));
  if (w < 1) throw std::invalid_argument("window shorter than one grid step");
  if (w > grid.steps) throw std::invalid_argument("window longer than the horizon");
  stride = std::max<std::size_t>(1, stride);

  std::vector<std::size_t> anchors;
  const std::size_t first = anchor == WindowAnchor::end ? w : 0;
  const std::size_t last = anchor == WindowAnchor::end ? grid.steps : grid.steps - w;
  for (std::size_t k = first; k <= last; k += stride) anchors.push_back(k);
  if (anchors.back() != last) anchors.push_back(last);

  UcoEstimate est;
  est.window = static_cast<double>(w) * grid.dt;
  const auto count = static_cast<long>(anchors.size());
  est.times.resize(count);
  est.lambda_min.resize(count);
  est.lambda_max.resize(count);

  auto one = [&](long i) {
    const std::size_t k = anchors[i];
    const std::size_t lo = anchor == WindowAnchor::end ? k - w : k;
    const std::size_t hi = lo + w;
    const MatrixXd g = sandwich_inverse(propagator[k], information[hi] - information[lo], grid.t(k));
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
    est.times[i] = grid.t(k);
    est.lambda_min[i] = es.eigenvalues().minCoeff();
    est.lambda_max[i] = es.eigenvalues().maxCoeff();
  };

  if (exec == Exec::parallel) {
    // Exceptions may not leave an OpenMP region; capture the first one.
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) {
      try {
        one(i);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (long i = 0; i < count; ++i) one(i);
  }

  est.rho1 = *std::min_element(est.lambda_min.begin(), est.lambda_min.end());
  est.rho2 = *std::max_element(est.lambda_max.begin(), est.lambda_max.end());
  est.plausible = est.rho1 > 1e-10 * std::max(1.0, est.rho2);
  return est;
}

UcoEstimate uco_gramian(const LtvModel& model, const MatrixPath& phi, double window,
                        std::size_t stride, Exec exec) {
  const MatrixPath cbar = accumulated_information(model, phi);
  return window_gramians(cbar, phi, window, WindowAnchor::end, stride, exec);
}

UcoEstimate closed_loop_gramian(const LtvModel& model, const MatrixPath& psi, double window,
                                std::size_t stride, Exec exec) {
  const MatrixPath info = accumulated_information(model, psi);
  return window_gramians(info, psi, window, WindowAnchor::start, stride, exec);
}

PsiDecay psi_decay_integral(const MatrixPath& psi, int checkpoints) {
  const TimeGrid& grid = psi.grid;
  const double h = grid.dt;
  PsiDecay out;
  out.cumulative.grid = grid;
  out.cumulative.label = "PsiInt";
  const auto m = psi[0].cols();
  MatrixXd acc = MatrixXd::Zero(m, m);
  auto f = [](const MatrixXd& u) { return MatrixXd(u.transpose() * u); };
  MatrixXd f0 = f(psi[0]);
  out.cumulative.values.push_back(acc);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const MatrixXd f1 = f(psi[k + 1]);
    acc += (h / 6.0) * (f0 + 4.0 * f(psi.midpoint(k)) + f1);
    acc = symmetrize(acc);
    out.cumulative.values.push_back(acc);
    f0 = f1;
  }
  out.integral = acc;
  for (int j = 1; j <= checkpoints; ++j) {
    const std::size_t k = grid.steps * static_cast<std::size_t>(j) / static_cast<std::size_t>(checkpoints);
    const std::size_t half = k / 2;
    out.checkpoints.push_back(grid.t(k));
    out.tail_norms.push_back(spectral_norm(out.cumulative[k] - out.cumulative[half]));
  }
  return out;
}

MatrixXd psi_decay_bound(const MatrixXd& p0, double tau, double rho3) {
  const MatrixXd p_inv = checked_solve(p0, MatrixXd::Identity(p0.rows(), p0.cols()), 1e12,
                                       "psi_decay_bound: P");
  return symmetrize(p_inv * (tau / rho3));
}

}  // namespace kbstab
