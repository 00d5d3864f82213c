#include "kbstab/kalman.hpp"

#include <stdexcept>

namespace kbstab {

std::shared_ptr<const FilterGains> make_filter_gains(const LtvModel& model, const MatrixXd& p0,
                                                     const TimeGrid& grid, double epsilon) {
  auto gains = std::make_shared<FilterGains>();
  gains->riccati = integrate_dre(model, p0, grid, epsilon);
  gains->steps = closed_loop_steps(model, gains->riccati.path);
  gains->psi.grid = grid;
  gains->psi.label = "Psi";
  CoefficientCache coef(model);
  MatrixXd psi = MatrixXd::Identity(model.m, model.m);
  gains->weights.reserve(grid.steps);
  MatrixXd gain0 = gains->riccati[0] * coef.at(0.0).gain_factor;
  for (std::size_t k = 0; k <= grid.steps; ++k) {
    const Coefficients& c = coef.at(grid.t(k));
    gains->psi.values.push_back(psi);
    gains->psi.rates.push_back((c.A - gains->riccati[k] * c.H) * psi);
    if (k == grid.steps) break;
    const MatrixXd gain1 = gains->riccati[k + 1] * coef.at(grid.t(k + 1)).gain_factor;
    gains->weights.push_back(0.5 * (gains->steps[k] * gain0 + gain1));
    psi = gains->steps[k] * psi;
    gain0 = gain1;
  }
  return gains;
}

FilterRun run_filter(const LtvModel& model, const ObservationPath& obs, const VectorXd& init_mean,
                     std::shared_ptr<const FilterGains> gains) {
  const TimeGrid& grid = gains->riccati.grid();
  if (obs.grid.steps != grid.steps || obs.dy.rows() != model.n || init_mean.size() != model.m) {
    throw std::invalid_argument("run_filter: observation path does not match model or gains");
  }
  FilterRun run;
  run.init_mean = init_mean;
  run.seed = obs.seed;
  run.mean.resize(model.m, static_cast<long>(grid.nodes()));
  run.innovation.resize(model.n, static_cast<long>(grid.steps));
  CoefficientCache coef(model);
  VectorXd x = init_mean;
  run.mean.col(0) = x;
  const double h = grid.dt;
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const auto dy = obs.increment(k);
    run.innovation.col(static_cast<long>(k)) = dy - h * (coef.at(grid.t(k)).C * x);
    x = gains->steps[k] * x + gains->weights[k] * dy;
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e150) {
      throw NumericalError("filter mean non-finite or overflowing at step " + std::to_string(k + 1));
    }
    run.mean.col(static_cast<long>(k + 1)) = x;
  }
  run.gains = std::move(gains);
  return run;
}

FilterRun run_filter(const LtvModel& model, const ObservationPath& obs, const GaussianInit& init,
                     double eps_gain) {
  return run_filter(model, obs, init.mean, make_filter_gains(model, init.cov, obs.grid, eps_gain));
}

PairRun mismatched_pair(const LtvModel& model, const ObservationPath& obs, const VectorXd& correct_mean,
                        std::shared_ptr<const FilterGains> correct_gains, const VectorXd& wrong_mean,
                        std::shared_ptr<const FilterGains> wrong_gains) {
  PairRun pair;
  pair.correct = run_filter(model, obs, correct_mean, std::move(correct_gains));
  pair.wrong = run_filter(model, obs, wrong_mean, std::move(wrong_gains));
  const auto nodes = static_cast<std::size_t>(pair.correct.mean.cols());
  pair.gap_mean.reserve(nodes);
  pair.gap_cov.reserve(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto col = static_cast<long>(k);
    pair.gap_mean.push_back((pair.correct.mean.col(col) - pair.wrong.mean.col(col)).norm());
    pair.gap_cov.push_back(spectral_norm(pair.correct.riccati()[k] - pair.wrong.riccati()[k]));
  }
  return pair;
}

PairRun mismatched_pair(const LtvModel& model, const ObservationPath& obs, const GaussianInit& correct,
                        const GaussianInit& wrong) {
  auto correct_gains = make_filter_gains(model, correct.cov, obs.grid);
  auto wrong_gains = (wrong.cov - correct.cov).isZero(0.0)
                         ? correct_gains
                         : make_filter_gains(model, wrong.cov, obs.grid);
  return mismatched_pair(model, obs, correct.mean, correct_gains, wrong.mean, wrong_gains);
}

MeanDecomposition mean_decomposition_diagnostics(const LtvModel& model, const ObservationPath& obs,
                                                 const PairRun& pair) {
  const FilterGains& g = *pair.correct.gains;
  const FilterGains& gbar = *pair.wrong.gains;
  const TimeGrid& grid = g.riccati.grid();
  const auto m = model.m;
  const auto nodes = static_cast<long>(grid.nodes());
  MeanDecomposition out;
  out.term1.resize(m, nodes);
  out.zhat.resize(m, nodes);
  out.term2.resize(m, nodes);
  out.residual.reserve(grid.nodes());
  out.lyapunov.reserve(grid.nodes());

  const VectorXd d0 = pair.correct.init_mean - pair.wrong.init_mean;
  const bool same_gains = &g == &gbar;
  VectorXd z = VectorXd::Zero(m);
  for (long k = 0; k < nodes; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const MatrixXd& psibar = gbar.psi[uk];
    if (k > 0 && !same_gains) {
      const auto j = uk - 1;
      const VectorXd incr = (g.steps[j] - gbar.steps[j]) * pair.correct.mean.col(k - 1) +
                            (g.weights[j] - gbar.weights[j]) * obs.increment(j);
      z += checked_solve(psibar, incr, 1e12, "Psibar inversion at t=" + std::to_string(grid.t(uk)));
    }
    out.zhat.col(k) = z;
    out.term1.col(k) = psibar * d0;
    out.term2.col(k) = psibar * z;
    const VectorXd gap = pair.correct.mean.col(k) - pair.wrong.mean.col(k);
    const double r = (out.term1.col(k) + out.term2.col(k) - gap).norm();
    out.residual.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
    const VectorXd t1 = out.term1.col(k);
    const MatrixXd& pbar = gbar.riccati[uk];
    out.lyapunov.push_back(d0.isZero(0.0) ? 0.0 : t1.dot(pbar.ldlt().solve(t1)));
  }
  out.zhat_settling = (out.zhat.col(nodes - 1) - out.zhat.col((nodes - 1) / 2)).norm();
  return out;
}

std::vector<double> lyapunov_trace(const MatrixPath& psi, const RiccatiSolution& riccati,
                                   const VectorXd& z0) {
  std::vector<double> v;
  v.reserve(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const VectorXd z = psi[k] * z0;
    v.push_back(z.dot(riccati[k].ldlt().solve(z)));
  }
  return v;
}

void write_csv(std::ostream& os, const PairRun& pair, const MeanDecomposition& dec, std::size_t stride) {
  const TimeGrid& grid = pair.correct.riccati().grid();
  os << "t,gap_mean,gap_cov,term1,znorm,V\n";
  stride = std::max<std::size_t>(1, stride);
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    if (k % stride != 0 && k + 1 != grid.nodes()) continue;
    const auto col = static_cast<long>(k);
    os << fmt_g17(grid.t(k)) << "," << fmt_g17(pair.gap_mean[k]) << "," << fmt_g17(pair.gap_cov[k])
       << "," << fmt_g17(dec.term1.col(col).norm()) << "," << fmt_g17(dec.zhat.col(col).norm()) << ","
       << fmt_g17(dec.lyapunov[k]) << "\n";
  }
}

}  // namespace kbstab
