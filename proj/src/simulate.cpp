#include "kbstab/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace kbstab {

InitialDraw draw_initial_state(const GaussianInit& init, const AtomSet& atoms, RngStream& rng) {
  InitialDraw out;
  const MatrixXd root = psd_sqrt(init.cov);
  out.x0 = init.mean + root * rng.normals(init.mean.size());
  if (!atoms.empty()) {
    const double u = rng.uniform();
    double cum = 0.0;
    out.atom = atoms.size() - 1;
    for (int i = 0; i < atoms.size(); ++i) {
      cum += atoms.weights(i);
      if (u < cum) {
        out.atom = i;
        break;
      }
    }
    out.x0 += atoms.points.row(out.atom).transpose();
  }
  return out;
}

StateTrajectory simulate_truth(const LtvModel& model, const VectorXd& x0, const TimeGrid& fine,
                               double epsilon, RngStream& rng) {
  if (epsilon < 0.0) throw std::invalid_argument("simulate_truth: epsilon must be nonnegative");
  StateTrajectory out;
  out.fine = fine;
  out.epsilon = epsilon;
  out.states.resize(model.m, static_cast<long>(fine.nodes()));
  out.states.col(0) = x0;
  const double h = fine.dt;
  CoefficientCache coef(model);
  VectorXd x = x0;
  if (epsilon == 0.0) {
    for (std::size_t j = 0; j < fine.steps; ++j) {
      const double t = fine.t(j);
      const VectorXd k1 = coef.at(t).A * x;
      const VectorXd k2 = coef.at(t + 0.5 * h).A * (x + 0.5 * h * k1);
      const VectorXd k3 = coef.at(t + 0.5 * h).A * (x + 0.5 * h * k2);
      const VectorXd k4 = coef.at(fine.t(j + 1)).A * (x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out.states.col(static_cast<long>(j + 1)) = x;
    }
  } else {
    const double scale = epsilon * std::sqrt(h);
    for (std::size_t j = 0; j < fine.steps; ++j) {
      const Coefficients& c = coef.at(fine.t(j));
      const VectorXd drift = c.A * x;
      x += h * drift + scale * (c.F * rng.normals(model.m));
      out.states.col(static_cast<long>(j + 1)) = x;
    }
  }
  return out;
}

ObservationPath simulate_observations(const LtvModel& model, const StateTrajectory& truth,
                                      int substeps, RngStream& rng, ObservationNoise noise) {
  if (substeps < 1) throw std::invalid_argument("simulate_observations: substeps must be positive");
  const TimeGrid& fine = truth.fine;
  if (fine.steps % static_cast<std::size_t>(substeps) != 0)
    throw std::invalid_argument("simulate_observations: fine grid not a multiple of substeps");
  ObservationPath obs;
  obs.grid = {fine.dt * substeps, fine.steps / static_cast<std::size_t>(substeps)};
  obs.substeps = substeps;
  obs.epsilon = truth.epsilon;
  obs.seed = rng.seed();
  obs.dy = MatrixXd::Zero(model.n, static_cast<long>(obs.grid.steps));
  obs.truth.resize(model.m, static_cast<long>(obs.grid.nodes()));
  obs.x0 = truth.states.col(0);

  const double h = fine.dt;
  const double root_h = std::sqrt(h);
  const bool smooth = truth.epsilon == 0.0;
  CoefficientCache coef(model);
  MatrixXd sqrt_r;
  double sqrt_r_time = -1.0;
  const bool invariant = model.time_invariant();

  // Drift and observation at the left end of the current fine interval.
  VectorXd ax0 = coef.at(0.0).A * truth.states.col(0);
  VectorXd cx0 = coef.at(0.0).C * truth.states.col(0);
  for (std::size_t k = 0; k < obs.grid.steps; ++k) {
    obs.truth.col(static_cast<long>(k)) = truth.states.col(static_cast<long>(k * substeps));
    VectorXd acc = VectorXd::Zero(model.n);
    for (int s = 0; s < substeps; ++s) {
      const std::size_t j = k * static_cast<std::size_t>(substeps) + static_cast<std::size_t>(s);
      const double t = fine.t(j);
      const auto x0 = truth.states.col(static_cast<long>(j));
      if (smooth) {
        const auto x1 = truth.states.col(static_cast<long>(j + 1));
        const Coefficients& c1 = coef.at(fine.t(j + 1));
        VectorXd ax1 = c1.A * x1;
        VectorXd cx1 = c1.C * x1;
        const VectorXd xm = 0.5 * (x0 + x1) + (h / 8.0) * (ax0 - ax1);
        acc += (h / 6.0) * (cx0 + 4.0 * (coef.at(t + 0.5 * h).C * xm) + cx1);
        ax0 = std::move(ax1);
        cx0 = std::move(cx1);
      } else {
        acc += h * (coef.at(t).C * x0);
      }
      if (noise == ObservationNoise::standard) {
        if (sqrt_r.size() == 0 || (!invariant && sqrt_r_time != t)) {
          sqrt_r = psd_sqrt(coef.at(t).R);
          sqrt_r_time = t;
        }
        acc += root_h * (sqrt_r * rng.normals(model.n));
      }
    }
    obs.dy.col(static_cast<long>(k)) = acc;
  }
  obs.truth.col(static_cast<long>(obs.grid.steps)) = truth.states.col(static_cast<long>(fine.steps));
  return obs;
}

ObservationPath generate_observations(const LtvModel& model, const SimulationSpec& spec,
                                      std::uint64_t seed) {
  RngStream x0_rng(seed, "x0");
  RngStream v_rng(seed, "V");
  RngStream w_rng(seed, "W");
  const InitialDraw draw = draw_initial_state(spec.init, spec.atoms, x0_rng);
  const TimeGrid fine{spec.grid.dt / spec.substeps,
                      spec.grid.steps * static_cast<std::size_t>(spec.substeps)};
  const StateTrajectory truth = simulate_truth(model, draw.x0, fine, spec.epsilon, v_rng);
  ObservationPath obs = simulate_observations(model, truth, spec.substeps, w_rng, spec.noise);
  obs.grid = spec.grid;  // identical up to rounding of dt; keep the caller's grid
  obs.seed = seed;
  obs.atom = draw.atom;
  return obs;
}

void write_csv(std::ostream& os, const ObservationPath& obs) {
  os << "# seed=" << obs.seed << " epsilon=" << fmt_g17(obs.epsilon) << " substeps=" << obs.substeps
     << "\n";
  os << "t";
  for (long i = 0; i < obs.dy.rows(); ++i) os << ",dy_" << i + 1;
  for (long i = 0; i < obs.truth.rows(); ++i) os << ",x_" << i + 1;
  os << "\n";
  for (std::size_t k = 0; k < obs.grid.nodes(); ++k) {
    os << fmt_g17(obs.grid.t(k));
    for (long i = 0; i < obs.dy.rows(); ++i)
      os << "," << fmt_g17(k == 0 ? 0.0 : obs.dy(i, static_cast<long>(k - 1)));
    for (long i = 0; i < obs.truth.rows(); ++i) os << "," << fmt_g17(obs.truth(i, static_cast<long>(k)));
    os << "\n";
  }
}

}  // namespace kbstab
