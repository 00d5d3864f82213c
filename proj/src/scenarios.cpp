#include "kbstab/scenarios.hpp"

#include "kbstab/rng.hpp"

namespace kbstab::scenarios {

namespace {

GaussianInit gaussian(const VectorXd& mean, const MatrixXd& cov) { return {mean, cov}; }

GaussianInit scalar_init(double mean, double var) {
  return gaussian(VectorXd::Constant(1, mean), MatrixXd::Constant(1, 1, var));
}

}  // namespace

LtvModel random_walk() { return LtvModel::scalar(0.0, 1.0, 1.0); }

LtvModel scalar_unstable(double a, double f) { return LtvModel::scalar(a, 1.0, 1.0, f); }

LtvModel rotation_expanding() {
  return LtvModel::rotation(1.0, -0.3, (MatrixXd(1, 2) << 1.0, 0.0).finished(), MatrixXd::Identity(1, 1));
}

ExperimentConfig scalar_mean_config() {
  ExperimentConfig cfg;
  cfg.model = scalar_unstable();
  cfg.horizon = 50.0;
  cfg.true_init = scalar_init(0.0, 1.0);
  cfg.wrong_init = scalar_init(1.0, 2.0);
  cfg.frequencies = MatrixXd::Ones(1, 1);
  return cfg;
}

ExperimentConfig rotation_mean_config() {
  ExperimentConfig cfg;
  cfg.model = rotation_expanding();
  cfg.horizon = 50.0;
  cfg.true_init = gaussian(VectorXd::Zero(2), MatrixXd::Identity(2, 2));
  cfg.wrong_init = gaussian((VectorXd(2) << 1.0, -1.0).finished(), 4.0 * MatrixXd::Identity(2, 2));
  cfg.uco_window = 2.0 * 3.14159265358979323846;
  cfg.frequencies = MatrixXd::Ones(1, 2);
  return cfg;
}

ExperimentConfig two_atom_config() {
  ExperimentConfig cfg;
  cfg.model = scalar_unstable();
  cfg.horizon = 30.0;
  cfg.seed = 100;
  cfg.mc_runs = 10;
  cfg.true_init = scalar_init(0.0, 0.25);
  cfg.wrong_init = scalar_init(5.0, 3.0);
  cfg.atoms.points = (MatrixXd(2, 1) << -1.0, 1.0).finished();
  cfg.atoms.weights = VectorXd::Constant(2, 0.5);
  cfg.frequencies = MatrixXd::Ones(1, 1);
  return cfg;
}

ExperimentConfig smallnoise_config() {
  ExperimentConfig cfg;
  const double a = 0.25;
  cfg.model = scalar_unstable(a, 1.0);
  cfg.horizon = 10.0;
  cfg.true_init = scalar_init(0.0, 2.0 * a);
  cfg.wrong_init = cfg.true_init;
  cfg.frequencies = MatrixXd::Ones(1, 1);
  return cfg;
}

ExperimentConfig random_walk_config() {
  ExperimentConfig cfg;
  cfg.model = random_walk();
  cfg.horizon = 100.0;
  cfg.true_init = scalar_init(0.0, 1.0);
  cfg.wrong_init = scalar_init(1.0, 2.0);
  cfg.frequencies = MatrixXd::Ones(1, 1);
  return cfg;
}

MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  RngStream rng(seed, "matrix");
  MatrixXd out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = rng.normal();
  return out;
}

MatrixXd random_spd(int dim, std::uint64_t seed) {
  const MatrixXd g = random_matrix(dim, dim, seed);
  return symmetrize(g * g.transpose() / dim + 0.5 * MatrixXd::Identity(dim, dim));
}

}  // namespace kbstab::scenarios
