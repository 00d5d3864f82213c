#include "kbstab/scenarios.hpp"
#include "kbstab/simulate.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace kbstab;
using namespace kbstab::testing;

namespace {

SimulationSpec spec_for(const ExperimentConfig& cfg, double horizon, double eps = 0.0) {
  SimulationSpec spec;
  spec.grid = TimeGrid::over(horizon, cfg.dt);
  spec.substeps = cfg.substeps;
  spec.epsilon = eps;
  spec.init = cfg.true_init;
  spec.atoms = cfg.atoms;
  return spec;
}

}  // namespace

TEST(Simulate, SameSeedGivesBitwiseIdenticalPaths) {
  const ExperimentConfig cfg = scenarios::two_atom_config();
  const SimulationSpec spec = spec_for(cfg, 2.0, 0.1);
  const ObservationPath a = generate_observations(cfg.model, spec, 9);
  const ObservationPath b = generate_observations(cfg.model, spec, 9);
  EXPECT_TRUE(bitwise_equal(a.dy, b.dy));
  EXPECT_TRUE(bitwise_equal(a.truth, b.truth));
  EXPECT_EQ(a.atom, b.atom);
  const ObservationPath c = generate_observations(cfg.model, spec, 10);
  EXPECT_FALSE(bitwise_equal(a.dy, c.dy));
}

TEST(Simulate, StreamsAreSeparatedByLabel) {
  // Changing eps changes the truth noise only: x0 comes from its own stream.
  const ExperimentConfig cfg = scenarios::smallnoise_config();
  const ObservationPath a = generate_observations(cfg.model, spec_for(cfg, 1.0, 0.1), 4);
  const ObservationPath b = generate_observations(cfg.model, spec_for(cfg, 1.0, 0.2), 4);
  EXPECT_EQ(a.x0, b.x0);
  EXPECT_NE(a.truth.col(100)(0), b.truth.col(100)(0));
}

TEST(Simulate, NoiselessIncrementsIntegrateTheExactTruth) {
  const double a = 0.25;
  const LtvModel model = scenarios::scalar_unstable(a);
  RngStream v(1, "V"), w(1, "W");
  const TimeGrid fine{1e-3, 2000};
  const StateTrajectory truth = simulate_truth(model, vec1(1.5), fine, 0.0, v);
  const ObservationPath obs = simulate_observations(model, truth, 10, w, ObservationNoise::none);
  ASSERT_EQ(obs.grid.steps, 200u);
  for (std::size_t k = 0; k < obs.grid.steps; k += 13) {
    const double t0 = obs.grid.t(k), t1 = obs.grid.t(k + 1);
    const double exact = 1.5 * (std::exp(a * t1) - std::exp(a * t0)) / a;
    EXPECT_NEAR(obs.dy(0, static_cast<long>(k)), exact, 1e-14);
  }
  EXPECT_EQ(w.counter(), 0u);
}

TEST(Simulate, ObservationNoiseHasVarianceRdt) {
  const LtvModel model = LtvModel::scalar(0.0, 0.0, 2.0);
  RngStream v(2, "V"), w(2, "W");
  const StateTrajectory truth = simulate_truth(model, vec1(0), TimeGrid{1e-3, 100000}, 0.0, v);
  const ObservationPath obs = simulate_observations(model, truth, 10, w);
  const double var = obs.dy.squaredNorm() / static_cast<double>(obs.grid.steps);
  const double expected = 2.0 * obs.grid.dt;
  EXPECT_NEAR(var / expected, 1.0, 5.0 * std::sqrt(2.0 / static_cast<double>(obs.grid.steps)));
}

TEST(Simulate, EulerMaruyamaVarianceOfRandomWalk) {
  const LtvModel model = LtvModel::scalar(0.0, 1.0, 1.0, 1.0);
  double s2 = 0.0;
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) {
    RngStream rng(static_cast<std::uint64_t>(i), "V");
    const StateTrajectory truth = simulate_truth(model, vec1(0), TimeGrid{1e-2, 100}, 0.5, rng);
    s2 += truth.states(0, 100) * truth.states(0, 100);
  }
  // eps^2 t = 0.25 at t = 1.
  EXPECT_NEAR(s2 / runs, 0.25, 5.0 * 0.25 * std::sqrt(2.0 / runs));
}

TEST(Simulate, AtomFrequenciesMatchWeights) {
  AtomSet atoms;
  atoms.points = (MatrixXd(3, 1) << -1, 0, 1).finished();
  atoms.weights = (VectorXd(3) << 0.2, 0.3, 0.5).finished();
  std::vector<int> counts(3, 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    RngStream rng(static_cast<std::uint64_t>(i), "x0");
    counts[static_cast<std::size_t>(draw_initial_state(scalar_init(0, 1), atoms, rng).atom)] += 1;
  }
  for (int j = 0; j < 3; ++j) {
    const double p = atoms.weights(j);
    EXPECT_NEAR(counts[static_cast<std::size_t>(j)] / double(n), p, 5.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Simulate, DegenerateCovarianceReturnsMeanExactly) {
  RngStream rng(5, "x0");
  const GaussianInit init{(VectorXd(2) << 1.5, -2).finished(), MatrixXd::Zero(2, 2)};
  EXPECT_EQ(draw_initial_state(init, AtomSet{}, rng).x0, init.mean);
}

TEST(Simulate, InvalidInputsAreRejected) {
  const LtvModel model = scenarios::random_walk();
  RngStream rng(1, "V");
  EXPECT_THROW(simulate_truth(model, vec1(0), TimeGrid{1e-3, 10}, -0.1, rng), std::invalid_argument);
  const StateTrajectory truth = simulate_truth(model, vec1(0), TimeGrid{1e-3, 25}, 0.0, rng);
  EXPECT_THROW(simulate_observations(model, truth, 10, rng), std::invalid_argument);
  EXPECT_THROW(simulate_observations(model, truth, 0, rng), std::invalid_argument);
}

TEST(Simulate, CsvHasHeaderAndOneRowPerNode) {
  const ExperimentConfig cfg = scenarios::rotation_mean_config();
  const ObservationPath obs = generate_observations(cfg.model, spec_for(cfg, 0.1), 3);
  std::ostringstream os;
  write_csv(os, obs);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# seed=3", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "t,dy_1,x_1,x_2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, static_cast<int>(obs.grid.nodes()));
}
