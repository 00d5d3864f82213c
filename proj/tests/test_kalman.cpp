#include "kbstab/kalman.hpp"
#include "kbstab/scenarios.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace kbstab;
using namespace kbstab::testing;

namespace {

ObservationPath observe(const ExperimentConfig& cfg, double horizon, std::uint64_t seed) {
  SimulationSpec spec;
  spec.grid = TimeGrid::over(horizon, cfg.dt);
  spec.substeps = cfg.substeps;
  spec.init = cfg.true_init;
  return generate_observations(cfg.model, spec, seed);
}

}  // namespace

TEST(Kalman, RandomWalkMeanIsTheConjugatePosterior) {
  // Constant state with prior N(m0, p0) observed in unit noise: (m0 + p0 y_t) / (1 + p0 t).
  ExperimentConfig cfg = scenarios::random_walk_config();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ObservationPath obs = observe(cfg, 10.0, seed);
    const FilterRun run = run_filter(cfg.model, obs, scalar_init(0.3, 2.0));
    double y = 0.0, worst = 0.0;
    for (std::size_t k = 0; k <= obs.grid.steps; ++k) {
      if (k > 0) y += obs.dy(0, static_cast<long>(k - 1));
      const double exact = (0.3 + 2.0 * y) / (1.0 + 2.0 * obs.grid.t(k));
      worst = std::max(worst, std::abs(run.mean(0, static_cast<long>(k)) - exact));
    }
    EXPECT_LT(worst, 1e-6) << "seed " << seed;
  }
}

TEST(Kalman, InnovationIsObservationMinusPrediction) {
  const ExperimentConfig cfg = scenarios::rotation_mean_config();
  const ObservationPath obs = observe(cfg, 1.0, 2);
  const FilterRun run = run_filter(cfg.model, obs, cfg.true_init);
  for (std::size_t k = 0; k < obs.grid.steps; k += 97) {
    const MatrixXd c = cfg.model.eval(obs.grid.t(k)).C;
    const VectorXd expect = obs.increment(k) - c * run.at(k) * obs.grid.dt;
    EXPECT_LT((run.innovation.col(static_cast<long>(k)) - expect).norm(), 1e-14);
  }
}

TEST(Kalman, InnovationIncrementsHaveVarianceRdt) {
  const ExperimentConfig cfg = scenarios::random_walk_config();
  const ObservationPath obs = observe(cfg, 100.0, 8);
  const FilterRun run = run_filter(cfg.model, obs, cfg.true_init);
  const double n = static_cast<double>(run.innovation.cols());
  const double var = run.innovation.squaredNorm() / n / obs.grid.dt;
  EXPECT_NEAR(var, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Kalman, IdenticalInitsGiveZeroGap) {
  const ExperimentConfig cfg = scenarios::rotation_mean_config();
  const ObservationPath obs = observe(cfg, 2.0, 3);
  const PairRun pair = mismatched_pair(cfg.model, obs, cfg.true_init, cfg.true_init);
  for (double g : pair.gap_mean) ASSERT_EQ(g, 0.0);
  for (double g : pair.gap_cov) ASSERT_EQ(g, 0.0);
  EXPECT_EQ(pair.correct.gains, pair.wrong.gains);
}

TEST(Kalman, GapDecaysAndDecompositionReconstructs) {
  const ExperimentConfig cfg = scenarios::scalar_mean_config();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ObservationPath obs = observe(cfg, 20.0, seed);
    const PairRun pair = mismatched_pair(cfg.model, obs, cfg.true_init, cfg.wrong_init);
    const MeanDecomposition dec = mean_decomposition_diagnostics(cfg.model, obs, pair);
    EXPECT_LT(dec.max_residual, 1e-9);
    EXPECT_LT(pair.gap_mean.back(), 0.05 * pair.gap_mean.front());
    EXPECT_LT(pair.gap_cov.back(), 1e-3 * pair.gap_cov.front());
  }
}

TEST(Kalman, LyapunovFunctionIsNonincreasingForRandomStarts) {
  const ExperimentConfig cfg = scenarios::rotation_mean_config();
  const auto gains = make_filter_gains(cfg.model, cfg.true_init.cov, TimeGrid::over(10.0, 1e-3));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::vector<double> v = lyapunov_trace(gains->psi, gains->riccati, scenarios::random_matrix(2, 1, seed));
    for (std::size_t k = 1; k < v.size(); ++k) ASSERT_LE(v[k], v[k - 1] + 1e-12) << "seed " << seed << " k " << k;
  }
}

TEST(Kalman, MismatchedObservationPathIsRejected) {
  const ExperimentConfig cfg = scenarios::scalar_mean_config();
  const ObservationPath obs = observe(cfg, 1.0, 1);
  const auto gains = make_filter_gains(cfg.model, cfg.true_init.cov, TimeGrid::over(2.0, cfg.dt));
  EXPECT_THROW(run_filter(cfg.model, obs, cfg.true_init.mean, gains), std::invalid_argument);
  EXPECT_THROW(run_filter(scenarios::rotation_expanding(), obs, cfg.true_init), std::invalid_argument);
}

TEST(Kalman, NonFiniteObservationNamesTheStep) {
  const ExperimentConfig cfg = scenarios::scalar_mean_config();
  ObservationPath obs = observe(cfg, 1.0, 1);
  obs.dy(0, 41) = std::numeric_limits<double>::quiet_NaN();
  try {
    run_filter(cfg.model, obs, cfg.true_init);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step 42"), std::string::npos) << e.what();
  }
}

TEST(Kalman, CsvHeader) {
  const ExperimentConfig cfg = scenarios::scalar_mean_config();
  const ObservationPath obs = observe(cfg, 1.0, 1);
  const PairRun pair = mismatched_pair(cfg.model, obs, cfg.true_init, cfg.wrong_init);
  std::ostringstream os;
  write_csv(os, pair, mean_decomposition_diagnostics(cfg.model, obs, pair), 100);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,gap_mean,gap_cov,term1,znorm,V");
}
