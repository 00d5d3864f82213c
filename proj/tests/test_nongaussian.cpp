#include "kbstab/nongaussian.hpp"
#include "kbstab/scenarios.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kbstab;
using namespace kbstab::testing;

namespace {

struct Case {
  ExperimentConfig cfg;
  ObservationPath obs;
};

Case rotation_case(std::uint64_t seed, double horizon = 5.0) {
  Case c;
  c.cfg = scenarios::rotation_mean_config();
  c.cfg.atoms.points = scenarios::random_matrix(3, 2, seed);
  c.cfg.atoms.weights = (VectorXd(3) << 0.2, 0.5, 0.3).finished();
  SimulationSpec spec;
  spec.grid = TimeGrid::over(horizon, c.cfg.dt);
  spec.substeps = c.cfg.substeps;
  spec.init = c.cfg.true_init;
  spec.atoms = c.cfg.atoms;
  c.obs = generate_observations(c.cfg.model, spec, seed);
  return c;
}

}  // namespace

TEST(Nongaussian, MixtureMatchesBankOnRotation) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Case c = rotation_case(seed);
    const MixturePath mix = mixture_filter(c.cfg.model, c.obs, c.cfg.atoms, c.cfg.true_init);
    const MixturePath bank = bank_oracle(c.cfg.model, c.obs, c.cfg.atoms, c.cfg.true_init);
    for (std::size_t k = 0; k < mix.grid.nodes(); k += 10) {
      ASSERT_LT((mix.component_means[k] - bank.component_means[k]).cwiseAbs().maxCoeff(), 1e-6);
      ASSERT_LT((mix.log_weights.col(long(k)) - bank.log_weights.col(long(k))).cwiseAbs().maxCoeff(), 1e-8);
      ASSERT_LT(spectral_norm(mix.cov[k] - bank.cov[k]), 1e-6);
    }
  }
}

TEST(Nongaussian, ShiftPropagatorEqualsClosedLoopOfPrior) {
  const Case c = rotation_case(4);
  const ExtendedSystem ext = integrate_extended_system(c.cfg.model, c.obs, c.cfg.true_init);
  const auto gains = make_filter_gains(c.cfg.model, c.cfg.true_init.cov, c.obs.grid);
  double worst = 0.0;
  for (std::size_t k = 0; k < ext.grid().nodes(); ++k)
    worst = std::max(worst, spectral_norm(ext.phi[k] + ext.s[k] - gains->psi[k]));
  EXPECT_LT(worst, 1e-6);
}

TEST(Nongaussian, ExponentIsNegativeSemidefinite) {
  const Case c = rotation_case(5);
  const ExtendedSystem ext = integrate_extended_system(c.cfg.model, c.obs, c.cfg.true_init);
  for (std::size_t k = 0; k < ext.grid().nodes(); k += 50) ASSERT_LT(max_eigenvalue(ext.exponent[k]), 1e-12);
}

TEST(Nongaussian, WeightsStayNormalized) {
  const Case c = rotation_case(6);
  const MixturePath mix = mixture_filter(c.cfg.model, c.obs, c.cfg.atoms, c.cfg.true_init);
  for (std::size_t k = 0; k < mix.grid.nodes(); k += 25) {
    const VectorXd w = mix.weights(k);
    ASSERT_NEAR(w.sum(), 1.0, 1e-12);
    ASSERT_GE(w.minCoeff(), 0.0);
  }
  EXPECT_LT((mix.weights(0) - c.cfg.atoms.weights).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Nongaussian, PosteriorConcentratesOnTheSampledAtom) {
  ExperimentConfig cfg = scenarios::two_atom_config();
  cfg.atoms.points = (MatrixXd(2, 1) << -3, 3).finished();
  int correct = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimulationSpec spec;
    spec.grid = TimeGrid::over(10.0, cfg.dt);
    spec.substeps = cfg.substeps;
    spec.init = cfg.true_init;
    spec.atoms = cfg.atoms;
    const ObservationPath obs = generate_observations(cfg.model, spec, seed);
    const MixturePath mix = mixture_filter(cfg.model, obs, cfg.atoms, cfg.true_init);
    correct += mix.weights(mix.grid.steps)(obs.atom) > 0.99;
  }
  EXPECT_EQ(correct, 10);
}

TEST(Nongaussian, MixtureCosineOfSingleGaussian) {
  const VectorXd a = (VectorXd(2) << 0.7, -1.1).finished();
  const MatrixXd mu = (MatrixXd(2, 1) << 0.3, 0.9).finished();
  const MatrixXd cov = scenarios::random_spd(2, 3);
  const double expected = std::cos(a.dot(mu.col(0))) * std::exp(-0.5 * a.dot(cov * a));
  EXPECT_NEAR(mixture_cosine(a, mu, VectorXd::Ones(1), cov), expected, 1e-15);
  EXPECT_DOUBLE_EQ(mixture_cosine(VectorXd::Zero(2), mu, VectorXd::Ones(1), cov), 1.0);
}

TEST(Nongaussian, InvalidAtomsAreRejected) {
  const Case c = rotation_case(7, 0.5);
  AtomSet bad = c.cfg.atoms;
  bad.weights(0) += 0.1;
  EXPECT_THROW(mixture_filter(c.cfg.model, c.obs, bad, c.cfg.true_init), std::invalid_argument);
  bad = c.cfg.atoms;
  bad.points = MatrixXd::Zero(3, 1);
  EXPECT_THROW(mixture_filter(c.cfg.model, c.obs, bad, c.cfg.true_init), std::invalid_argument);
  EXPECT_THROW(mixture_filter(c.cfg.model, c.obs, AtomSet{}, c.cfg.true_init), std::invalid_argument);
}

TEST(Nongaussian, MergingReportRejectsWrongFrequencyShape) {
  const Case c = rotation_case(8, 0.5);
  const MixturePath mix = mixture_filter(c.cfg.model, c.obs, c.cfg.atoms, c.cfg.true_init);
  const FilterRun ref = run_filter(c.cfg.model, c.obs, c.cfg.wrong_init);
  EXPECT_THROW(merging_report(mix, ref, MatrixXd::Ones(1, 3)), std::invalid_argument);
}

TEST(Nongaussian, SerialAndParallelBanksAreBitwiseEqual) {
  const Case c = rotation_case(9, 2.0);
  const MixturePath s = bank_oracle(c.cfg.model, c.obs, c.cfg.atoms, c.cfg.true_init, Exec::serial);
  const MixturePath p = bank_oracle(c.cfg.model, c.obs, c.cfg.atoms, c.cfg.true_init, Exec::parallel);
  EXPECT_TRUE(bitwise_equal(s.log_weights, p.log_weights));
  EXPECT_TRUE(bitwise_equal(s.mean, p.mean));
  for (std::size_t k = 0; k < s.grid.nodes(); ++k) ASSERT_TRUE(bitwise_equal(s.component_means[k], p.component_means[k]));
}
