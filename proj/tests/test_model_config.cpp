#include "kbstab/config.hpp"
#include "kbstab/rng.hpp"
#include "kbstab/scenarios.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace kbstab;
using namespace kbstab::testing;

namespace {

const char* kMinimal = R"(
[model]
m = 1
n = 1
family = constant
A0.shape = 1 1
A0.data = 0.5
C0.shape = 1 1
C0.data = 1

[init]
m0.shape = 1 1
m0.data = 0
P0.shape = 1 1
P0.data = 1
)";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

ExperimentConfig random_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  RngStream rng(seed, "cfg");
  const int m = 1 + static_cast<int>(rng.next_u64() % 3);
  const int n = 1 + static_cast<int>(rng.next_u64() % 2);
  cfg.model = LtvModel::periodic(scenarios::random_matrix(m, m, seed), scenarios::random_matrix(m, m, seed + 1),
                                 0.5 + rng.uniform(), scenarios::random_matrix(n, m, seed + 2),
                                 scenarios::random_spd(n, seed + 3));
  cfg.horizon = 1.0 + rng.uniform() * 10;
  cfg.dt = 1e-3 * (1.0 + rng.uniform());
  cfg.seed = rng.next_u64();
  cfg.true_init = {scenarios::random_matrix(m, 1, seed + 4), scenarios::random_spd(m, seed + 5)};
  cfg.wrong_init = {scenarios::random_matrix(m, 1, seed + 6), scenarios::random_spd(m, seed + 7)};
  cfg.atoms.points = scenarios::random_matrix(3, m, seed + 8);
  cfg.atoms.weights = VectorXd::Constant(3, 1.0 / 3.0);
  cfg.epsilons = {rng.uniform(), rng.uniform() * 1e-3};
  cfg.frequencies = scenarios::random_matrix(2, m, seed + 9);
  cfg.thresholds.merging_ratio = rng.uniform();
  return cfg;
}

}  // namespace

TEST(Model, PeriodicCoefficientsFollowSine) {
  const double w = 1.7, t = 0.9;
  const LtvModel model = LtvModel::periodic(mat1(0.3), mat1(-0.4), w, mat1(2.0), mat1(0.5));
  const Coefficients c = model.eval(t);
  EXPECT_DOUBLE_EQ(c.A(0, 0), 0.3 - 0.4 * std::sin(w * t));
  EXPECT_DOUBLE_EQ(c.H(0, 0), 2.0 * 2.0 / 0.5);
  EXPECT_DOUBLE_EQ(c.gain_factor(0, 0), 2.0 / 0.5);
}

TEST(Model, RotationGeneratorHasDampedRotationForm) {
  const LtvModel model = LtvModel::rotation(2.0, 0.3, (MatrixXd(1, 2) << 1, 0).finished(), mat1(1));
  const MatrixXd a = model.eval(4.0).A;
  EXPECT_DOUBLE_EQ(a(0, 0), -0.3);
  EXPECT_DOUBLE_EQ(a(1, 1), -0.3);
  EXPECT_DOUBLE_EQ(a(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(a(1, 0), -2.0);
}

TEST(Model, NegativeTimeIsRejected) {
  EXPECT_THROW(scenarios::random_walk().eval(-1e-9), ModelError);
}

TEST(Model, IndefiniteObservationNoiseIsRejectedWhereItOccurs) {
  LtvModel model = LtvModel::periodic(mat1(0), mat1(0), 1.0, mat1(1), mat1(1));
  model.R1 = mat1(2.0);
  model.finalize();
  EXPECT_NO_THROW(model.eval(0.0));
  EXPECT_THROW(model.eval(1.5 * std::numbers::pi), ModelError);
}

TEST(Model, ShapeMismatchIsRejected) {
  EXPECT_THROW(LtvModel::constant(MatrixXd::Zero(2, 2), MatrixXd::Ones(1, 3), mat1(1)), ModelError);
  EXPECT_THROW(family_from_string("spiral"), ModelError);
}

TEST(Config, MinimalFileFillsDefaults) {
  const ExperimentConfig cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.model.family, Family::constant);
  EXPECT_DOUBLE_EQ(cfg.model.R0(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(cfg.model.F0(0, 0), 0.0);
  EXPECT_TRUE(validate_config(cfg).empty());
}

TEST(Config, ErrorsCarryTheOffendingLine) {
  const std::string base = kMinimal;
  EXPECT_EQ(error_line(base + "bogus = 1\n"), 16);
  EXPECT_EQ(error_line(base + "[run]\ndt = fast\n"), 17);
  EXPECT_EQ(error_line(base + "[run]\nhorizon = 1\nhorizon = 2\n"), 18);
  EXPECT_EQ(error_line(base + "[weird]\n"), 16);
  EXPECT_EQ(error_line("[model]\nm = 1\nn = 1\nA0.shape = 1 2\nA0.data = 1\n"), 5);
  EXPECT_EQ(error_line("m = 1\n"), 1);
}

TEST(Config, LoadMissingFileThrows) { EXPECT_THROW(load_config("/nonexistent/x.cfg"), ConfigError); }

TEST(Config, RoundTripIsExactOnRandomConfigs) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const ExperimentConfig cfg = random_config(seed * 101);
    const ExperimentConfig back = parse_config(serialize_config(cfg));
    EXPECT_TRUE(configs_equal(cfg, back, 0.0)) << "seed " << seed;
    EXPECT_EQ(config_hash(cfg), config_hash(back));
  }
}

TEST(Config, HashChangesWithEveryField) {
  const ExperimentConfig base = scenarios::scalar_mean_config();
  ExperimentConfig other = base;
  other.seed += 1;
  EXPECT_NE(config_hash(base), config_hash(other));
  other = base;
  other.thresholds.reconstruction *= 2;
  EXPECT_NE(config_hash(base), config_hash(other));
  EXPECT_EQ(config_hash(base).size(), 16u);
}

TEST(Config, ValidationReportsEachViolation) {
  ExperimentConfig cfg = scenarios::scalar_mean_config();
  cfg.dt = -1;
  cfg.mc_runs = 0;
  cfg.true_init.cov = mat1(0.0);
  const auto report = validate_config(cfg);
  EXPECT_GE(report.size(), 3u);
  cfg = scenarios::two_atom_config();
  cfg.atoms.weights(0) = 0.7;
  EXPECT_FALSE(validate_config(cfg).empty());
}

TEST(Config, BuiltinScenariosValidate) {
  for (const auto& cfg : {scenarios::scalar_mean_config(), scenarios::rotation_mean_config(),
                          scenarios::two_atom_config(), scenarios::smallnoise_config(),
                          scenarios::random_walk_config()})
    EXPECT_TRUE(validate_config(cfg).empty());
}
