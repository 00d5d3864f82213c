#pragma once

#include "kbstab/config.hpp"
#include "kbstab/matrix_path.hpp"
#include "kbstab/model.hpp"
#include "kbstab/rng.hpp"

#include <cstdint>
#include <ostream>

namespace kbstab {

struct InitialDraw {
  VectorXd x0;
  int atom = -1;  // index of the sampled atom, -1 without atoms
};

/// x0 = m0 + sqrt(P0) xi, plus atom i with probability pi_i when atoms are
/// given. Consumes rng only; P0 = 0 gives m0 (+ atom) exactly.
InitialDraw draw_initial_state(const GaussianInit& init, const AtomSet& atoms, RngStream& rng);

/// State trajectory on the fine grid, one column per node.
struct StateTrajectory {
  TimeGrid fine;
  MatrixXd states;  // m x (fine.steps + 1)
  double epsilon = 0.0;
};

/// eps = 0: RK4 on x' = A x, no random numbers consumed.
/// eps > 0: Euler-Maruyama with increments eps F sqrt(h) xi from `rng`.
StateTrajectory simulate_truth(const LtvModel& model, const VectorXd& x0, const TimeGrid& fine,
                               double epsilon, RngStream& rng);

enum class ObservationNoise {
  standard,
  /// Test hook: xi = 0, so dy is the exact integral of C x.
  none,
};

/// Observation increments aggregated to a coarse grid. Increments, not
/// cumulative y, are the canonical representation.
struct ObservationPath {
  TimeGrid grid;      // coarse
  int substeps = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  MatrixXd dy;        // n x grid.steps; column k is y(t_{k+1}) - y(t_k)
  MatrixXd truth;     // m x grid.nodes()
  VectorXd x0;
  int atom = -1;

  auto increment(std::size_t k) const { return dy.col(static_cast<long>(k)); }
};

/// dy_k = sum over fine substeps of int C x ds + R^{1/2} sqrt(h) xi. The
/// drift integral uses Simpson with Hermite midpoints for smooth (eps = 0)
/// truth and the left point otherwise.
ObservationPath simulate_observations(const LtvModel& model, const StateTrajectory& truth,
                                      int substeps, RngStream& rng,
                                      ObservationNoise noise = ObservationNoise::standard);

struct SimulationSpec {
  TimeGrid grid;
  int substeps = 10;
  double epsilon = 0.0;
  GaussianInit init;
  AtomSet atoms;
  ObservationNoise noise = ObservationNoise::standard;
};

/// Draws x0 (stream "x0"), the truth (stream "V") and observations
/// (stream "W") for one seed.
ObservationPath generate_observations(const LtvModel& model, const SimulationSpec& spec,
                                      std::uint64_t seed);

/// `# seed=... epsilon=... substeps=...` then `t,dy_1..dy_n,x_1..x_m`.
/// Row 0 is t = 0 with zero increment; row k carries the increment ending at t_k.
void write_csv(std::ostream& os, const ObservationPath& obs);

}  // namespace kbstab
