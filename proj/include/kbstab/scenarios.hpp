#pragma once

#include "kbstab/config.hpp"

namespace kbstab::scenarios {

/// A = 0, C = R = 1. Observable, with algebraic closed-loop decay 1/(1 + p0 t).
LtvModel random_walk();

/// A = a > 0, C = R = 1, optional F. Unstable open loop; the noise-free
/// covariance settles at 2a where the closed loop decays at rate a.
LtvModel scalar_unstable(double a = 0.25, double f = 0.0);

/// Expanding rotation (damping -0.3, omega 1) observed through x_1 only.
LtvModel rotation_expanding();

/// Mismatched-mean experiment on scalar_unstable: (m0, P0) = (0, 1),
/// (mbar, Pbar) = (1, 2), T = 50.
ExperimentConfig scalar_mean_config();

/// Same on rotation_expanding: P0 = I, Pbar = 4 I, mbar - m0 = (1, -1).
ExperimentConfig rotation_mean_config();

/// Two atoms at -1 and +1 with equal weight over N(0, 0.25) on
/// scalar_unstable, reference (mbar, Pbar) = (5, 3), T = 30, a = 1.
ExperimentConfig two_atom_config();

/// eps sweep on scalar_unstable with F = 1, started at the steady
/// covariance 2a so that the closed loop is exactly exponential.
ExperimentConfig smallnoise_config();

/// Closed-loop decay on random_walk with p0 = 1, T = 100, window 1.
ExperimentConfig random_walk_config();

/// Seeded rows x cols matrix with standard normal entries.
MatrixXd random_matrix(int rows, int cols, std::uint64_t seed);

/// Seeded SPD matrix G G^T / dim + I / 2.
MatrixXd random_spd(int dim, std::uint64_t seed);

}  // namespace kbstab::scenarios
