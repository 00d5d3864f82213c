#pragma once

#include "kbstab/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kbstab {

/// Parse failure; the message carries the offending line number.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct GaussianInit {
  VectorXd mean;
  MatrixXd cov;
};

/// Finite-support law of the non-Gaussian part v0: one atom per row of
/// `points`, with probabilities `weights`.
struct AtomSet {
  MatrixXd points;  // k x m
  VectorXd weights;
  bool empty() const { return weights.size() == 0; }
  int size() const { return static_cast<int>(weights.size()); }
};

/// Pass/fail thresholds for the experiment subcommands.
struct Thresholds {
  double riccati_residual = 1e-6;
  double reconstruction = 1e-6;
  double mean_gap_ratio = 1e-3;
  double cov_gap_ratio = 1e-3;
  double merging_ratio = 0.1;
  double cov_slope_lo = 1.8;
  double cov_slope_hi = 2.2;
  double mean_slope_lo = 0.7;
  double mean_slope_hi = 1.3;
  double monotone_slack = 0.05;
};

struct ExperimentConfig {
  LtvModel model;
  double horizon = 10.0;
  double dt = 1e-3;
  int substeps = 10;
  std::uint64_t seed = 1;
  GaussianInit true_init;
  GaussianInit wrong_init;
  AtomSet atoms;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
  int mc_runs = 20;
  double uco_window = 1.0;
  /// Frequencies a of the cosine test functions g(x) = cos(a^T x), one per row.
  MatrixXd frequencies;
  Thresholds thresholds;
};

/// Parses the sectioned key = value format:
///
///   [model]  m, n, family, omega, damping, bound, A0 A1 C0 C1 R0 R1 F0 F1
///   [init]   m0 P0 mbar Pbar
///   [atoms]  points (k x m), weights (k values)
///   [noise]  epsilons
///   [run]    horizon dt substeps seed mc_runs uco_window, frequencies,
///            threshold.<name>
///
/// Matrices are given as `X.shape = rows cols` and `X.data = v1 v2 ...`
/// (row-major). Vectors are single-column matrices. `#` starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Inverse of parse_config; floats are written with 17 significant digits
/// so parse(serialize(cfg)) reproduces cfg exactly.
std::string serialize_config(const ExperimentConfig& cfg);

/// One line per violated assumption; empty means every checkable
/// assumption holds on the sampled grid.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

bool configs_equal(const ExperimentConfig& a, const ExperimentConfig& b, double rel_tol = 1e-15);

/// FNV-1a hash of the serialized config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace kbstab
