#pragma once

#include "kbstab/config.hpp"
#include "kbstab/propagate.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kbstab {

/// Output of one experiment subcommand. `manifest.txt` is written last, so
/// its presence marks a completed run. CSV bytes depend only on the config.
struct RunArtifact {
  std::string command;
  std::string out_dir;
  std::vector<std::pair<std::string, std::string>> manifest;
  std::vector<std::string> files;  // CSV file names relative to out_dir
  bool passed = false;
  std::string summary;  // one line, starts with PASS or FAIL
};

/// Per-window eigenvalues of the observability Gramian and the UCO verdict.
RunArtifact cmd_gramian(const ExperimentConfig& cfg, const std::string& out_dir,
                        Exec exec = Exec::parallel);

/// Integrated DRE against the closed form.
RunArtifact cmd_riccati(const ExperimentConfig& cfg, const std::string& out_dir,
                        Exec exec = Exec::parallel);

/// Covariance gap between filters started at P0 and Pbar, with the
/// factorization residual through the two closed-loop propagators.
RunArtifact cmd_stability_cov(const ExperimentConfig& cfg, const std::string& out_dir,
                              Exec exec = Exec::parallel);

/// Mismatched-initialization mean gap over mc_runs seeds with the
/// reconstruction residual on every run.
RunArtifact cmd_stability_mean(const ExperimentConfig& cfg, const std::string& out_dir,
                               Exec exec = Exec::parallel);

/// Mixture filter against a Gaussian filter with the wrong init, merging
/// ratios per seed, and agreement with the filter-bank oracle.
RunArtifact cmd_nongaussian(const ExperimentConfig& cfg, const std::string& out_dir,
                            Exec exec = Exec::parallel);

/// eps sweep of the gap between the noisy-gain and noise-free filters.
RunArtifact cmd_smallnoise(const ExperimentConfig& cfg, const std::string& out_dir,
                           Exec exec = Exec::parallel);

/// Built-in scenario used by each subcommand when no config file is given.
ExperimentConfig default_config(const std::string& command);

/// Names of the experiment subcommands, in help order.
const std::vector<std::string>& experiment_commands();

RunArtifact run_command(const std::string& command, const ExperimentConfig& cfg,
                        const std::string& out_dir, Exec exec = Exec::parallel);

}  // namespace kbstab
