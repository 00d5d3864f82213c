#include "kbstab/commands.hpp"
#include "kbstab/config.hpp"
#include "kbstab/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
};

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d{
      {"gramian",
       "Observability Gramian over sliding windows of length uco_window. Writes per-window "
       "eigenvalues and passes when the smallest one stays positive (uniform complete "
       "observability on the sampled horizon). Default: expanding rotation, window 2 pi."},
      {"riccati",
       "Integrates the noise-free Riccati equation from P0 and compares it with the closed form "
       "built from Phi and the accumulated information. Passes when the largest spectral gap is "
       "within threshold.riccati_residual. Default: scalar a = 0.25."},
      {"stability_cov",
       "Covariance stability: filters started at P0 and Pbar, their gap, and the residual of "
       "P - Pbar = Psi (P0 - Pbar) Psibar^T. Passes when the residual is within "
       "threshold.riccati_residual and gap(T)/gap(0) within threshold.cov_gap_ratio. "
       "Default: scalar a = 0.25, P0 = 1, Pbar = 2, T = 50."},
      {"stability_mean",
       "Mean stability: filters started at (m0, P0) and (mbar, Pbar) see the same observations. "
       "Over mc_runs seeds, passes when gap(T)/gap(0) stays within threshold.mean_gap_ratio and "
       "the reconstruction residual of the gap decomposition within threshold.reconstruction. "
       "Default: scalar a = 0.25, T = 50, 20 seeds."},
      {"nongaussian",
       "Mixture filter for a Gaussian prior plus finitely many atoms, compared with a Gaussian "
       "filter started at (mbar, Pbar). Passes when the mean gap and every cosine test-function "
       "gap shrink by threshold.merging_ratio between t = 1 and T on every seed. Agreement with "
       "the filter-bank oracle is reported. Default: two atoms at +-1, reference (5, 3), T = 30."},
      {"smallnoise",
       "Small system noise: for each epsilon, the optimal filter is compared with the noise-free "
       "filter on the same observations. Passes when the closed loop is exponentially stable, the "
       "log-log slopes of the median sup gaps fall in the configured bands and the gaps shrink "
       "monotonically with epsilon. Default: scalar a = 0.25, F = 1, P0 = 0.5, T = 10."},
  };
  return d;
}

kbstab::ExperimentConfig resolve(const std::string& command, const Overrides& o) {
  kbstab::ExperimentConfig cfg =
      o.config.empty() ? kbstab::default_config(command) : kbstab::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.dt) cfg.dt = *o.dt;
  if (o.horizon) cfg.horizon = *o.horizon;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability experiments for the Kalman-Bucy filter"};
  app.require_subcommand(1);

  std::map<std::string, Overrides> overrides;
  std::string selected;
  for (const auto& name : kbstab::experiment_commands()) {
    CLI::App* sub = app.add_subcommand(name, descriptions().at(name));
    Overrides& o = overrides[name];
    o.out = "out/" + name;
    sub->add_option("--config", o.config, "Config file; the built-in scenario when omitted")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "Override the base seed");
    sub->add_option("--dt", o.dt, "Override the grid step");
    sub->add_option("--horizon", o.horizon, "Override the horizon T");
    sub->callback([&selected, name] { selected = name; });
  }

  kbstab::VerifyOptions vopts;
  CLI::App* verify = app.add_subcommand(
      "verify", "Runs every analytic-oracle and property check and prints a PASS/FAIL table. "
                "Exit status 0 iff all selected checks pass.");
  verify->add_option("--filter", vopts.filter, "Only checks whose group.name contains this text");
  verify->add_option("--corrupt-tolerance", vopts.corrupt, "Check ids forced to fail")->group("");
  verify->callback([&selected] { selected = "verify"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (selected == "verify") {
    const auto results = kbstab::run_checks(vopts);
    kbstab::print_report(std::cout, results);
    if (results.empty()) {
      std::cerr << "no checks match filter '" << vopts.filter << "'\n";
      return 2;
    }
    for (const auto& r : results)
      if (!r.passed) return 1;
    return 0;
  }

  const Overrides& o = overrides.at(selected);
  kbstab::ExperimentConfig cfg;
  try {
    cfg = resolve(selected, o);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const kbstab::RunArtifact art = kbstab::run_command(selected, cfg, o.out);
    std::cout << art.summary << '\n';
    return art.passed ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const kbstab::ModelError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "FAIL " << selected << ": " << e.what() << '\n';
    return 1;
  }
}
