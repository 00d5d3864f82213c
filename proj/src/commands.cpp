#include "kbstab/commands.hpp"

#include "kbstab/batch.hpp"
#include "kbstab/kalman.hpp"
#include "kbstab/nongaussian.hpp"
#include "kbstab/scenarios.hpp"
#include "kbstab/smallnoise.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifndef KBSTAB_VERSION
#define KBSTAB_VERSION "0.0.0"
#endif

namespace kbstab {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::size_t csv_stride(const TimeGrid& grid) { return std::max<std::size_t>(1, grid.steps / 1000); }

/// Every stride-th node plus the last one.
std::vector<std::size_t> csv_nodes(const TimeGrid& grid) {
  const std::size_t stride = csv_stride(grid);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k <= grid.steps; k += stride) out.push_back(k);
  if (out.back() != grid.steps) out.push_back(grid.steps);
  return out;
}

TimeGrid grid_of(const ExperimentConfig& cfg) { return TimeGrid::over(cfg.horizon, cfg.dt); }

void require_init(const GaussianInit& init, int m, const std::string& what) {
  if (init.mean.size() != m || init.cov.rows() != m || init.cov.cols() != m)
    throw std::invalid_argument(what + " must have a mean of length " + std::to_string(m) +
                                " and an " + std::to_string(m) + "x" + std::to_string(m) +
                                " covariance");
}

void require_valid(const ExperimentConfig& cfg) {
  const auto problems = validate_config(cfg);
  if (problems.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw std::invalid_argument(msg);
}

double ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

std::string g17(double v) { return fmt_g17(v); }

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Collects CSVs and manifest entries for one run.
class Writer {
 public:
  Writer(std::string command, const ExperimentConfig& cfg, const std::string& out_dir)
      : start_(Clock::now()) {
    art_.command = std::move(command);
    art_.out_dir = out_dir;
    fs::create_directories(out_dir);
    fs::remove(fs::path(out_dir) / "manifest.txt");
    const TimeGrid grid = grid_of(cfg);
    add("command", art_.command);
    add("version", KBSTAB_VERSION);
    add("eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                     "." + std::to_string(EIGEN_MINOR_VERSION));
    add("compiler", __VERSION__);
    add("config_hash", config_hash(cfg));
    add("horizon", g17(grid.horizon()));
    add("dt", g17(grid.dt));
    add("steps", std::to_string(grid.steps));
    add("substeps", std::to_string(cfg.substeps));
    add("threads", std::to_string(parallel_threads()));
    file("config.txt", [&](std::ostream& os) { os << serialize_config(cfg); });
  }

  void add(const std::string& key, const std::string& value) { art_.manifest.emplace_back(key, value); }

  void file(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(fs::path(art_.out_dir) / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (fs::path(art_.out_dir) / name).string());
    body(os);
    if (!os) throw std::runtime_error("write failed for " + name);
    if (name != "config.txt") art_.files.push_back(name);
  }

  RunArtifact finish(bool passed, const std::string& detail) {
    art_.passed = passed;
    art_.summary = std::string(passed ? "PASS " : "FAIL ") + art_.command + ": " + detail;
    const double secs = std::chrono::duration<double>(Clock::now() - start_).count();
    std::string files;
    for (const auto& f : art_.files) files += (files.empty() ? "" : " ") + f;
    add("files", files);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", secs);
    add("wall_time_s", buf);
    add("status", passed ? "PASS" : "FAIL");
    add("summary", art_.summary);

    const fs::path tmp = fs::path(art_.out_dir) / "manifest.txt.tmp";
    {
      std::ofstream os(tmp, std::ios::binary);
      for (const auto& [k, v] : art_.manifest) os << k << " = " << v << '\n';
      if (!os) throw std::runtime_error("cannot write manifest in " + art_.out_dir);
    }
    fs::rename(tmp, fs::path(art_.out_dir) / "manifest.txt");
    return art_;
  }

 private:
  RunArtifact art_;
  Clock::time_point start_;
};

std::string seed_range(const ExperimentConfig& cfg) {
  return std::to_string(cfg.seed) + ".." + std::to_string(cfg.seed + cfg.mc_runs - 1);
}

SimulationSpec simulation_spec(const ExperimentConfig& cfg, bool with_atoms) {
  SimulationSpec spec;
  spec.grid = grid_of(cfg);
  spec.substeps = cfg.substeps;
  spec.init = cfg.true_init;
  if (with_atoms) spec.atoms = cfg.atoms;
  return spec;
}

}  // namespace

RunArtifact cmd_gramian(const ExperimentConfig& cfg, const std::string& out_dir, Exec exec) {
  require_valid(cfg);
  Writer w("gramian", cfg, out_dir);
  const TimeGrid grid = grid_of(cfg);
  const MatrixPath phi = fundamental_matrix(cfg.model, grid);
  const UcoEstimate est = uco_gramian(cfg.model, phi, cfg.uco_window, csv_stride(grid), exec);

  w.file("gramian.csv", [&](std::ostream& os) {
    os << "t,lambda_min,lambda_max\n";
    for (std::size_t i = 0; i < est.times.size(); ++i)
      os << g17(est.times[i]) << ',' << g17(est.lambda_min[i]) << ',' << g17(est.lambda_max[i]) << '\n';
  });
  w.add("seeds", "none");
  w.add("window", g17(est.window));
  w.add("rho1", g17(est.rho1));
  w.add("rho2", g17(est.rho2));
  w.add("uco_plausible", est.plausible ? "yes" : "no");
  return w.finish(est.plausible, "rho1=" + g6(est.rho1) + " rho2=" + g6(est.rho2) +
                                     " over " + std::to_string(est.times.size()) + " windows");
}

RunArtifact cmd_riccati(const ExperimentConfig& cfg, const std::string& out_dir, Exec) {
  require_valid(cfg);
  require_init(cfg.true_init, cfg.model.m, "init m0/P0");
  Writer w("riccati", cfg, out_dir);
  const TimeGrid grid = grid_of(cfg);
  const RiccatiSolution sol = integrate_dre(cfg.model, cfg.true_init.cov, grid);
  const MatrixPath phi = fundamental_matrix(cfg.model, grid);
  const MatrixPath cbar = accumulated_information(cfg.model, phi);
  const MatrixPath exact = closed_form_dre(cfg.true_init.cov, phi, cbar);

  std::vector<double> residual(grid.nodes());
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    residual[k] = spectral_norm(sol[k] - exact[k]);
    worst = std::max(worst, residual[k]);
  }
  w.file("riccati.csv", [&](std::ostream& os) { write_csv(os, sol.path, csv_stride(grid)); });
  w.file("riccati_residual.csv", [&](std::ostream& os) {
    os << "t,residual,min_eig\n";
    for (std::size_t k : csv_nodes(grid))
      os << g17(grid.t(k)) << ',' << g17(residual[k]) << ',' << g17(sol.min_eig[k]) << '\n';
  });
  for (const auto& d : sol.diagnostics) w.add("diagnostic", d);
  w.add("seeds", "none");
  w.add("max_residual", g17(worst));
  const bool ok = worst <= cfg.thresholds.riccati_residual;
  return w.finish(ok, "max |P_ode - P_closed| = " + g6(worst) + " (threshold " +
                          g6(cfg.thresholds.riccati_residual) + ")");
}

RunArtifact cmd_stability_cov(const ExperimentConfig& cfg, const std::string& out_dir, Exec) {
  require_valid(cfg);
  const int m = cfg.model.m;
  require_init(cfg.true_init, m, "init m0/P0");
  require_init(cfg.wrong_init, m, "init mbar/Pbar");
  Writer w("stability_cov", cfg, out_dir);
  const TimeGrid grid = grid_of(cfg);
  const FactorizationCheck fc =
      error_factorization_check(cfg.model, cfg.true_init.cov, cfg.wrong_init.cov, grid);

  std::vector<double> gap(grid.nodes());
  for (std::size_t k = 0; k < grid.nodes(); ++k) gap[k] = spectral_norm(fc.first[k] - fc.second[k]);
  const double gap_ratio = ratio(gap.back(), gap.front());
  w.file("cov_gap.csv", [&](std::ostream& os) {
    os << "t,gap_cov,residual,psi_norm,psibar_norm\n";
    for (std::size_t k : csv_nodes(grid))
      os << g17(grid.t(k)) << ',' << g17(gap[k]) << ',' << g17(fc.residual[k]) << ','
         << g17(spectral_norm(fc.psi_first[k])) << ',' << g17(spectral_norm(fc.psi_second[k])) << '\n';
  });
  w.add("seeds", "none");
  w.add("max_residual", g17(fc.max_residual));
  w.add("gap_initial", g17(gap.front()));
  w.add("gap_final", g17(gap.back()));
  w.add("gap_ratio", g17(gap_ratio));
  const Thresholds& th = cfg.thresholds;
  const bool ok = fc.max_residual <= th.riccati_residual && gap_ratio <= th.cov_gap_ratio;
  return w.finish(ok, "residual " + g6(fc.max_residual) + " (<= " + g6(th.riccati_residual) +
                          "), gap ratio " + g6(gap_ratio) + " (<= " + g6(th.cov_gap_ratio) + ")");
}

RunArtifact cmd_stability_mean(const ExperimentConfig& cfg, const std::string& out_dir, Exec exec) {
  require_valid(cfg);
  const int m = cfg.model.m;
  require_init(cfg.true_init, m, "init m0/P0");
  require_init(cfg.wrong_init, m, "init mbar/Pbar");
  Writer w("stability_mean", cfg, out_dir);
  const TimeGrid grid = grid_of(cfg);
  const auto correct_gains = make_filter_gains(cfg.model, cfg.true_init.cov, grid);
  const auto wrong_gains = (cfg.wrong_init.cov == cfg.true_init.cov)
                               ? correct_gains
                               : make_filter_gains(cfg.model, cfg.wrong_init.cov, grid);
  const SimulationSpec spec = simulation_spec(cfg, false);

  struct Terminal {
    double gap0 = 0.0, gap_t = 0.0, ratio = 0.0, residual = 0.0, settling = 0.0;
  };
  std::vector<Terminal> terms(static_cast<std::size_t>(cfg.mc_runs));
  std::string first_path;
  const std::size_t stride = csv_stride(grid);
  for_each_index(cfg.mc_runs, exec, [&](long i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const ObservationPath obs = generate_observations(cfg.model, spec, seed);
    const PairRun pair = mismatched_pair(cfg.model, obs, cfg.true_init.mean, correct_gains,
                                         cfg.wrong_init.mean, wrong_gains);
    const MeanDecomposition dec = mean_decomposition_diagnostics(cfg.model, obs, pair);
    Terminal& t = terms[static_cast<std::size_t>(i)];
    t.gap0 = pair.gap_mean.front();
    t.gap_t = pair.gap_mean.back();
    t.ratio = ratio(t.gap_t, t.gap0);
    t.residual = dec.max_residual;
    t.settling = dec.zhat_settling;
    if (i == 0) {
      std::ostringstream os;
      write_csv(os, pair, dec, stride);
      first_path = os.str();
    }
  });

  double worst_ratio = 0.0, worst_residual = 0.0;
  for (const auto& t : terms) {
    worst_ratio = std::max(worst_ratio, t.ratio);
    worst_residual = std::max(worst_residual, t.residual);
  }
  w.file("mean_gap_seed" + std::to_string(cfg.seed) + ".csv", [&](std::ostream& os) { os << first_path; });
  w.file("terminals.csv", [&](std::ostream& os) {
    os << "seed,gap_initial,gap_final,ratio,max_residual,zhat_settling\n";
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const Terminal& t = terms[i];
      os << cfg.seed + i << ',' << g17(t.gap0) << ',' << g17(t.gap_t) << ',' << g17(t.ratio) << ','
         << g17(t.residual) << ',' << g17(t.settling) << '\n';
    }
  });
  w.add("seeds", seed_range(cfg));
  w.add("max_ratio", g17(worst_ratio));
  w.add("max_residual", g17(worst_residual));
  const Thresholds& th = cfg.thresholds;
  const bool ok = worst_ratio <= th.mean_gap_ratio && worst_residual <= th.reconstruction;
  return w.finish(ok, "max gap ratio " + g6(worst_ratio) + " (<= " + g6(th.mean_gap_ratio) +
                          "), max residual " + g6(worst_residual) + " (<= " +
                          g6(th.reconstruction) + ") over " + std::to_string(cfg.mc_runs) + " seeds");
}

RunArtifact cmd_nongaussian(const ExperimentConfig& cfg, const std::string& out_dir, Exec exec) {
  require_valid(cfg);
  const int m = cfg.model.m;
  require_init(cfg.true_init, m, "init m0/P0");
  require_init(cfg.wrong_init, m, "init mbar/Pbar");
  if (cfg.atoms.empty()) throw std::invalid_argument("nongaussian needs an [atoms] section");
  if (cfg.atoms.points.cols() != m) throw std::invalid_argument("atom points must have m columns");
  if (cfg.frequencies.cols() != m)
    throw std::invalid_argument("frequencies must have m columns (one test function per row)");
  Writer w("nongaussian", cfg, out_dir);
  const TimeGrid grid = grid_of(cfg);
  const SimulationSpec spec = simulation_spec(cfg, true);
  const auto ref_gains = make_filter_gains(cfg.model, cfg.wrong_init.cov, grid);
  const double early = std::min(1.0, grid.horizon());

  struct Row {
    int atom = -1;
    double mean_ratio = 0.0, cos_ratio = 0.0, bank_mean = 0.0, bank_logw = 0.0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(cfg.mc_runs));
  std::string first_path;
  const std::size_t stride = csv_stride(grid);
  for_each_index(cfg.mc_runs, exec, [&](long i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const ObservationPath obs = generate_observations(cfg.model, spec, seed);
    const MixturePath mix = mixture_filter(cfg.model, obs, cfg.atoms, cfg.true_init);
    const FilterRun ref = run_filter(cfg.model, obs, cfg.wrong_init.mean, ref_gains);
    const MergingReport rep = merging_report(mix, ref, cfg.frequencies, early);
    const MixturePath bank = bank_oracle(cfg.model, obs, cfg.atoms, cfg.true_init);
    Row& r = rows[static_cast<std::size_t>(i)];
    r.atom = obs.atom;
    r.mean_ratio = rep.mean_ratio;
    r.cos_ratio = rep.cos_ratio.size() ? rep.cos_ratio.maxCoeff() : 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      r.bank_mean = std::max(r.bank_mean, (mix.component_means[k] - bank.component_means[k]).cwiseAbs().maxCoeff());
      r.bank_logw = std::max(r.bank_logw, (mix.log_weights.col(static_cast<long>(k)) -
                                           bank.log_weights.col(static_cast<long>(k)))
                                              .cwiseAbs()
                                              .maxCoeff());
    }
    if (i == 0) {
      std::ostringstream os;
      write_csv(os, mix, rep, stride);
      first_path = os.str();
    }
  });

  double worst = 0.0, bank_mean = 0.0, bank_logw = 0.0;
  for (const auto& r : rows) {
    worst = std::max({worst, r.mean_ratio, r.cos_ratio});
    bank_mean = std::max(bank_mean, r.bank_mean);
    bank_logw = std::max(bank_logw, r.bank_logw);
  }
  w.file("merging_seed" + std::to_string(cfg.seed) + ".csv", [&](std::ostream& os) { os << first_path; });
  w.file("terminals.csv", [&](std::ostream& os) {
    os << "seed,atom,mean_ratio,cos_ratio_max,bank_mean_diff,bank_logw_diff\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      os << cfg.seed + i << ',' << r.atom << ',' << g17(r.mean_ratio) << ',' << g17(r.cos_ratio) << ','
         << g17(r.bank_mean) << ',' << g17(r.bank_logw) << '\n';
    }
  });
  std::ostringstream atoms;
  for (int i = 0; i < cfg.atoms.size(); ++i) {
    atoms << (i ? "; " : "") << g17(cfg.atoms.weights(i)) << " @";
    for (long j = 0; j < cfg.atoms.points.cols(); ++j) atoms << ' ' << g17(cfg.atoms.points(i, j));
  }
  w.add("seeds", seed_range(cfg));
  w.add("atoms", atoms.str());
  w.add("early_time", g17(early));
  w.add("max_merging_ratio", g17(worst));
  w.add("max_bank_mean_diff", g17(bank_mean));
  w.add("max_bank_logw_diff", g17(bank_logw));
  const bool ok = worst <= cfg.thresholds.merging_ratio;
  return w.finish(ok, "max merging ratio " + g6(worst) + " (<= " + g6(cfg.thresholds.merging_ratio) +
                          "), bank agreement " + g6(bank_mean) + " / " + g6(bank_logw));
}

RunArtifact cmd_smallnoise(const ExperimentConfig& cfg, const std::string& out_dir, Exec exec) {
  require_valid(cfg);
  require_init(cfg.true_init, cfg.model.m, "init m0/P0");
  Writer w("smallnoise", cfg, out_dir);
  const TimeGrid grid = grid_of(cfg);
  const auto clean = make_filter_gains(cfg.model, cfg.true_init.cov, grid);
  const StabilityEstimate est = exponential_stability_estimate(clean->psi);
  const EpsilonSweep sweep = run_epsilon_sweep(cfg, exec);
  const SweepFit fit = fit_scaling(sweep);
  const Thresholds& th = cfg.thresholds;
  const int violations = monotonicity_violations(sweep, th.monotone_slack);

  w.file("sweep.csv", [&](std::ostream& os) { write_csv(os, sweep); });
  w.file("summary.csv", [&](std::ostream& os) { write_summary_csv(os, sweep, fit); });

  double sup_f = 0.0;
  for (std::size_t k : csv_nodes(grid))
    sup_f = std::max(sup_f, spectral_norm(cfg.model.eval(grid.t(k)).F));
  std::string eps_list;
  for (double e : cfg.epsilons) eps_list += (eps_list.empty() ? "" : " ") + g17(e);
  w.add("seeds", seed_range(cfg));
  w.add("epsilons", eps_list);
  w.add("stability", est.verdict);
  w.add("alpha", g17(est.alpha));
  w.add("k", g17(est.k));
  w.add("rate_ratio", g17(est.rate_ratio));
  if (est.exponential && !cfg.epsilons.empty())
    w.add("cov_gap_bound_at_max_eps",
          g17(cov_gap_bound(*std::max_element(cfg.epsilons.begin(), cfg.epsilons.end()), est, sup_f)));
  w.add("slope_mean", fit.mean.valid ? g17(fit.mean.slope) : "none (" + fit.mean.reason + ")");
  w.add("slope_cov", fit.cov.valid ? g17(fit.cov.slope) : "none (" + fit.cov.reason + ")");
  w.add("monotonicity_violations", std::to_string(violations));

  auto in = [](const ScalingFit& f, double lo, double hi) { return f.valid && f.slope >= lo && f.slope <= hi; };
  const bool mean_ok = in(fit.mean, th.mean_slope_lo, th.mean_slope_hi);
  const bool cov_ok = in(fit.cov, th.cov_slope_lo, th.cov_slope_hi);
  const bool ok = est.exponential && mean_ok && cov_ok && violations == 0;
  auto slope = [](const ScalingFit& f) { return f.valid ? g6(f.slope) : std::string("none"); };
  return w.finish(ok, std::string("alpha ") + g6(est.alpha) + (est.exponential ? "" : " (not exponential)") +
                          ", mean slope " + slope(fit.mean) + " in [" + g6(th.mean_slope_lo) + ", " +
                          g6(th.mean_slope_hi) + "]" + (mean_ok ? "" : " NO") + ", cov slope " +
                          slope(fit.cov) + " in [" + g6(th.cov_slope_lo) + ", " + g6(th.cov_slope_hi) +
                          "]" + (cov_ok ? "" : " NO") + ", " + std::to_string(violations) +
                          " monotonicity violations");
}

ExperimentConfig default_config(const std::string& command) {
  if (command == "gramian") return scenarios::rotation_mean_config();
  if (command == "riccati" || command == "stability_cov" || command == "stability_mean")
    return scenarios::scalar_mean_config();
  if (command == "nongaussian") return scenarios::two_atom_config();
  if (command == "smallnoise") return scenarios::smallnoise_config();
  throw std::invalid_argument("no default scenario for '" + command + "'");
}

const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> names{"gramian",        "riccati",     "stability_cov",
                                              "stability_mean", "nongaussian", "smallnoise"};
  return names;
}

RunArtifact run_command(const std::string& command, const ExperimentConfig& cfg,
                        const std::string& out_dir, Exec exec) {
  if (command == "gramian") return cmd_gramian(cfg, out_dir, exec);
  if (command == "riccati") return cmd_riccati(cfg, out_dir, exec);
  if (command == "stability_cov") return cmd_stability_cov(cfg, out_dir, exec);
  if (command == "stability_mean") return cmd_stability_mean(cfg, out_dir, exec);
  if (command == "nongaussian") return cmd_nongaussian(cfg, out_dir, exec);
  if (command == "smallnoise") return cmd_smallnoise(cfg, out_dir, exec);
  throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace kbstab
