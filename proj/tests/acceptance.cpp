#include "kbstab/batch.hpp"
#include "kbstab/commands.hpp"
#include "kbstab/kalman.hpp"
#include "kbstab/nongaussian.hpp"
#include "kbstab/propagate.hpp"
#include "kbstab/riccati.hpp"
#include "kbstab/scenarios.hpp"
#include "kbstab/smallnoise.hpp"

#include <CLI11.hpp>
#include <boost/numeric/odeint.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace kbstab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

MatrixXd mat1(double v) { return MatrixXd::Constant(1, 1, v); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

/// Sub-measurements of one criterion; the criterion passes iff all do.
struct Report {
  std::vector<std::string> lines;
  bool ok = true;

  void le(const std::string& what, double value, double limit) {
    add(what + " = " + g(value) + " <= " + g(limit), value <= limit);
  }
  void ge(const std::string& what, double value, double limit) {
    add(what + " = " + g(value) + " >= " + g(limit), value >= limit);
  }
  void in(const std::string& what, double value, double lo, double hi) {
    add(what + " = " + g(value) + " in [" + g(lo) + ", " + g(hi) + "]", value >= lo && value <= hi);
  }
  void add(const std::string& text, bool pass) {
    lines.push_back(std::string(pass ? "  ok   " : "  FAIL ") + text);
    ok = ok && pass;
  }
};

double max_path_diff(const MatrixPath& a, const MatrixPath& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, spectral_norm(a[k] - b[k]));
  return worst;
}

// ------------------------------------------------------------------ 1

Report riccati_oracle() {
  Report r;
  const auto t0 = Clock::now();
  const TimeGrid grid = TimeGrid::over(5.0, 1e-3);
  const MatrixXd c3 = scenarios::random_matrix(2, 3, 12);
  const std::vector<std::pair<std::string, LtvModel>> families{
      {"constant m=3", LtvModel::constant(0.5 * scenarios::random_matrix(3, 3, 11), c3, scenarios::random_spd(2, 13))},
      {"periodic m=3", LtvModel::periodic(0.5 * scenarios::random_matrix(3, 3, 21), 0.5 * scenarios::random_matrix(3, 3, 22),
                                          1.5, scenarios::random_matrix(1, 3, 23), mat1(0.8))},
      {"rotation_damped m=2", LtvModel::rotation(1.0, -0.3, (MatrixXd(1, 2) << 1, 0).finished(), mat1(1))},
  };
  std::uint64_t seed = 31;
  for (const auto& [name, model] : families) {
    const MatrixXd p0 = scenarios::random_spd(model.m, seed++);
    const RiccatiSolution ode = integrate_dre(model, p0, grid);
    const MatrixPath phi = fundamental_matrix(model, grid);
    const MatrixPath exact = closed_form_dre(p0, phi, accumulated_information(model, phi));
    r.le(name + " max |P_ode - P_closed|", max_path_diff(ode.path, exact), 1e-6);
  }
  r.le("runtime s", seconds_since(t0), 10.0);
  return r;
}

// ------------------------------------------------------------------ 2

Report scalar_analytic() {
  Report r;
  const TimeGrid grid = TimeGrid::over(10.0, 1e-3);
  for (double p0 : {0.5, 1.0, 4.0}) {
    const LtvModel model = scenarios::random_walk();
    const RiccatiSolution p = integrate_dre(model, mat1(p0), grid);
    const MatrixPath psi = closed_loop_propagator(model, p.path, grid);
    double ep = 0.0, epsi = 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      const double t = grid.t(k);
      ep = std::max(ep, std::abs(p[k](0, 0) - p0 / (1 + p0 * t)));
      epsi = std::max(epsi, std::abs(psi[k](0, 0) - 1 / (1 + p0 * t)));
    }
    r.le("random walk p0=" + g(p0) + " |p - p0/(1+p0 t)|", ep, 1e-8);
    r.le("random walk p0=" + g(p0) + " |Psi - 1/(1+p0 t)|", epsi, 1e-8);
  }
  for (double a : {0.25, 1.0}) {
    const double p0 = 1.0;
    const RiccatiSolution p = integrate_dre(scenarios::scalar_unstable(a), mat1(p0), grid);
    double ep = 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      const double e = std::exp(2 * a * grid.t(k));
      ep = std::max(ep, std::abs(p[k](0, 0) - e * p0 / (1 + p0 * (e - 1) / (2 * a))));
    }
    r.le("growth a=" + g(a) + " |p - closed form|", ep, 1e-8);
  }
  for (const auto& [name, model] : std::vector<std::pair<std::string, LtvModel>>{
           {"random walk", scenarios::random_walk()}, {"growth a=0.25", scenarios::scalar_unstable()}}) {
    const FactorizationCheck fc = error_factorization_check(model, mat1(1.0), mat1(3.0), grid);
    r.le(name + " factorization residual", fc.max_residual, 1e-8);
  }
  return r;
}

// ------------------------------------------------------------------ 3

Report psi_integral() {
  Report r;
  const LtvModel model = scenarios::random_walk();
  const TimeGrid grid = TimeGrid::over(100.0, 1e-3);
  const MatrixXd p0 = mat1(1.0);
  const RiccatiSolution p = integrate_dre(model, p0, grid);
  const MatrixPath psi = closed_loop_propagator(model, p.path, grid);
  const PsiDecay decay = psi_decay_integral(psi);
  const double integral = decay.integral(0, 0);
  const double tail = integral - decay.cumulative[grid.index_of(50.0)](0, 0);
  const UcoEstimate gram = closed_loop_gramian(model, psi, 1.0, 100);
  const double bound = psi_decay_bound(p0, 1.0, gram.rho1)(0, 0);
  r.in("int_0^100 Psi^2", integral, 0.989, 0.9902);
  r.add("rho3 = " + g(gram.rho1) + ", bound tau P0^-1 / rho3 = " + g(bound) + " >= integral", integral <= bound);
  r.le("int_50^100 Psi^2", tail, 0.011);
  return r;
}

// ------------------------------------------------------------------ 4

Report mean_stability() {
  Report r;
  const auto t0 = Clock::now();
  for (const auto& [name, cfg] : std::vector<std::pair<std::string, ExperimentConfig>>{
           {"scalar", scenarios::scalar_mean_config()}, {"rotation", scenarios::rotation_mean_config()}}) {
    const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
    const auto gains = make_filter_gains(cfg.model, cfg.true_init.cov, grid);
    const auto wrong = make_filter_gains(cfg.model, cfg.wrong_init.cov, grid);
    SimulationSpec spec;
    spec.grid = grid;
    spec.substeps = cfg.substeps;
    spec.init = cfg.true_init;
    const int runs = 20;
    std::vector<double> ratio(runs), residual(runs);
    for_each_index(runs, Exec::parallel, [&](long i) {
      const ObservationPath obs = generate_observations(cfg.model, spec, cfg.seed + static_cast<std::uint64_t>(i));
      const PairRun pair = mismatched_pair(cfg.model, obs, cfg.true_init.mean, gains, cfg.wrong_init.mean, wrong);
      ratio[std::size_t(i)] = pair.gap_mean.back() / pair.gap_mean.front();
      residual[std::size_t(i)] = mean_decomposition_diagnostics(cfg.model, obs, pair).max_residual;
    });
    r.le(name + " max over 20 seeds gap(T=50)/gap(0)", *std::max_element(ratio.begin(), ratio.end()), 1e-3);
    r.le(name + " max reconstruction residual", *std::max_element(residual.begin(), residual.end()), 1e-6);
  }
  r.le("runtime s", seconds_since(t0), 60.0);
  return r;
}

// ------------------------------------------------------------------ 5

Report lyapunov() {
  Report r;
  for (const auto& [name, cfg] : std::vector<std::pair<std::string, ExperimentConfig>>{
           {"scalar", scenarios::scalar_mean_config()},
           {"rotation", scenarios::rotation_mean_config()},
           {"random walk", scenarios::random_walk_config()}}) {
    const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
    const auto gains = make_filter_gains(cfg.model, cfg.true_init.cov, grid);
    const double tau = cfg.uco_window;
    const UcoEstimate gram = closed_loop_gramian(cfg.model, gains->psi, tau, 100);
    const double rho3 = gram.rho1;
    double rise = -INFINITY, worst_ratio = INFINITY;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const VectorXd z0 = scenarios::random_matrix(cfg.model.m, 1, 1000 + s);
      const std::vector<double> v = lyapunov_trace(gains->psi, gains->riccati, z0);
      for (std::size_t k = 1; k < v.size(); ++k) rise = std::max(rise, v[k] - v[k - 1]);
      for (double t : gram.times) {
        const std::size_t a = grid.index_of(t), b = grid.index_of(t + tau);
        const double z2 = (gains->psi[a] * z0).squaredNorm();
        if (z2 > 0.0) worst_ratio = std::min(worst_ratio, (v[a] - v[b]) / (rho3 * z2));
      }
    }
    r.le(name + " max V(t+dt) - V(t), 10 starts", rise, 1e-9);
    r.ge(name + " min [V(t) - V(t+tau)] / (rho3 |z_t|^2), rho3 = " + g(rho3), worst_ratio, 0.9);
  }
  return r;
}

// ------------------------------------------------------------------ 6

// Phi and S from their own equations, S' = (A - P H) S - P H Phi, with the
// scalar prior covariance in closed form.
double shift_oracle_gap(const ExperimentConfig& cfg, const ExtendedSystem& ext, const MatrixPath& psi) {
  const double a = cfg.model.A0(0, 0), h = 1.0, p0 = cfg.true_init.cov(0, 0);
  auto p = [&](double t) {
    const double e = std::exp(2 * a * t);
    return e * p0 / (1 + p0 * (e - 1) / (2 * a));
  };
  using State = std::array<double, 2>;
  auto rhs = [&](const State& x, State& dx, double t) {
    const double pt = p(t);
    dx[0] = a * x[0];
    dx[1] = (a - pt * h) * x[1] - pt * h * x[0];
  };
  State x{1.0, 0.0};
  boost::numeric::odeint::runge_kutta4<State> stepper;
  const TimeGrid& grid = ext.grid();
  double worst = 0.0;
  for (std::size_t k = 0; k <= grid.steps; ++k) {
    if (k > 0) {
      const int sub = 4;
      for (int j = 0; j < sub; ++j)
        stepper.do_step(rhs, x, grid.t(k - 1) + j * grid.dt / sub, grid.dt / sub);
    }
    worst = std::max(worst, std::abs(x[0] + x[1] - psi[k](0, 0)));
  }
  return worst;
}

Report mixture() {
  Report r;
  const ExperimentConfig base = scenarios::two_atom_config();
  const TimeGrid grid = TimeGrid::over(base.horizon, base.dt);

  double mean_diff = 0.0, logw_diff = 0.0;
  std::vector<double> md(10), ld(10);
  for_each_index(10, Exec::parallel, [&](long i) {
    ExperimentConfig cfg = base;
    const std::uint64_t seed = base.seed + static_cast<std::uint64_t>(i);
    const int k = 2 + static_cast<int>(i % 3);
    cfg.atoms.points = 2.0 * scenarios::random_matrix(k, 1, seed);
    VectorXd w = scenarios::random_matrix(k, 1, seed + 500).cwiseAbs().array() + 0.1;
    cfg.atoms.weights = w / w.sum();
    SimulationSpec spec;
    spec.grid = grid;
    spec.substeps = cfg.substeps;
    spec.init = cfg.true_init;
    spec.atoms = cfg.atoms;
    const ObservationPath obs = generate_observations(cfg.model, spec, seed);
    const MixturePath mix = mixture_filter(cfg.model, obs, cfg.atoms, cfg.true_init);
    const MixturePath bank = bank_oracle(cfg.model, obs, cfg.atoms, cfg.true_init);
    for (std::size_t n = 0; n < grid.nodes(); ++n) {
      md[std::size_t(i)] = std::max(md[std::size_t(i)], (mix.component_means[n] - bank.component_means[n]).cwiseAbs().maxCoeff());
      ld[std::size_t(i)] = std::max(ld[std::size_t(i)], (mix.log_weights.col(long(n)) - bank.log_weights.col(long(n))).cwiseAbs().maxCoeff());
    }
  });
  for (int i = 0; i < 10; ++i) {
    mean_diff = std::max(mean_diff, md[std::size_t(i)]);
    logw_diff = std::max(logw_diff, ld[std::size_t(i)]);
  }
  r.le("mixture vs bank, 10 scenarios, max component mean diff", mean_diff, 1e-6);
  r.le("mixture vs bank, 10 scenarios, max log-weight diff", logw_diff, 1e-8);

  SimulationSpec spec;
  spec.grid = grid;
  spec.substeps = base.substeps;
  spec.init = base.true_init;
  spec.atoms = base.atoms;
  const auto psi_gains = make_filter_gains(base.model, base.true_init.cov, grid);
  const ExtendedSystem ext0 = integrate_extended_system(base.model, generate_observations(base.model, spec, base.seed),
                                                        base.true_init);
  double dg = 0.0;
  for (std::size_t n = 0; n < grid.nodes(); ++n)
    dg = std::max(dg, spectral_norm(ext0.phi[n] + ext0.s[n] - psi_gains->psi[n]));
  r.le("max |Phi + S - Psi^P'|", dg, 1e-6);
  r.le("max |Phi + S - Psi^P'| with Phi, S from their own ODEs", shift_oracle_gap(base, ext0, psi_gains->psi), 1e-6);

  const auto ref_gains = make_filter_gains(base.model, base.wrong_init.cov, grid);
  double mean_ratio = 0.0, cos_ratio = 0.0;
  for (int i = 0; i < base.mc_runs; ++i) {
    const ObservationPath obs = generate_observations(base.model, spec, base.seed + static_cast<std::uint64_t>(i));
    const MixturePath mix = mixture_filter(base.model, obs, base.atoms, base.true_init);
    const FilterRun ref = run_filter(base.model, obs, base.wrong_init.mean, ref_gains);
    const MergingReport rep = merging_report(mix, ref, base.frequencies, 1.0);
    mean_ratio = std::max(mean_ratio, rep.mean_ratio);
    cos_ratio = std::max(cos_ratio, rep.cos_ratio.maxCoeff());
  }
  r.le("two-atom mean-gap ratio gap(30)/gap(1), max over " + std::to_string(base.mc_runs) + " seeds", mean_ratio, 0.1);
  r.le("two-atom cosine-gap ratio gap(30)/gap(1), max over " + std::to_string(base.mc_runs) + " seeds", cos_ratio, 0.1);
  return r;
}

// ------------------------------------------------------------------ 7

Report small_noise() {
  Report r;
  const auto t0 = Clock::now();
  const ExperimentConfig cfg = scenarios::smallnoise_config();
  const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
  const StabilityEstimate est = exponential_stability_estimate(make_filter_gains(cfg.model, cfg.true_init.cov, grid)->psi);
  r.add("closed loop " + est.verdict + ", alpha = " + g(est.alpha), est.exponential && est.alpha > 0.0);
  const EpsilonSweep sweep = run_epsilon_sweep(cfg, Exec::parallel);
  const SweepFit fit = fit_scaling(sweep);
  std::ostringstream med;
  for (std::size_t i = 0; i < sweep.epsilons.size(); ++i)
    med << (i ? ", " : "") << "eps " << g(sweep.epsilons[i]) << ": " << g(sweep.median_mean[i]) << " / "
        << g(sweep.median_cov[i]);
  r.lines.push_back("  info median sup mean / cov gap: " + med.str());
  r.add("cov fit valid", fit.cov.valid);
  r.add("mean fit valid", fit.mean.valid);
  r.in("cov-gap slope", fit.cov.slope, 1.8, 2.2);
  r.in("mean-gap slope", fit.mean.slope, 0.7, 1.3);
  r.le("monotonicity violations at 5% slack", monotonicity_violations(sweep, 0.05), 0);
  r.le("runtime s", seconds_since(t0), 120.0);
  return r;
}

// ------------------------------------------------------------------ 8

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> manifest_files(const fs::path& dir) {
  std::ifstream in(dir / "manifest.txt");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("files = ", 0) != 0) continue;
    std::istringstream names(line.substr(8));
    std::vector<std::string> out;
    for (std::string f; names >> f;) out.push_back(f);
    return out;
  }
  return {};
}

Report determinism(const fs::path& scratch) {
  Report r;
  fs::remove_all(scratch);
  for (const auto& c : experiment_commands()) {
    std::array<fs::path, 3> dirs;
    const std::array<const char*, 3> threads{"1", "1", "4"};
    bool ran = true;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      dirs[i] = scratch / (c + "_" + std::to_string(i));
      const std::string cmd = std::string("OMP_NUM_THREADS=") + threads[i] + " " + KBSTAB_CLI + " " + c +
                              " --out " + dirs[i].string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      ran = ran && WIFEXITED(status) && WEXITSTATUS(status) <= 1 && fs::exists(dirs[i] / "manifest.txt");
    }
    if (!ran) {
      r.add(c + ": run did not complete", false);
      continue;
    }
    const auto files = manifest_files(dirs[0]);
    int differing = 0;
    for (const auto& f : files)
      for (std::size_t i = 1; i < dirs.size(); ++i) differing += slurp(dirs[0] / f) != slurp(dirs[i] / f);
    r.add(c + ": " + std::to_string(files.size()) + " CSVs byte-identical across reruns (1, 1, 4 threads)",
          !files.empty() && differing == 0);
  }
  return r;
}

// ------------------------------------------------------------------ 9

Report grid_order() {
  Report r;
  const double horizon = 5.0;
  auto ratio = [&](const std::function<double(const TimeGrid&)>& err, double dt) {
    return err(TimeGrid::over(horizon, dt)) / err(TimeGrid::over(horizon, dt / 2));
  };
  auto phi_periodic = [&](const TimeGrid& grid) {
    const double a0 = 0.1, a1 = 0.5, w = 2.0;
    const MatrixPath phi = fundamental_matrix(LtvModel::periodic(mat1(a0), mat1(a1), w, mat1(1), mat1(1)), grid);
    double e = 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k)
      e = std::max(e, std::abs(phi[k](0, 0) - std::exp(a0 * grid.t(k) + a1 * (1 - std::cos(w * grid.t(k))) / w)));
    return e;
  };
  auto phi_rotation = [&](const TimeGrid& grid) {
    const MatrixPath phi = fundamental_matrix(scenarios::rotation_expanding(), grid);
    double e = 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      const double t = grid.t(k);
      const MatrixXd exact = std::exp(0.3 * t) * (MatrixXd(2, 2) << std::cos(t), std::sin(t), -std::sin(t), std::cos(t)).finished();
      e = std::max(e, spectral_norm(phi[k] - exact));
    }
    return e;
  };
  auto dre_walk = [&](const TimeGrid& grid) {
    const RiccatiSolution p = integrate_dre(scenarios::random_walk(), mat1(1.0), grid);
    double e = 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) e = std::max(e, std::abs(p[k](0, 0) - 1.0 / (1 + grid.t(k))));
    return e;
  };
  auto dre_growth = [&](const TimeGrid& grid) {
    const double a = 1.0, p0 = 1.0;
    const RiccatiSolution p = integrate_dre(scenarios::scalar_unstable(a), mat1(p0), grid);
    double e = 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      const double x = std::exp(2 * a * grid.t(k));
      e = std::max(e, std::abs(p[k](0, 0) - x * p0 / (1 + p0 * (x - 1) / (2 * a))));
    }
    return e;
  };
  for (double dt : {0.1, 0.05}) {
    r.in("Phi periodic scalar, dt " + g(dt) + " -> " + g(dt / 2), ratio(phi_periodic, dt), 8, 32);
    r.in("Phi expanding rotation, dt " + g(dt) + " -> " + g(dt / 2), ratio(phi_rotation, dt), 8, 32);
    r.in("Riccati random walk p0=1, dt " + g(dt) + " -> " + g(dt / 2), ratio(dre_walk, dt), 8, 32);
    r.in("Riccati growth a=1, dt " + g(dt) + " -> " + g(dt / 2), ratio(dre_growth, dt), 8, 32);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::string scratch = (fs::temp_directory_path() / ("kbstab_acceptance_" + std::to_string(::getpid()))).string();
  app.add_option("--criterion", only, "Run a single criterion (1-9); all when omitted")->check(CLI::Range(1, 9));
  app.add_option("--scratch", scratch, "Directory for subcommand artifacts");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Report()>>> criteria{
      {"Riccati ODE vs closed form, three families", riccati_oracle},
      {"scalar analytic suite", scalar_analytic},
      {"closed-loop decay integral and bound", psi_integral},
      {"mismatched-mean stability and reconstruction", mean_stability},
      {"Lyapunov monotonicity and windowed decrease", lyapunov},
      {"mixture filter, bank oracle, merging", mixture},
      {"small-noise scaling", small_noise},
      {"determinism of subcommand CSVs", [&] { return determinism(scratch); }},
      {"fourth-order grid convergence", grid_order},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto t0 = Clock::now();
    Report r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.add(std::string("exception: ") + e.what(), false);
    }
    std::cout << (r.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << g(seconds_since(t0)) << " s)\n";
    for (const auto& line : r.lines) std::cout << line << '\n';
    std::cout.flush();
    all = all && r.ok;
  }
  fs::remove_all(scratch);
  return all ? 0 : 1;
}
