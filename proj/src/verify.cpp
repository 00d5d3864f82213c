#include "kbstab/verify.hpp"

#include "kbstab/kalman.hpp"
#include "kbstab/nongaussian.hpp"
#include "kbstab/scenarios.hpp"
#include "kbstab/smallnoise.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace kbstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

MatrixXd mat1(double v) { return MatrixXd::Constant(1, 1, v); }
VectorXd vec1(double v) { return VectorXd::Constant(1, v); }
MatrixXd eye(int n) { return MatrixXd::Identity(n, n); }
MatrixXd zeros(int r, int c) { return MatrixXd::Zero(r, c); }
double sq(double x) { return x * x; }

double max_diff(const MatrixPath& a, const MatrixPath& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, spectral_norm(a[k] - b[k]));
  return worst;
}

template <class F>
double max_over_path(const MatrixPath& p, F f) {
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) worst = std::max(worst, f(p.grid.t(k), p[k]));
  return worst;
}

// Fixed-step RK4 transition matrix of x' = A(t) x from t1 to t2, an
// integration independent of fundamental_matrix's grid.
MatrixXd rk4_transition(const LtvModel& model, double t1, double t2, std::size_t steps) {
  const double h = (t2 - t1) / static_cast<double>(steps);
  MatrixXd x = eye(model.m);
  for (std::size_t j = 0; j < steps; ++j) {
    const double t = t1 + static_cast<double>(j) * h;
    const MatrixXd a0 = model.eval(t).A, am = model.eval(t + 0.5 * h).A, a1 = model.eval(t + h).A;
    const MatrixXd k1 = a0 * x;
    const MatrixXd k2 = am * (x + 0.5 * h * k1);
    const MatrixXd k3 = am * (x + 0.5 * h * k2);
    const MatrixXd k4 = a1 * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

SimulationSpec sim_spec(double horizon, double dt, const GaussianInit& init, double eps = 0.0,
                        ObservationNoise noise = ObservationNoise::standard) {
  SimulationSpec spec;
  spec.grid = TimeGrid::over(horizon, dt);
  spec.init = init;
  spec.epsilon = eps;
  spec.noise = noise;
  return spec;
}

bool contains(const std::vector<std::string>& report, const std::string& needle) {
  return std::any_of(report.begin(), report.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

LtvModel periodic_2x2() {
  LtvModel model = LtvModel::periodic((MatrixXd(2, 2) << -0.2, 1.0, -1.0, -0.1).finished(),
                                      (MatrixXd(2, 2) << 0.3, 0.0, 0.2, -0.3).finished(), 2.0,
                                      (MatrixXd(1, 2) << 1.0, 0.5).finished(), eye(1));
  model.C1 = (MatrixXd(1, 2) << 0.0, 0.4).finished();
  model.R1 = mat1(0.3);
  model.finalize();
  return model;
}

double mixture_weight_sum_error(const MixturePath& mix) {
  double worst = 0.0;
  for (std::size_t k = 0; k < mix.grid.nodes(); ++k) worst = std::max(worst, std::abs(mix.weights(k).sum() - 1.0));
  return worst;
}

// ---------------------------------------------------------------- model

void add_model_checks(std::vector<Check>& c) {
  c.push_back({"model", "eval_constant", -kInf, 0.0, [] {
                 const auto co = LtvModel::constant(zeros(2, 2), eye(2), eye(2)).eval(3.7);
                 return co.A.norm() + (co.C - eye(2)).norm() + (co.R - eye(2)).norm() + (co.R_inv - eye(2)).norm();
               }});
  c.push_back({"model", "eval_periodic_sine", -kInf, 1e-15, [] {
                 const auto model = LtvModel::periodic(mat1(0.0), mat1(1.0), 1.0, mat1(1.0), mat1(1.0));
                 return std::abs(model.eval(kPi / 2).A(0, 0) - 1.0);
               }});
  c.push_back({"model", "eval_rotation", -kInf, 0.0, [] {
                 const auto model = LtvModel::rotation(1.0, 0.0, (MatrixXd(1, 2) << 1, 0).finished(), eye(1));
                 return (model.eval(2.3).A - (MatrixXd(2, 2) << 0, 1, -1, 0).finished()).norm();
               }});
  c.push_back({"model", "r_inverse", -kInf, 1e-12, [] {
                 LtvModel periodic = periodic_2x2();
                 const LtvModel models[] = {
                     LtvModel::constant(zeros(2, 2), eye(2), (MatrixXd(2, 2) << 2, 0.5, 0.5, 1).finished()),
                     periodic, scenarios::rotation_expanding()};
                 double worst = 0.0;
                 for (const auto& model : models)
                   for (int i = 0; i < 100; ++i) {
                     const auto co = model.eval(0.173 * i);
                     worst = std::max(worst, (co.R * co.R_inv - eye(model.n)).norm());
                   }
                 return worst;
               }});
  c.push_back({"model", "validate_p0_singular", -kInf, 0.0, [] {
                 auto cfg = scenarios::random_walk_config();
                 cfg.true_init.cov = mat1(0.0);
                 return contains(validate_config(cfg), "P0 not invertible") ? 0.0 : 1.0;
               }});
  c.push_back({"model", "validate_atom_sum", -kInf, 0.0, [] {
                 auto cfg = scenarios::two_atom_config();
                 cfg.atoms.weights << 0.5, 0.6;
                 return contains(validate_config(cfg), "atom weights sum 1.1") ? 0.0 : 1.0;
               }});
  c.push_back({"model", "validate_default", -kInf, 0.0, [] {
                 return static_cast<double>(validate_config(scenarios::random_walk_config()).size());
               }});
  c.push_back({"model", "parse_minimal", -kInf, 0.0, [] {
                 const auto cfg = parse_config(
                     "[model]\nm = 1\nn = 1\nA0.shape = 1 1\nA0.data = 0\nC0.shape = 1 1\nC0.data = 1\n"
                     "[init]\nm0.shape = 1 1\nm0.data = 0\nP0.shape = 1 1\nP0.data = 1\n");
                 return (cfg.model.m == 1 && cfg.model.n == 1 && cfg.atoms.empty()) ? 0.0 : 1.0;
               }});
  c.push_back({"model", "parse_shape_mismatch", -kInf, 0.0, [] {
                 try {
                   parse_config("[model]\nm = 2\nn = 2\nA0.shape = 2 2\nA0.data = 0 0 0 0\n"
                                "C0.shape = 2 3\nC0.data = 1 0 0 0 1 0\n"
                                "[init]\nm0.shape = 2 1\nm0.data = 0 0\nP0.shape = 2 2\nP0.data = 1 0 0 1\n");
                 } catch (const ConfigError&) {
                   return 0.0;
                 }
                 return 1.0;
               }});
  c.push_back({"model", "config_roundtrip", -kInf, 0.0, [] {
                 const ExperimentConfig cfgs[] = {scenarios::random_walk_config(), scenarios::rotation_mean_config(),
                                                  scenarios::two_atom_config(), scenarios::smallnoise_config()};
                 int failures = 0;
                 for (const auto& cfg : cfgs)
                   if (!configs_equal(parse_config(serialize_config(cfg)), cfg)) ++failures;
                 return static_cast<double>(failures);
               }});
}

// ------------------------------------------------------------ propagate

void add_propagate_checks(std::vector<Check>& c) {
  c.push_back({"propagate", "phi_zero_generator", -kInf, 0.0, [] {
                 const auto phi = fundamental_matrix(LtvModel::constant(zeros(2, 2), eye(2), eye(2)), TimeGrid::over(5, 1e-3));
                 return max_over_path(phi, [](double, const MatrixXd& v) { return (v - eye(2)).norm(); });
               }});
  c.push_back({"propagate", "phi_exponential", -kInf, 1e-9, [] {
                 const auto phi = fundamental_matrix(LtvModel::scalar(1, 1, 1), TimeGrid::over(1, 1e-3));
                 return std::abs(phi.back()(0, 0) - std::exp(1.0));
               }});
  c.push_back({"propagate", "phi_rotation", -kInf, 1e-9, [] {
                 const auto model = LtvModel::rotation(1.0, 0.0, (MatrixXd(1, 2) << 1, 0).finished(), eye(1));
                 const auto phi = fundamental_matrix(model, TimeGrid{kPi / 2 / 1571, 1571});
                 return (phi.back() - (MatrixXd(2, 2) << 0, 1, -1, 0).finished()).norm();
               }});
  c.push_back({"propagate", "psi_unobservable", -kInf, 1e-12, [] {
                 const auto model = LtvModel::constant(scenarios::random_matrix(2, 2, 3) * 0.3, zeros(1, 2), eye(1));
                 const TimeGrid grid = TimeGrid::over(5, 1e-3);
                 const auto p = integrate_dre(model, eye(2), grid);
                 return max_diff(closed_loop_propagator(model, p.path, grid), fundamental_matrix(model, grid));
               }});
  c.push_back({"propagate", "psi_scalar_p1", -kInf, 1e-8, [] {
                 const TimeGrid grid = TimeGrid::over(3, 1e-3);
                 const auto model = scenarios::random_walk();
                 const auto psi = closed_loop_propagator(model, integrate_dre(model, mat1(1), grid).path, grid);
                 return std::abs(psi.back()(0, 0) - 0.25);
               }});
  c.push_back({"propagate", "psi_scalar_p2", -kInf, 1e-8, [] {
                 const TimeGrid grid = TimeGrid::over(1, 1e-3);
                 const auto model = scenarios::random_walk();
                 const auto psi = closed_loop_propagator(model, integrate_dre(model, mat1(2), grid).path, grid);
                 return std::abs(psi.back()(0, 0) - 1.0 / 3.0);
               }});
  c.push_back({"propagate", "cbar_identity", -kInf, 1e-12, [] {
                 const auto model = LtvModel::constant(zeros(2, 2), eye(2), eye(2));
                 const auto cbar = accumulated_information(model, fundamental_matrix(model, TimeGrid::over(5, 1e-3)));
                 return max_over_path(cbar, [](double t, const MatrixXd& v) { return (v - t * eye(2)).norm(); });
               }});
  c.push_back({"propagate", "cbar_zero", -kInf, 0.0, [] {
                 const auto model = LtvModel::constant(scenarios::random_matrix(2, 2, 4), zeros(1, 2), eye(1));
                 const auto cbar = accumulated_information(model, fundamental_matrix(model, TimeGrid::over(5, 1e-3)));
                 return max_over_path(cbar, [](double, const MatrixXd& v) { return v.norm(); });
               }});
  c.push_back({"propagate", "cbar_exponential", -kInf, 1e-8, [] {
                 const auto model = LtvModel::scalar(1, 1, 1);
                 const auto cbar = accumulated_information(model, fundamental_matrix(model, TimeGrid::over(1, 1e-3)));
                 return std::abs(cbar.back()(0, 0) - (std::exp(2.0) - 1.0) / 2.0);
               }});
  c.push_back({"propagate", "cbar_monotone", -1e-12, kInf, [] {
                 const auto model = periodic_2x2();
                 const auto cbar = accumulated_information(model, fundamental_matrix(model, TimeGrid::over(10, 1e-3)));
                 double floor = kInf;
                 for (std::size_t k = 0; k + 1 < cbar.size(); ++k)
                   floor = std::min(floor, min_eigenvalue(cbar[k + 1] - cbar[k]));
                 return floor;
               }});
  c.push_back({"propagate", "uco_constant", -kInf, 1e-8, [] {
                 const auto model = LtvModel::constant(zeros(2, 2), eye(2), eye(2));
                 const auto est = uco_gramian(model, fundamental_matrix(model, TimeGrid::over(10, 1e-3)), 2.0, 10);
                 return std::max(std::abs(est.rho1 - 2.0), std::abs(est.rho2 - 2.0));
               }});
  c.push_back({"propagate", "uco_unobservable", -kInf, 0.0, [] {
                 const auto model = LtvModel::constant(zeros(2, 2), zeros(1, 2), eye(1));
                 const auto est = uco_gramian(model, fundamental_matrix(model, TimeGrid::over(5, 1e-3)), 1.0, 10);
                 return std::abs(est.rho1) + std::abs(est.rho2) + (est.plausible ? 1.0 : 0.0);
               }});
  c.push_back({"propagate", "uco_rank_one", -kInf, 1e-12, [] {
                 const auto model = LtvModel::constant(zeros(2, 2), (MatrixXd(1, 2) << 1, 0).finished(), eye(1));
                 const auto est = uco_gramian(model, fundamental_matrix(model, TimeGrid::over(5, 1e-3)), 1.0, 10);
                 return std::abs(est.rho1) + (est.plausible ? 1.0 : 0.0);
               }});
  c.push_back({"propagate", "uco_rotation_full_period", 3.0, 3.3, [] {
                 const auto model = LtvModel::rotation(1.0, 0.0, (MatrixXd(1, 2) << 1, 0).finished(), eye(1));
                 const auto est = uco_gramian(model, fundamental_matrix(model, TimeGrid::over(20, 1e-3)), 2 * kPi, 50);
                 return est.rho1;
               }});
  c.push_back({"propagate", "psi_decay_scalar", 0.989, 0.9902, [] {
                 const auto cfg = scenarios::random_walk_config();
                 const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
                 const auto p = integrate_dre(cfg.model, cfg.true_init.cov, grid);
                 return psi_decay_integral(closed_loop_propagator(cfg.model, p.path, grid)).integral(0, 0);
               }});
  c.push_back({"propagate", "psi_decay_unobservable", 1.5, kInf, [] {
                 const auto model = LtvModel::constant(zeros(1, 1), zeros(1, 1), eye(1));
                 const TimeGrid grid = TimeGrid::over(10, 1e-2);
                 const auto decay = psi_decay_integral(closed_loop_propagator(model, integrate_dre(model, mat1(1), grid).path, grid));
                 return decay.tail_norms.back() / decay.tail_norms.front();
               }});
  c.push_back({"propagate", "psi_decay_bound_scalar", -kInf, 0.0, [] {
                 const auto cfg = scenarios::random_walk_config();
                 const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
                 const auto p = integrate_dre(cfg.model, cfg.true_init.cov, grid);
                 const auto decay = psi_decay_integral(closed_loop_propagator(cfg.model, p.path, grid));
                 return decay.integral(0, 0) - psi_decay_bound(cfg.true_init.cov, 1.0, 1.0)(0, 0);
               }});
  c.push_back({"propagate", "cocycle", -kInf, 1e-8, [] {
                 const auto model = periodic_2x2();
                 const auto phi = fundamental_matrix(model, TimeGrid::over(4, 1e-3));
                 const MatrixXd step = rk4_transition(model, 1.5, 4.0, 5000);
                 return (phi.back() - step * phi[1500]).norm();
               }});
  c.push_back({"propagate", "grid_order_phi", 8.0, 32.0, [] {
                 const double a0 = 0.1, a1 = 0.5, w = 2.0, horizon = 5.0;
                 const auto model = LtvModel::periodic(mat1(a0), mat1(a1), w, mat1(1), mat1(1));
                 const double exact = std::exp(a0 * horizon + a1 * (1 - std::cos(w * horizon)) / w);
                 const double coarse = std::abs(fundamental_matrix(model, TimeGrid::over(horizon, 0.1)).back()(0, 0) - exact);
                 const double fine = std::abs(fundamental_matrix(model, TimeGrid::over(horizon, 0.05)).back()(0, 0) - exact);
                 return coarse / fine;
               }});
}

// -------------------------------------------------------------- riccati

void add_riccati_checks(std::vector<Check>& c) {
  c.push_back({"riccati", "scalar_random_walk", -kInf, 1e-9, [] {
                 return std::abs(integrate_dre(scenarios::random_walk(), mat1(1), TimeGrid::over(1, 1e-3)).path.back()(0, 0) - 0.5);
               }});
  c.push_back({"riccati", "scalar_growth", -kInf, 1e-8, [] {
                 const double e2 = std::exp(2.0);
                 return std::abs(integrate_dre(LtvModel::scalar(1, 1, 1), mat1(1), TimeGrid::over(1, 1e-3)).path.back()(0, 0) -
                                 e2 / (1 + (e2 - 1) / 2));
               }});
  c.push_back({"riccati", "zero_fixed_point", -kInf, 0.0, [] {
                 const auto p = integrate_dre(scenarios::rotation_expanding(), zeros(2, 2), TimeGrid::over(5, 1e-3));
                 return max_over_path(p.path, [](double, const MatrixXd& v) { return v.norm(); });
               }});
  c.push_back({"riccati", "closed_form_identity", -kInf, 1e-12, [] {
                 const auto model = LtvModel::constant(zeros(2, 2), eye(2), eye(2));
                 const auto phi = fundamental_matrix(model, TimeGrid::over(5, 1e-3));
                 const auto p = closed_form_dre(eye(2), phi, accumulated_information(model, phi));
                 return max_over_path(p, [](double t, const MatrixXd& v) { return (v - eye(2) / (1 + t)).norm(); });
               }});
  c.push_back({"riccati", "closed_form_zero", -kInf, 0.0, [] {
                 const auto model = scenarios::rotation_expanding();
                 const auto phi = fundamental_matrix(model, TimeGrid::over(5, 1e-3));
                 const auto p = closed_form_dre(zeros(2, 2), phi, accumulated_information(model, phi));
                 return max_over_path(p, [](double, const MatrixXd& v) { return v.norm(); });
               }});
  c.push_back({"riccati", "closed_form_random3", -kInf, 1e-6, [] {
                 const auto model = LtvModel::constant(0.4 * scenarios::random_matrix(3, 3, 11),
                                                       scenarios::random_matrix(2, 3, 12), scenarios::random_spd(2, 13));
                 const TimeGrid grid = TimeGrid::over(5, 1e-3);
                 const MatrixXd p0 = scenarios::random_spd(3, 14);
                 const auto phi = fundamental_matrix(model, grid);
                 return max_diff(integrate_dre(model, p0, grid).path, closed_form_dre(p0, phi, accumulated_information(model, phi)));
               }});
  c.push_back({"riccati", "factorization_equal", -kInf, 0.0, [] {
                 return error_factorization_check(scenarios::rotation_expanding(), eye(2), eye(2), TimeGrid::over(5, 1e-3)).max_residual;
               }});
  c.push_back({"riccati", "factorization_scalar", -kInf, 1e-8, [] {
                 const auto chk = error_factorization_check(scenarios::random_walk(), mat1(1), mat1(2), TimeGrid::over(1, 1e-3));
                 const double e = chk.first.path.back()(0, 0) - chk.second.path.back()(0, 0);
                 return std::max(chk.max_residual, std::abs(e + 1.0 / 6.0));
               }});
  c.push_back({"riccati", "factorization_rotation", -kInf, 1e-6, [] {
                 return error_factorization_check(scenarios::rotation_expanding(), scenarios::random_spd(2, 21),
                                                  scenarios::random_spd(2, 22), TimeGrid::over(10, 1e-3))
                     .max_residual;
               }});
  c.push_back({"riccati", "cov_gap_eps_zero", -kInf, 0.0, [] {
                 const auto model = scenarios::scalar_unstable(0.25, 1.0);
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 return covariance_gap(integrate_dre(model, mat1(0.5), grid, 0.0), integrate_dre(model, mat1(0.5), grid)).sup;
               }});
  c.push_back({"riccati", "cov_gap_f_zero", -kInf, 0.0, [] {
                 const auto model = scenarios::scalar_unstable(0.25, 0.0);
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 return covariance_gap(integrate_dre(model, mat1(0.5), grid, 0.3), integrate_dre(model, mat1(0.5), grid)).sup;
               }});
  c.push_back({"riccati", "cov_gap_eps_ratio", 3.5, 4.5, [] {
                 const auto model = scenarios::scalar_unstable(0.25, 1.0);
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 const auto p = integrate_dre(model, mat1(0.5), grid);
                 return covariance_gap(integrate_dre(model, mat1(0.5), grid, 0.1), p).sup /
                        covariance_gap(integrate_dre(model, mat1(0.5), grid, 0.05), p).sup;
               }});
  c.push_back({"riccati", "cov_gap_psd", -kInf, 0.0, [] {
                 const auto model = scenarios::rotation_expanding();
                 LtvModel noisy = model;
                 noisy.F0 = eye(2);
                 noisy.finalize();
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 const auto gap = covariance_gap(integrate_dre(noisy, eye(2), grid, 0.2), integrate_dre(noisy, eye(2), grid));
                 return gap.psd ? 0.0 : 1.0;
               }});
  c.push_back({"riccati", "monotone_in_init", -1e-9, kInf, [] {
                 const auto model = periodic_2x2();
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 const MatrixXd p0 = scenarios::random_spd(2, 31);
                 const auto lo = integrate_dre(model, p0, grid);
                 const auto hi = integrate_dre(model, p0 + scenarios::random_spd(2, 32), grid);
                 double floor = kInf;
                 for (std::size_t k = 0; k < grid.nodes(); ++k) floor = std::min(floor, min_eigenvalue(hi[k] - lo[k]));
                 return floor;
               }});
  c.push_back({"riccati", "subspace_collapse", -kInf, 1e-3, [] {
                 const auto model = LtvModel::constant((MatrixXd(2, 2) << -1, 0, 0, 0.5).finished(),
                                                       (MatrixXd(1, 2) << 0, 1).finished(), eye(1));
                 const MatrixXd p0 = (MatrixXd(2, 2) << 1, 0.3, 0.3, 1).finished();
                 const auto p = integrate_dre(model, p0, TimeGrid::over(20, 1e-3));
                 return p.path.back()(0, 0) / p0(0, 0);
               }});
}

// ------------------------------------------------------------- simulate

void add_simulate_checks(std::vector<Check>& c) {
  c.push_back({"simulate", "x0_degenerate", -kInf, 0.0, [] {
                 RngStream rng(5, "x0");
                 const GaussianInit init{(VectorXd(2) << 1.5, -2).finished(), zeros(2, 2)};
                 return (draw_initial_state(init, {}, rng).x0 - init.mean).norm();
               }});
  c.push_back({"simulate", "atom_frequency", -kInf, 3.0, [] {
                 AtomSet atoms{(MatrixXd(2, 1) << 1, -1).finished(), VectorXd::Constant(2, 0.5)};
                 const GaussianInit init{vec1(0), mat1(0)};
                 RngStream rng(42, "x0");
                 const int draws = 10000;
                 int plus = 0;
                 for (int i = 0; i < draws; ++i) {
                   const auto d = draw_initial_state(init, atoms, rng);
                   if (std::abs(std::abs(d.x0(0)) - 1.0) > 0) return kInf;
                   if (d.x0(0) > 0) ++plus;
                 }
                 return std::abs(plus / static_cast<double>(draws) - 0.5) / std::sqrt(0.25 / draws);
               }});
  c.push_back({"simulate", "x0_seed_repro", -kInf, 0.0, [] {
                 const GaussianInit init{VectorXd::Zero(3), scenarios::random_spd(3, 1)};
                 RngStream a(42, "x0"), b(42, "x0");
                 return (draw_initial_state(init, {}, a).x0 - draw_initial_state(init, {}, b).x0).norm();
               }});
  c.push_back({"simulate", "truth_constant", -kInf, 0.0, [] {
                 RngStream rng(1, "V");
                 const VectorXd x0 = (VectorXd(2) << 0.3, -0.7).finished();
                 const auto truth = simulate_truth(LtvModel::constant(zeros(2, 2), eye(2), eye(2)), x0, TimeGrid::over(5, 1e-3), 0.0, rng);
                 return (truth.states.colwise() - x0).norm();
               }});
  c.push_back({"simulate", "truth_exponential", -kInf, 1e-9, [] {
                 RngStream rng(1, "V");
                 const auto truth = simulate_truth(LtvModel::scalar(1, 1, 1), vec1(1), TimeGrid::over(1, 1e-3), 0.0, rng);
                 return std::abs(truth.states(0, truth.states.cols() - 1) - std::exp(1.0));
               }});
  c.push_back({"simulate", "truth_variance", -kInf, 3.0, [] {
                 const double eps = 0.5, horizon = 1.0;
                 const int seeds = 1000;
                 const auto model = LtvModel::scalar(0, 1, 1, 1);
                 std::vector<double> end(seeds);
                 for (int s = 0; s < seeds; ++s) {
                   RngStream rng(static_cast<std::uint64_t>(s), "V");
                   const auto truth = simulate_truth(model, vec1(0), TimeGrid::over(horizon, 1e-3), eps, rng);
                   end[static_cast<std::size_t>(s)] = truth.states(0, truth.states.cols() - 1);
                 }
                 double mean = 0.0, var = 0.0;
                 for (double x : end) mean += x / seeds;
                 for (double x : end) var += sq(x - mean) / (seeds - 1);
                 const double target = eps * eps * horizon;
                 return std::abs(var - target) / (target * std::sqrt(2.0 / (seeds - 1)));
               }});
  c.push_back({"simulate", "obs_noise_variance", -kInf, 3.0, [] {
                 const auto model = LtvModel::scalar(0, 0, 2);
                 const auto obs = generate_observations(model, sim_spec(10, 1e-3, {vec1(0), mat1(0)}), 7);
                 const long n = obs.dy.cols();
                 const double mean = obs.dy.mean();
                 const double var = (obs.dy.array() - mean).square().sum() / static_cast<double>(n - 1);
                 const double target = 2.0 * 1e-3;
                 return std::abs(var - target) / (target * std::sqrt(2.0 / static_cast<double>(n - 1)));
               }});
  c.push_back({"simulate", "obs_noiseless", -kInf, 1e-15, [] {
                 const auto obs = generate_observations(scenarios::random_walk(),
                                                        sim_spec(2, 1e-3, {vec1(1), mat1(0)}, 0.0, ObservationNoise::none), 3);
                 return (obs.dy.array() - 1e-3).abs().maxCoeff();
               }});
  c.push_back({"simulate", "obs_seed_repro", -kInf, 0.0, [] {
                 const auto model = scenarios::rotation_expanding();
                 const auto spec = sim_spec(5, 1e-3, {VectorXd::Zero(2), eye(2)}, 0.1);
                 return (generate_observations(model, spec, 9).dy - generate_observations(model, spec, 9).dy).norm();
               }});
  c.push_back({"simulate", "substep_refinement", -kInf, 1e-10, [] {
                 const auto model = scenarios::rotation_expanding();
                 auto spec = sim_spec(5, 1e-2, {(VectorXd(2) << 1, 0.5).finished(), zeros(2, 2)}, 0.0, ObservationNoise::none);
                 spec.substeps = 5;
                 const auto a = generate_observations(model, spec, 1);
                 spec.substeps = 10;
                 const auto b = generate_observations(model, spec, 1);
                 return (a.dy - b.dy).cwiseAbs().maxCoeff();
               }});
}

// --------------------------------------------------------------- kalman

void add_kalman_checks(std::vector<Check>& c) {
  c.push_back({"kalman", "unobservable_open_loop", -kInf, 1e-10, [] {
                 const auto model = LtvModel::constant(0.3 * scenarios::random_matrix(2, 2, 5), zeros(1, 2), eye(1));
                 const GaussianInit init{(VectorXd(2) << 1, -1).finished(), eye(2)};
                 const auto obs = generate_observations(model, sim_spec(5, 1e-3, init), 2);
                 const auto run = run_filter(model, obs, init);
                 const auto phi = fundamental_matrix(model, obs.grid);
                 double worst = 0.0;
                 for (std::size_t k = 0; k < phi.size(); ++k)
                   worst = std::max(worst, (run.at(k) - phi[k] * init.mean).norm());
                 return worst;
               }});
  c.push_back({"kalman", "noiseless_tracking", -kInf, 1e-6, [] {
                 const auto model = LtvModel::rotation(1.0, 0.0, (MatrixXd(1, 2) << 1, 0).finished(), eye(1));
                 const VectorXd x0 = (VectorXd(2) << 1, -0.5).finished();
                 const auto obs = generate_observations(model, sim_spec(10, 1e-3, {x0, zeros(2, 2)}, 0.0, ObservationNoise::none), 1);
                 const auto run = run_filter(model, obs, GaussianInit{x0, 2.0 * eye(2)});
                 return (run.mean - obs.truth).cwiseAbs().maxCoeff();
               }});
  c.push_back({"kalman", "scalar_worked_case", -kInf, 1e-8, [] {
                 const auto model = scenarios::random_walk();
                 const auto obs = generate_observations(model, sim_spec(10, 1e-3, {vec1(1), mat1(0)}, 0.0, ObservationNoise::none), 1);
                 const auto run = run_filter(model, obs, GaussianInit{vec1(0), mat1(1)});
                 double worst = 0.0;
                 for (std::size_t k = 0; k < obs.grid.nodes(); ++k)
                   worst = std::max(worst, std::abs(std::abs(run.at(k)(0) - 1.0) - 1.0 / (1.0 + obs.grid.t(k))));
                 return worst;
               }});
  c.push_back({"kalman", "pair_identical", -kInf, 0.0, [] {
                 const auto cfg = scenarios::scalar_mean_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(10, 1e-3, cfg.true_init), 4);
                 const auto pair = mismatched_pair(cfg.model, obs, cfg.true_init, cfg.true_init);
                 return *std::max_element(pair.gap_mean.begin(), pair.gap_mean.end());
               }});
  c.push_back({"kalman", "pair_scalar_uco", -kInf, 1e-3, [] {
                 const auto cfg = scenarios::scalar_mean_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(cfg.horizon, cfg.dt, cfg.true_init), cfg.seed);
                 const auto pair = mismatched_pair(cfg.model, obs, cfg.true_init, cfg.wrong_init);
                 return pair.gap_mean.back() / pair.gap_mean.front();
               }});
  c.push_back({"kalman", "pair_rotation_cov", -kInf, 1e-3, [] {
                 const auto model = scenarios::rotation_expanding();
                 const TimeGrid grid = TimeGrid::over(20, 1e-3);
                 const auto p = integrate_dre(model, eye(2), grid);
                 const auto pbar = integrate_dre(model, 4.0 * eye(2), grid);
                 return spectral_norm(p.path.back() - pbar.path.back()) / spectral_norm(eye(2) - 4.0 * eye(2));
               }});
  c.push_back({"kalman", "decomposition_trivial", -kInf, 0.0, [] {
                 const auto cfg = scenarios::rotation_mean_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(5, 1e-3, cfg.true_init), 2);
                 const auto pair = mismatched_pair(cfg.model, obs, cfg.true_init, cfg.true_init);
                 const auto dec = mean_decomposition_diagnostics(cfg.model, obs, pair);
                 return dec.term1.norm() + dec.zhat.norm() + dec.term2.norm();
               }});
  c.push_back({"kalman", "decomposition_equal_cov", -kInf, 1e-12, [] {
                 const auto cfg = scenarios::rotation_mean_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(10, 1e-3, cfg.true_init), 2);
                 const GaussianInit wrong{cfg.wrong_init.mean, cfg.true_init.cov};
                 const auto pair = mismatched_pair(cfg.model, obs, cfg.true_init, wrong);
                 const auto dec = mean_decomposition_diagnostics(cfg.model, obs, pair);
                 return std::max(dec.zhat.norm(), dec.max_residual);
               }});
  c.push_back({"kalman", "decomposition_residual", -kInf, 1e-6, [] {
                 auto cfg = scenarios::scalar_mean_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(20, 1e-3, cfg.true_init), 6);
                 const auto pair = mismatched_pair(cfg.model, obs, cfg.true_init, cfg.wrong_init);
                 return mean_decomposition_diagnostics(cfg.model, obs, pair).max_residual;
               }});
  c.push_back({"kalman", "lyapunov_monotone", -kInf, 1e-9, [] {
                 const auto cfg = scenarios::rotation_mean_config();
                 const auto gains = make_filter_gains(cfg.model, cfg.wrong_init.cov, TimeGrid::over(20, 1e-3));
                 double worst = -kInf;
                 for (std::uint64_t s = 0; s < 10; ++s) {
                   RngStream rng(s, "z0");
                   const auto v = lyapunov_trace(gains->psi, gains->riccati, rng.normals(2));
                   for (std::size_t k = 0; k + 1 < v.size(); ++k) worst = std::max(worst, v[k + 1] - v[k]);
                 }
                 return worst;
               }});
}

// ---------------------------------------------------------- nongaussian

void add_nongaussian_checks(std::vector<Check>& c) {
  c.push_back({"nongaussian", "c_zero", -kInf, 1e-12, [] {
                 const auto model = LtvModel::constant(0.3 * scenarios::random_matrix(2, 2, 8), zeros(1, 2), eye(1));
                 const GaussianInit init{VectorXd::Zero(2), eye(2)};
                 const auto obs = generate_observations(model, sim_spec(5, 1e-3, init), 3);
                 const auto ext = integrate_extended_system(model, obs, init);
                 double worst = ext.btilde.norm();
                 for (std::size_t k = 0; k < ext.s.size(); ++k)
                   worst = std::max({worst, ext.s[k].norm(), ext.q[k].norm(), ext.m[k].norm()});
                 return worst;
               }});
  c.push_back({"nongaussian", "g_identity", -kInf, 1e-6, [] {
                 const auto cfg = scenarios::two_atom_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(cfg.horizon, cfg.dt, cfg.true_init), cfg.seed);
                 const auto ext = integrate_extended_system(cfg.model, obs, cfg.true_init);
                 const auto p = integrate_dre(cfg.model, cfg.true_init.cov, obs.grid);
                 MatrixPath sum = ext.phi;
                 for (std::size_t k = 0; k < sum.size(); ++k) sum.values[k] += ext.s[k];
                 return max_diff(sum, closed_loop_propagator(cfg.model, p.path, obs.grid));
               }});
  c.push_back({"nongaussian", "scalar_s_and_m", -kInf, 1e-8, [] {
                 const auto model = scenarios::random_walk();
                 const GaussianInit init{vec1(0), mat1(1)};
                 const auto obs = generate_observations(model, sim_spec(1, 1e-3, init), 3);
                 const auto ext = integrate_extended_system(model, obs, init);
                 return std::max(std::abs(ext.m.back()(0, 0) - 1.0), std::abs(ext.s.back()(0, 0) + 0.5));
               }});
  c.push_back({"nongaussian", "single_atom_zero", -kInf, 1e-9, [] {
                 const auto cfg = scenarios::two_atom_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(10, 1e-3, cfg.true_init), 5);
                 const AtomSet atoms{zeros(1, 1), vec1(1)};
                 const auto mix = mixture_filter(cfg.model, obs, atoms, cfg.true_init);
                 return (mix.mean - run_filter(cfg.model, obs, cfg.true_init).mean).cwiseAbs().maxCoeff();
               }});
  c.push_back({"nongaussian", "single_atom_shift", -kInf, 1e-6, [] {
                 const auto cfg = scenarios::rotation_mean_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(10, 1e-3, cfg.true_init), 5);
                 const VectorXd x1 = (VectorXd(2) << 0.7, -0.4).finished();
                 const AtomSet atoms{x1.transpose(), vec1(1)};
                 const auto mix = mixture_filter(cfg.model, obs, atoms, cfg.true_init);
                 const GaussianInit shifted{cfg.true_init.mean + x1, cfg.true_init.cov};
                 return (mix.mean - run_filter(cfg.model, obs, shifted).mean).cwiseAbs().maxCoeff();
               }});
  auto bank_suite = [](bool weights) {
    const auto cfg = scenarios::two_atom_config();
    double worst = 0.0;
    for (int s = 0; s < cfg.mc_runs; ++s) {
      SimulationSpec spec = sim_spec(cfg.horizon, cfg.dt, cfg.true_init);
      spec.atoms = cfg.atoms;
      const auto obs = generate_observations(cfg.model, spec, cfg.seed + static_cast<std::uint64_t>(s));
      const auto mix = mixture_filter(cfg.model, obs, cfg.atoms, cfg.true_init);
      const auto bank = bank_oracle(cfg.model, obs, cfg.atoms, cfg.true_init);
      worst = std::max(worst, weights ? (mix.log_weights - bank.log_weights).cwiseAbs().maxCoeff()
                                      : (mix.mean - bank.mean).cwiseAbs().maxCoeff());
    }
    return worst;
  };
  c.push_back({"nongaussian", "bank_equivalence_mean", -kInf, 1e-6, [=] { return bank_suite(false); }});
  c.push_back({"nongaussian", "bank_equivalence_log_weights", -kInf, 1e-8, [=] { return bank_suite(true); }});
  c.push_back({"nongaussian", "bank_single_atom", -kInf, 1e-12, [] {
                 const auto cfg = scenarios::two_atom_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(5, 1e-3, cfg.true_init), 5);
                 const AtomSet atoms{mat1(0.3), vec1(1)};
                 const auto bank = bank_oracle(cfg.model, obs, atoms, cfg.true_init);
                 const GaussianInit shifted{cfg.true_init.mean + vec1(0.3), cfg.true_init.cov};
                 return bank.log_weights.cwiseAbs().maxCoeff() +
                        (bank.mean - run_filter(cfg.model, obs, shifted).mean).cwiseAbs().maxCoeff();
               }});
  c.push_back({"nongaussian", "bank_separation", 0.99, kInf, [] {
                 const auto cfg = scenarios::two_atom_config();
                 SimulationSpec spec = sim_spec(20, 1e-3, {cfg.true_init.mean, mat1(0)}, 0.0, ObservationNoise::none);
                 spec.atoms = {mat1(1), vec1(1)};
                 const auto obs = generate_observations(cfg.model, spec, 1);
                 const auto bank = bank_oracle(cfg.model, obs, cfg.atoms, cfg.true_init);
                 const long last = bank.log_weights.cols() - 1;
                 for (long k = last / 2; k < last; ++k)
                   if (bank.log_weights(1, k + 1) < bank.log_weights(1, k) - 1e-12) return 0.0;
                 return std::exp(bank.log_weights(1, last));
               }});
  c.push_back({"nongaussian", "weight_normalization", -kInf, 1e-12, [] {
                 const auto cfg = scenarios::two_atom_config();
                 SimulationSpec spec = sim_spec(cfg.horizon, cfg.dt, cfg.true_init);
                 spec.atoms = cfg.atoms;
                 const auto obs = generate_observations(cfg.model, spec, 77);
                 AtomSet atoms{(MatrixXd(3, 1) << -2, 0.5, 1).finished(), (VectorXd(3) << 0.2, 0.3, 0.5).finished()};
                 return mixture_weight_sum_error(mixture_filter(cfg.model, obs, atoms, cfg.true_init));
               }});
  c.push_back({"nongaussian", "merging_same_distribution", -kInf, 1e-8, [] {
                 const auto cfg = scenarios::two_atom_config();
                 const auto obs = generate_observations(cfg.model, sim_spec(10, 1e-3, cfg.true_init), 5);
                 const AtomSet atoms{zeros(1, 1), vec1(1)};
                 const auto mix = mixture_filter(cfg.model, obs, atoms, cfg.true_init);
                 const auto rep = merging_report(mix, run_filter(cfg.model, obs, cfg.true_init), (MatrixXd(2, 1) << 1, 2.5).finished());
                 return std::max(rep.cos_gap.maxCoeff(), *std::max_element(rep.mean_gap.begin(), rep.mean_gap.end()));
               }});
  c.push_back({"nongaussian", "merging_constant_function", -kInf, 0.0, [] {
                 const auto cfg = scenarios::two_atom_config();
                 SimulationSpec spec = sim_spec(5, 1e-3, cfg.true_init);
                 spec.atoms = cfg.atoms;
                 const auto obs = generate_observations(cfg.model, spec, 5);
                 const auto mix = mixture_filter(cfg.model, obs, cfg.atoms, cfg.true_init);
                 return merging_report(mix, run_filter(cfg.model, obs, cfg.wrong_init), zeros(1, 1)).cos_gap.maxCoeff();
               }});
  c.push_back({"nongaussian", "merging_wrong_reference", -kInf, 0.1, [] {
                 const auto cfg = scenarios::two_atom_config();
                 SimulationSpec spec = sim_spec(cfg.horizon, cfg.dt, cfg.true_init);
                 spec.atoms = cfg.atoms;
                 const auto obs = generate_observations(cfg.model, spec, cfg.seed);
                 const auto mix = mixture_filter(cfg.model, obs, cfg.atoms, cfg.true_init);
                 const auto rep = merging_report(mix, run_filter(cfg.model, obs, cfg.wrong_init), cfg.frequencies);
                 return std::max(rep.mean_ratio, rep.cos_ratio.maxCoeff());
               }});
  c.push_back({"nongaussian", "shift_covariance", -kInf, 1e-8, [] {
                 const auto cfg = scenarios::two_atom_config();
                 SimulationSpec spec = sim_spec(10, 1e-3, cfg.true_init);
                 spec.atoms = cfg.atoms;
                 const auto obs = generate_observations(cfg.model, spec, 8);
                 const auto a = mixture_filter(cfg.model, obs, cfg.atoms, cfg.true_init);
                 const double shift = 0.8;
                 AtomSet moved = cfg.atoms;
                 moved.points.array() += shift;
                 const GaussianInit init{cfg.true_init.mean.array() - shift, cfg.true_init.cov};
                 const auto b = mixture_filter(cfg.model, obs, moved, init);
                 double worst = (a.mean - b.mean).cwiseAbs().maxCoeff();
                 for (std::size_t k = 0; k < a.cov.size(); ++k) worst = std::max(worst, (a.cov[k] - b.cov[k]).norm());
                 return worst;
               }});
}

// ----------------------------------------------------------- smallnoise

void add_smallnoise_checks(std::vector<Check>& c) {
  c.push_back({"smallnoise", "eps_zero", -kInf, 0.0, [] {
                 const auto pair = run_epsilon_pair(scenarios::smallnoise_config(), 0.0, 3);
                 return pair.sup_mean_gap + pair.sup_cov_gap;
               }});
  c.push_back({"smallnoise", "f_zero", -kInf, 0.0, [] {
                 auto cfg = scenarios::smallnoise_config();
                 cfg.model = scenarios::scalar_unstable(0.25, 0.0);
                 const auto pair = run_epsilon_pair(cfg, 0.1, 3);
                 return pair.sup_mean_gap + pair.sup_cov_gap;
               }});
  c.push_back({"smallnoise", "fit_quadratic", -kInf, 1e-10, [] {
                 const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
                 std::vector<double> v;
                 for (double e : eps) v.push_back(3.7 * e * e);
                 return std::abs(fit_loglog(eps, v).slope - 2.0);
               }});
  c.push_back({"smallnoise", "fit_linear", -kInf, 1e-10, [] {
                 const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
                 std::vector<double> v;
                 for (double e : eps) v.push_back(0.4 * e);
                 return std::abs(fit_loglog(eps, v).slope - 1.0);
               }});
  c.push_back({"smallnoise", "fit_degenerate", -kInf, 0.0, [] {
                 EpsilonSweep sweep;
                 sweep.epsilons = {0.2, 0.1, 0.05};
                 for (std::uint64_t s = 0; s < 10; ++s) sweep.seeds.push_back(s);
                 sweep.median_mean = sweep.median_cov = {0.0, 0.0, 0.0};
                 const auto fit = fit_scaling(sweep);
                 return (fit.mean.valid || fit.cov.valid) ? 1.0 : 0.0;
               }});
  auto ratio = [](bool mean) {
    auto cfg = scenarios::smallnoise_config();
    cfg.epsilons = {0.1, 0.05};
    const auto sweep = run_epsilon_sweep(cfg);
    return mean ? sweep.median_mean[0] / sweep.median_mean[1] : sweep.median_cov[0] / sweep.median_cov[1];
  };
  c.push_back({"smallnoise", "cov_gap_halving_ratio", 3.5, 4.5, [=] { return ratio(false); }});
  c.push_back({"smallnoise", "mean_gap_halving_ratio", 3.5, 4.5, [=] { return ratio(true); }});
  c.push_back({"smallnoise", "stability_exponential", -kInf, 1e-6, [] {
                 const auto model = LtvModel::scalar(-1, 0, 1);
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 const auto est = exponential_stability_estimate(
                     closed_loop_propagator(model, integrate_dre(model, mat1(1), grid).path, grid));
                 return est.exponential ? std::max(std::abs(est.alpha - 1.0), std::abs(est.k - 1.0)) : kInf;
               }});
  c.push_back({"smallnoise", "stability_algebraic_flagged", -kInf, 0.0, [] {
                 const auto model = scenarios::random_walk();
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 const auto est = exponential_stability_estimate(
                     closed_loop_propagator(model, integrate_dre(model, mat1(1), grid).path, grid));
                 return est.exponential ? 1.0 : 0.0;
               }});
  c.push_back({"smallnoise", "stability_unstable_flagged", -kInf, 0.0, [] {
                 const auto model = LtvModel::scalar(0.5, 0, 1);
                 const TimeGrid grid = TimeGrid::over(10, 1e-3);
                 const auto est = exponential_stability_estimate(
                     closed_loop_propagator(model, integrate_dre(model, mat1(1), grid).path, grid));
                 return (est.exponential || est.alpha >= 0.0) ? 1.0 : 0.0;
               }});
  c.push_back({"smallnoise", "cov_gap_bound", -kInf, 1.25, [] {
                 const auto cfg = scenarios::smallnoise_config();
                 const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
                 const auto p = integrate_dre(cfg.model, cfg.true_init.cov, grid);
                 const auto est = exponential_stability_estimate(closed_loop_propagator(cfg.model, p.path, grid));
                 double worst = 0.0;
                 for (double eps : cfg.epsilons) {
                   const double sup = covariance_gap(integrate_dre(cfg.model, cfg.true_init.cov, grid, eps), p).sup;
                   worst = std::max(worst, sup / cov_gap_bound(eps, est, 1.0));
                 }
                 return worst;
               }});
}

std::vector<Check> build_checks() {
  std::vector<Check> checks;
  add_model_checks(checks);
  add_propagate_checks(checks);
  add_riccati_checks(checks);
  add_simulate_checks(checks);
  add_kalman_checks(checks);
  add_nongaussian_checks(checks);
  add_smallnoise_checks(checks);
  return checks;
}

}  // namespace

const std::vector<Check>& verify_checks() {
  static const std::vector<Check> checks = build_checks();
  return checks;
}

std::vector<CheckResult> run_checks(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  for (const Check& check : verify_checks()) {
    const std::string id = check.id();
    if (!options.filter.empty() && id.find(options.filter) == std::string::npos) continue;
    CheckResult r;
    r.id = id;
    r.lo = check.lo;
    r.hi = check.hi;
    if (std::find(options.corrupt.begin(), options.corrupt.end(), id) != options.corrupt.end()) {
      r.lo = kInf;
      r.hi = -kInf;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      r.value = check.run();
      r.passed = r.lo <= r.value && r.value <= r.hi;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.value = std::numeric_limits<double>::quiet_NaN();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  int passed = 0;
  char buf[256];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%s %-46s %12.4e  [%.3g, %.3g]  %.2fs", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                  r.value, r.lo, r.hi, r.seconds);
    os << buf;
    if (!r.error.empty()) os << "  error: " << r.error;
    os << "\n";
    if (r.passed) ++passed;
  }
  os << passed << "/" << results.size() << " checks passed\n";
}

}  // namespace kbstab
