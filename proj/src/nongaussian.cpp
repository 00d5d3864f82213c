#include "kbstab/nongaussian.hpp"

#include "kbstab/batch.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kbstab {

namespace {

void check_atoms(const AtomSet& atoms, long m) {
  if (atoms.empty()) throw std::invalid_argument("mixture: atom set is empty");
  if (atoms.points.rows() != atoms.size() || atoms.points.cols() != m)
    throw std::invalid_argument("mixture: atom points must be k x m");
  if ((atoms.weights.array() < 0.0).any() || std::abs(atoms.weights.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("mixture: atom weights must be nonnegative and sum to 1");
}

VectorXd log_prior(const AtomSet& atoms) {
  VectorXd out(atoms.size());
  for (int i = 0; i < atoms.size(); ++i)
    out(i) = atoms.weights(i) > 0.0 ? std::log(atoms.weights(i)) : -std::numeric_limits<double>::infinity();
  return out;
}

// In place; returns false if nothing finite remains.
bool normalize_log(Eigen::Ref<VectorXd> l) {
  const double top = l.maxCoeff();
  if (std::isnan(top) || !std::isfinite(top)) return false;
  double sum = 0.0;
  for (long i = 0; i < l.size(); ++i) sum += std::exp(l(i) - top);
  l.array() -= top + std::log(sum);
  return true;
}

// Mixture mean and total covariance from component means sharing component_cov(k).
void fill_moments(MixturePath& out, std::size_t k, const MatrixXd& means) {
  const VectorXd w = out.weights(k);
  const VectorXd mu = means * w;
  out.mean.col(static_cast<long>(k)) = mu;
  const MatrixXd centered = means.colwise() - mu;
  out.cov.push_back(symmetrize(out.component_cov(k) + centered * w.asDiagonal() * centered.transpose()));
}

}  // namespace

VectorXd MixturePath::weights(std::size_t k) const {
  return log_weights.col(static_cast<long>(k)).array().exp().matrix();
}

ExtendedSystem integrate_extended_system(const LtvModel& model, const ObservationPath& obs,
                                         const GaussianInit& init) {
  if (obs.dy.rows() != model.n || obs.dy.cols() != static_cast<long>(obs.grid.steps))
    throw std::invalid_argument("integrate_extended_system: observation path does not match model");
  const TimeGrid& grid = obs.grid;
  ExtendedSystem ext;
  ext.reference = run_filter(model, obs, init.mean, make_filter_gains(model, init.cov, grid));
  ext.phi = fundamental_matrix(model, grid);
  ext.g = ext.reference.gains->psi;
  ext.g.label = "G";
  ext.s.grid = ext.q.grid = ext.m.grid = ext.exponent.grid = grid;
  ext.s.label = "S";
  ext.q.label = "Q";
  ext.m.label = "M";
  ext.exponent.label = "QminusM";

  const long dim = model.m;
  const double h = grid.dt;
  const MatrixXd& mtilde = ext.reference.mean;
  ext.btilde.resize(dim, static_cast<long>(grid.nodes()));
  CoefficientCache coef(model);

  MatrixXd q = MatrixXd::Zero(dim, dim);
  MatrixXd mm = MatrixXd::Zero(dim, dim);
  MatrixXd e = MatrixXd::Zero(dim, dim);
  VectorXd b = VectorXd::Zero(dim);
  // Integrands at the left node of the current interval.
  MatrixXd fq0, fm0, fe0, v0;
  VectorXd u0;
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    const MatrixXd& phi = ext.phi[k];
    const MatrixXd& g = ext.g[k];
    const MatrixXd s = g - phi;
    ext.s.values.push_back(s);
    ext.s.rates.push_back(ext.g.rates[k] - ext.phi.rates[k]);

    const Coefficients& c = coef.at(grid.t(k));
    const MatrixXd hs = c.H * s;
    const MatrixXd hphi = c.H * phi;
    MatrixXd fq1 = -(phi.transpose() * hs + hs.transpose() * phi + s.transpose() * hs);
    MatrixXd fm1 = phi.transpose() * hphi;
    MatrixXd fe1 = -(g.transpose() * c.H * g);
    MatrixXd v1 = c.R_inv * c.C * g;
    VectorXd u1 = g.transpose() * (c.H * mtilde.col(static_cast<long>(k)));
    if (k > 0) {
      q += 0.5 * h * (fq0 + fq1);
      mm += 0.5 * h * (fm0 + fm1);
      e += 0.5 * h * (fe0 + fe1);
      b += 0.5 * (v0 + v1).transpose() * obs.increment(k - 1) - 0.5 * h * (u0 + u1);
    }
    ext.q.values.push_back(symmetrize(q));
    ext.m.values.push_back(symmetrize(mm));
    ext.exponent.values.push_back(symmetrize(e));
    ext.btilde.col(static_cast<long>(k)) = b;
    fq0 = std::move(fq1);
    fm0 = std::move(fm1);
    fe0 = std::move(fe1);
    v0 = std::move(v1);
    u0 = std::move(u1);
  }
  return ext;
}

MixturePath mixture_filter(const ExtendedSystem& ext, const AtomSet& atoms) {
  const TimeGrid& grid = ext.grid();
  const long dim = ext.g[0].rows();
  check_atoms(atoms, dim);
  const long count = atoms.size();
  const auto nodes = static_cast<long>(grid.nodes());
  MixturePath out;
  out.grid = grid;
  out.atoms = atoms.points;
  out.gains = ext.reference.gains;
  out.log_weights.resize(count, nodes);
  out.mean.resize(dim, nodes);
  out.component_means.reserve(grid.nodes());
  out.cov.reserve(grid.nodes());
  const VectorXd prior = log_prior(atoms);
  const MatrixXd xs = atoms.points.transpose();  // m x k
  for (long k = 0; k < nodes; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const MatrixXd& e = ext.exponent[uk];
    const VectorXd b = ext.btilde.col(k);
    VectorXd l(count);
    for (long i = 0; i < count; ++i) {
      const VectorXd x = xs.col(i);
      l(i) = prior(i) + 0.5 * x.dot(e * x) + x.dot(b);
    }
    if (!normalize_log(l)) throw NumericalError("mixture weights are NaN at t=" + std::to_string(grid.t(uk)));
    out.log_weights.col(k) = l;
    MatrixXd means = ext.g[uk] * xs;
    means.colwise() += ext.reference.mean.col(k);
    fill_moments(out, uk, means);
    out.component_means.push_back(std::move(means));
  }
  return out;
}

MixturePath mixture_filter(const LtvModel& model, const ObservationPath& obs, const AtomSet& atoms,
                           const GaussianInit& init) {
  return mixture_filter(integrate_extended_system(model, obs, init), atoms);
}

MixturePath bank_oracle(const LtvModel& model, const ObservationPath& obs, const AtomSet& atoms,
                        const GaussianInit& init, Exec exec) {
  check_atoms(atoms, model.m);
  const TimeGrid& grid = obs.grid;
  const long count = atoms.size();
  const auto nodes = static_cast<long>(grid.nodes());
  const double h = grid.dt;
  auto gains = make_filter_gains(model, init.cov, grid);

  std::vector<MatrixXd> c_at, rc_at;
  c_at.reserve(grid.nodes());
  rc_at.reserve(grid.nodes());
  {
    CoefficientCache coef(model);
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
      const Coefficients& c = coef.at(grid.t(k));
      c_at.push_back(c.C);
      rc_at.push_back(c.R_inv * c.C);
    }
  }

  // dl = u^T dy - |C x|^2_{R^{-1}} dt / 2 with u = R^{-1} C x, trapezoid in
  // time. Increments are normalized every step so the running log-weights stay
  // O(1) even when the component likelihoods themselves grow without bound.
  std::vector<FilterRun> runs(static_cast<std::size_t>(count));
  MatrixXd increments(count, nodes - 1);
  for_each_index(count, exec, [&](long i) {
    const VectorXd start = init.mean + atoms.points.row(i).transpose();
    FilterRun run = run_filter(model, obs, start, gains);
    VectorXd u0 = rc_at[0] * run.mean.col(0);
    double q0 = u0.dot(c_at[0] * run.mean.col(0));
    for (long k = 1; k < nodes; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      VectorXd u1 = rc_at[uk] * run.mean.col(k);
      const double q1 = u1.dot(c_at[uk] * run.mean.col(k));
      increments(i, k - 1) = 0.5 * (u0 + u1).dot(obs.increment(uk - 1)) - 0.25 * h * (q0 + q1);
      u0 = std::move(u1);
      q0 = q1;
    }
    runs[static_cast<std::size_t>(i)] = std::move(run);
  });

  MixturePath out;
  out.grid = grid;
  out.atoms = atoms.points;
  out.gains = gains;
  out.log_weights.resize(count, nodes);
  out.mean.resize(model.m, nodes);
  out.component_means.reserve(grid.nodes());
  out.cov.reserve(grid.nodes());
  VectorXd l = log_prior(atoms);
  for (long k = 0; k < nodes; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (k > 0) l += increments.col(k - 1);
    if (!normalize_log(l)) throw NumericalError("bank weights are NaN at t=" + std::to_string(grid.t(uk)));
    out.log_weights.col(k) = l;
    MatrixXd means(model.m, count);
    for (long i = 0; i < count; ++i) means.col(i) = runs[static_cast<std::size_t>(i)].mean.col(k);
    fill_moments(out, uk, means);
    out.component_means.push_back(std::move(means));
  }
  return out;
}

double mixture_cosine(const VectorXd& a, const MatrixXd& means, const VectorXd& weights,
                      const MatrixXd& cov) {
  const double damp = std::exp(-0.5 * a.dot(cov * a));
  double sum = 0.0;
  for (long i = 0; i < means.cols(); ++i) sum += weights(i) * std::cos(a.dot(means.col(i)));
  return sum / weights.sum() * damp;
}

namespace {

double gap_ratio(double late, double early) {
  if (early == 0.0) return late == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return late / early;
}

}  // namespace

MergingReport merging_report(const MixturePath& mixture, const FilterRun& reference,
                             const MatrixXd& frequencies, double early_time) {
  const TimeGrid& grid = mixture.grid;
  if (!(reference.riccati().grid() == grid))
    throw std::invalid_argument("merging_report: reference filter lives on a different grid");
  if (frequencies.cols() != mixture.mean.rows())
    throw std::invalid_argument("merging_report: frequency vectors must have length m");
  MergingReport rep;
  rep.frequencies = frequencies;
  rep.ref_mean = reference.init_mean;
  rep.ref_cov = reference.riccati().init;
  rep.early_time = early_time;
  const auto nodes = static_cast<long>(grid.nodes());
  const long q = frequencies.rows();
  rep.mean_gap.reserve(grid.nodes());
  rep.cos_gap.resize(q, nodes);
  for (long k = 0; k < nodes; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const VectorXd ref = reference.mean.col(k);
    rep.mean_gap.push_back((mixture.mean.col(k) - ref).norm());
    const VectorXd w = mixture.weights(uk);
    const MatrixXd& pref = reference.riccati()[uk];
    for (long j = 0; j < q; ++j) {
      const VectorXd a = frequencies.row(j).transpose();
      const double pi_g = mixture_cosine(a, mixture.component_means[uk], w, mixture.component_cov(uk));
      const double ref_g = std::cos(a.dot(ref)) * std::exp(-0.5 * a.dot(pref * a));
      rep.cos_gap(j, k) = std::abs(pi_g - ref_g);
    }
  }
  const std::size_t early = grid.index_of(early_time);
  rep.mean_ratio = gap_ratio(rep.mean_gap.back(), rep.mean_gap[early]);
  rep.cos_ratio.resize(q);
  for (long j = 0; j < q; ++j)
    rep.cos_ratio(j) = gap_ratio(rep.cos_gap(j, nodes - 1), rep.cos_gap(j, static_cast<long>(early)));
  return rep;
}

void write_csv(std::ostream& os, const MixturePath& mixture, const MergingReport& report,
               std::size_t stride) {
  const TimeGrid& grid = mixture.grid;
  os << "t,mean_gap";
  for (long j = 0; j < report.cos_gap.rows(); ++j) os << ",gap_cos_a" << j + 1;
  for (long i = 0; i < mixture.log_weights.rows(); ++i) os << ",w_" << i + 1;
  os << "\n";
  stride = std::max<std::size_t>(1, stride);
  for (std::size_t k = 0; k < grid.nodes(); ++k) {
    if (k % stride != 0 && k + 1 != grid.nodes()) continue;
    const auto col = static_cast<long>(k);
    os << fmt_g17(grid.t(k)) << "," << fmt_g17(report.mean_gap[k]);
    for (long j = 0; j < report.cos_gap.rows(); ++j) os << "," << fmt_g17(report.cos_gap(j, col));
    const VectorXd w = mixture.weights(k);
    for (long i = 0; i < w.size(); ++i) os << "," << fmt_g17(w(i));
    os << "\n";
  }
}

}  // namespace kbstab
