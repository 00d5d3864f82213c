#include "kbstab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kbstab {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

const std::set<std::string> kSections{"model", "init", "atoms", "noise", "run"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (tok.empty() || end != begin + tok.size() || !std::isfinite(v)) {
    throw ConfigError(line, "malformed number '" + tok + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& tok, int line) {
  Int v{};
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (tok.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(line, "malformed integer '" + tok + "'");
  }
  return v;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Section>& sections) : sections_(sections) {}

  Entry* find(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.find(key);
    if (e == s->second.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  bool has_matrix(const std::string& section, const std::string& name) {
    auto s = sections_.find(section);
    return s != sections_.end() &&
           (s->second.count(name + ".shape") > 0 || s->second.count(name + ".data") > 0);
  }

  double number(const std::string& section, const std::string& key, double fallback) {
    Entry* e = find(section, key);
    return e ? parse_double(trim(e->value), e->line) : fallback;
  }

  template <typename Int>
  Int integer(const std::string& section, const std::string& key, Int fallback) {
    Entry* e = find(section, key);
    return e ? parse_int<Int>(trim(e->value), e->line) : fallback;
  }

  std::vector<double> list(const std::string& section, const std::string& key, int* line) {
    Entry* e = find(section, key);
    if (!e) return {};
    if (line) *line = e->line;
    std::vector<double> out;
    for (const auto& tok : split_ws(e->value)) out.push_back(parse_double(tok, e->line));
    return out;
  }

  /// Reads name.shape / name.data; returns an empty matrix when absent.
  /// `line` receives the line of the shape entry for later shape errors.
  MatrixXd matrix(const std::string& section, const std::string& name, int* line) {
    Entry* shape = find(section, name + ".shape");
    Entry* data = find(section, name + ".data");
    if (!shape && !data) return {};
    if (!shape) throw ConfigError(data->line, name + ".data given without " + name + ".shape");
    if (!data) throw ConfigError(shape->line, name + ".shape given without " + name + ".data");
    const auto dims = split_ws(shape->value);
    if (dims.size() != 2) throw ConfigError(shape->line, name + ".shape needs two integers");
    const int rows = parse_int<int>(dims[0], shape->line);
    const int cols = parse_int<int>(dims[1], shape->line);
    if (rows < 0 || cols < 0) throw ConfigError(shape->line, name + ".shape must be nonnegative");
    const auto vals = split_ws(data->value);
    if (static_cast<long>(vals.size()) != static_cast<long>(rows) * cols) {
      throw ConfigError(data->line, name + ".data has " + std::to_string(vals.size()) +
                                        " values, shape needs " + std::to_string(rows * cols));
    }
    MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out(i, j) = parse_double(vals[i * cols + j], data->line);
    if (line) *line = shape->line;
    return out;
  }

  void reject_unused() {
    for (const auto& [sname, section] : sections_) {
      for (const auto& [key, entry] : section) {
        if (!entry.used) throw ConfigError(entry.line, "unknown key '" + key + "' in [" + sname + "]");
      }
    }
  }

 private:
  std::map<std::string, Section>& sections_;
};

void expect_shape(const MatrixXd& x, long rows, long cols, const std::string& name, int line) {
  if (x.rows() != rows || x.cols() != cols) {
    std::ostringstream os;
    os << "dimension mismatch: " << name << " has shape " << x.rows() << "x" << x.cols()
       << ", expected " << rows << "x" << cols;
    throw ConfigError(line, os.str());
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const std::string& name, const MatrixXd& x) {
  os << name << ".shape = " << x.rows() << " " << x.cols() << "\n";
  os << name << ".data =";
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) os << " " << fmt17(x(i, j));
  os << "\n";
}

bool close(double a, double b, double rel) {
  return a == b || std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

bool close(const MatrixXd& a, const MatrixXd& b, double rel) {
  if (a.size() == 0 && b.size() == 0) return true;
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!close(a(i, j), b(i, j), rel)) return false;
  return true;
}

// Threshold keys under [run] as threshold.<name>.
template <typename Fn>
void for_each_threshold(Thresholds& t, Fn&& fn) {
  fn("riccati_residual", t.riccati_residual);
  fn("reconstruction", t.reconstruction);
  fn("mean_gap_ratio", t.mean_gap_ratio);
  fn("cov_gap_ratio", t.cov_gap_ratio);
  fn("merging_ratio", t.merging_ratio);
  fn("cov_slope_lo", t.cov_slope_lo);
  fn("cov_slope_hi", t.cov_slope_hi);
  fn("mean_slope_lo", t.mean_slope_lo);
  fn("mean_slope_hi", t.mean_slope_hi);
  fn("monotone_slack", t.monotone_slack);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(current)) throw ConfigError(line_no, "unknown section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
    if (current.empty()) throw ConfigError(line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    auto& section = sections[current];
    if (section.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    section[key] = Entry{trim(line.substr(eq + 1)), line_no, false};
  }

  Reader rd(sections);
  ExperimentConfig cfg;
  LtvModel& model = cfg.model;

  Entry* m_entry = rd.find("model", "m");
  Entry* n_entry = rd.find("model", "n");
  if (!m_entry) throw ConfigError(line_no, "missing required key m in [model]");
  if (!n_entry) throw ConfigError(line_no, "missing required key n in [model]");
  model.m = parse_int<int>(m_entry->value, m_entry->line);
  model.n = parse_int<int>(n_entry->value, n_entry->line);
  if (model.m <= 0) throw ConfigError(m_entry->line, "m must be positive");
  if (model.n <= 0) throw ConfigError(n_entry->line, "n must be positive");
  const int m = model.m;
  const int n = model.n;

  if (Entry* fam = rd.find("model", "family")) {
    try {
      model.family = family_from_string(fam->value);
    } catch (const ModelError& e) {
      throw ConfigError(fam->line, e.what());
    }
    if (model.family == Family::rotation_damped && m != 2) {
      throw ConfigError(fam->line, "rotation_damped family requires m = 2");
    }
  }
  model.omega = rd.number("model", "omega", model.omega);
  model.damping = rd.number("model", "damping", model.damping);
  model.bound = rd.number("model", "bound", model.bound);

  struct Spec {
    const char* name;
    MatrixXd* target;
    int rows;
    int cols;
  };
  const Spec model_mats[] = {{"A0", &model.A0, m, m}, {"A1", &model.A1, m, m},
                             {"C0", &model.C0, n, m}, {"C1", &model.C1, n, m},
                             {"R0", &model.R0, n, n}, {"R1", &model.R1, n, n},
                             {"F0", &model.F0, m, m}, {"F1", &model.F1, m, m}};
  for (const auto& spec : model_mats) {
    int line = line_no;
    *spec.target = rd.matrix("model", spec.name, &line);
    if (spec.target->size() > 0 || rd.has_matrix("model", spec.name))
      expect_shape(*spec.target, spec.rows, spec.cols, spec.name, line);
  }
  if (model.family != Family::rotation_damped && model.A0.size() == 0)
    throw ConfigError(line_no, "missing required matrix A0 in [model]");
  if (model.C0.size() == 0) throw ConfigError(line_no, "missing required matrix C0 in [model]");
  model.finalize();

  int line = line_no;
  MatrixXd m0 = rd.matrix("init", "m0", &line);
  if (m0.size() == 0) throw ConfigError(line_no, "missing required matrix m0 in [init]");
  expect_shape(m0, m, 1, "m0", line);
  MatrixXd p0 = rd.matrix("init", "P0", &line);
  if (p0.size() == 0) throw ConfigError(line_no, "missing required matrix P0 in [init]");
  expect_shape(p0, m, m, "P0", line);
  cfg.true_init = {m0.col(0), p0};

  MatrixXd mbar = rd.matrix("init", "mbar", &line);
  if (mbar.size() > 0) expect_shape(mbar, m, 1, "mbar", line);
  MatrixXd pbar = rd.matrix("init", "Pbar", &line);
  if (pbar.size() > 0) expect_shape(pbar, m, m, "Pbar", line);
  cfg.wrong_init = {mbar.size() > 0 ? VectorXd(mbar.col(0)) : cfg.true_init.mean,
                    pbar.size() > 0 ? pbar : cfg.true_init.cov};

  cfg.atoms.points = rd.matrix("atoms", "points", &line);
  if (cfg.atoms.points.size() > 0 || rd.has_matrix("atoms", "points")) {
    if (cfg.atoms.points.cols() != m) expect_shape(cfg.atoms.points, cfg.atoms.points.rows(), m, "points", line);
  }
  int wline = line_no;
  const auto weights = rd.list("atoms", "weights", &wline);
  if (static_cast<long>(weights.size()) != cfg.atoms.points.rows()) {
    throw ConfigError(wline, "atoms: " + std::to_string(weights.size()) + " weights for " +
                                 std::to_string(cfg.atoms.points.rows()) + " points");
  }
  cfg.atoms.weights = Eigen::Map<const VectorXd>(weights.data(), static_cast<long>(weights.size()));
  if (cfg.atoms.points.size() == 0) cfg.atoms.points.resize(0, m);

  int eline = line_no;
  if (rd.find("noise", "epsilons")) {
    cfg.epsilons = rd.list("noise", "epsilons", &eline);
  }

  cfg.horizon = rd.number("run", "horizon", cfg.horizon);
  cfg.dt = rd.number("run", "dt", cfg.dt);
  cfg.substeps = rd.integer<int>("run", "substeps", cfg.substeps);
  cfg.seed = rd.integer<std::uint64_t>("run", "seed", cfg.seed);
  cfg.mc_runs = rd.integer<int>("run", "mc_runs", cfg.mc_runs);
  cfg.uco_window = rd.number("run", "uco_window", cfg.uco_window);
  cfg.frequencies = rd.matrix("run", "frequencies", &line);
  if (cfg.frequencies.size() > 0 && cfg.frequencies.cols() != m)
    expect_shape(cfg.frequencies, cfg.frequencies.rows(), m, "frequencies", line);
  if (cfg.frequencies.size() == 0) cfg.frequencies = MatrixXd::Ones(1, m);
  for_each_threshold(cfg.thresholds, [&](const char* name, double& value) {
    value = rd.number("run", std::string("threshold.") + name, value);
  });

  rd.reject_unused();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  const LtvModel& model = cfg.model;
  std::ostringstream os;
  os << "[model]\n";
  os << "m = " << model.m << "\n";
  os << "n = " << model.n << "\n";
  os << "family = " << to_string(model.family) << "\n";
  os << "omega = " << fmt17(model.omega) << "\n";
  os << "damping = " << fmt17(model.damping) << "\n";
  os << "bound = " << fmt17(model.bound) << "\n";
  if (model.family != Family::rotation_damped) write_matrix(os, "A0", model.A0);
  write_matrix(os, "A1", model.A1);
  write_matrix(os, "C0", model.C0);
  write_matrix(os, "C1", model.C1);
  write_matrix(os, "R0", model.R0);
  write_matrix(os, "R1", model.R1);
  write_matrix(os, "F0", model.F0);
  write_matrix(os, "F1", model.F1);

  os << "\n[init]\n";
  write_matrix(os, "m0", cfg.true_init.mean);
  write_matrix(os, "P0", cfg.true_init.cov);
  write_matrix(os, "mbar", cfg.wrong_init.mean);
  write_matrix(os, "Pbar", cfg.wrong_init.cov);

  os << "\n[atoms]\n";
  if (!cfg.atoms.empty()) {
    write_matrix(os, "points", cfg.atoms.points);
    os << "weights =";
    for (int i = 0; i < cfg.atoms.size(); ++i) os << " " << fmt17(cfg.atoms.weights(i));
    os << "\n";
  }

  os << "\n[noise]\nepsilons =";
  for (double e : cfg.epsilons) os << " " << fmt17(e);
  os << "\n";

  os << "\n[run]\n";
  os << "horizon = " << fmt17(cfg.horizon) << "\n";
  os << "dt = " << fmt17(cfg.dt) << "\n";
  os << "substeps = " << cfg.substeps << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "mc_runs = " << cfg.mc_runs << "\n";
  os << "uco_window = " << fmt17(cfg.uco_window) << "\n";
  write_matrix(os, "frequencies", cfg.frequencies);
  Thresholds t = cfg.thresholds;
  for_each_threshold(t, [&](const char* name, double& value) {
    os << "threshold." << name << " = " << fmt17(value) << "\n";
  });
  return os.str();
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> report;
  const LtvModel& model = cfg.model;
  const int m = model.m;
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };

  if (!(cfg.dt > 0.0)) report.push_back("dt must be positive (got " + fmt(cfg.dt) + ")");
  if (!(cfg.horizon >= cfg.dt)) report.push_back("horizon " + fmt(cfg.horizon) + " shorter than dt");
  if (cfg.substeps < 1) report.push_back("substeps must be a positive integer");
  if (cfg.mc_runs < 1) report.push_back("mc_runs must be positive");
  if (!(cfg.uco_window >= cfg.dt) || cfg.uco_window > cfg.horizon)
    report.push_back("uco_window " + fmt(cfg.uco_window) + " outside [dt, horizon]");

  const MatrixXd& p0 = cfg.true_init.cov;
  if (p0.rows() == m && p0.cols() == m) {
    if ((p0 - p0.transpose()).cwiseAbs().maxCoeff() > 1e-12) report.push_back("P0 not symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(p0), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lmin < -1e-10) report.push_back("P0 not positive semidefinite");
    if (!(lmin > 1e-12 * std::max(1.0, lmax))) report.push_back("P0 not invertible");
  }
  const MatrixXd& pbar = cfg.wrong_init.cov;
  if (pbar.rows() == m && pbar.cols() == m && min_eigenvalue(pbar) < -1e-10)
    report.push_back("Pbar not positive semidefinite");

  if (!cfg.atoms.empty()) {
    const double sum = cfg.atoms.weights.sum();
    if (std::abs(sum - 1.0) > 1e-12) report.push_back("atom weights sum " + fmt(sum));
    if (cfg.atoms.weights.minCoeff() < 0.0) report.push_back("atom weights must be nonnegative");
  }
  for (double e : cfg.epsilons)
    if (!(e >= 0.0)) report.push_back("epsilon " + fmt(e) + " is negative");

  // Assumption checks on a sampled grid of at most ~1000 points.
  if (cfg.dt > 0.0 && cfg.horizon >= cfg.dt) {
    const long steps = std::lround(cfg.horizon / cfg.dt);
    const long stride = std::max(1L, steps / 1000);
    double max_entry = 0.0;
    for (long k = 0; k <= steps; k += stride) {
      const double t = k * cfg.dt;
      try {
        const Coefficients c = model.eval(t);
        for (const MatrixXd* x : {&c.A, &c.C, &c.R, &c.R_inv, &c.F}) {
          if (!x->allFinite()) {
            report.push_back("non-finite coefficient at t=" + fmt(t));
            return report;
          }
          max_entry = std::max(max_entry, x->cwiseAbs().maxCoeff());
        }
      } catch (const ModelError& e) {
        report.push_back(e.what());
        return report;
      }
    }
    if (max_entry > model.bound)
      report.push_back("coefficient entry " + fmt(max_entry) + " exceeds bound " + fmt(model.bound));
  }
  return report;
}

bool configs_equal(const ExperimentConfig& a, const ExperimentConfig& b, double rel) {
  const LtvModel& x = a.model;
  const LtvModel& y = b.model;
  if (x.m != y.m || x.n != y.n || x.family != y.family) return false;
  if (!close(x.omega, y.omega, rel) || !close(x.damping, y.damping, rel) ||
      !close(x.bound, y.bound, rel))
    return false;
  if (!close(x.A0, y.A0, rel) || !close(x.A1, y.A1, rel) || !close(x.C0, y.C0, rel) ||
      !close(x.C1, y.C1, rel) || !close(x.R0, y.R0, rel) || !close(x.R1, y.R1, rel) ||
      !close(x.F0, y.F0, rel) || !close(x.F1, y.F1, rel))
    return false;
  if (!close(a.horizon, b.horizon, rel) || !close(a.dt, b.dt, rel) || a.substeps != b.substeps ||
      a.seed != b.seed || a.mc_runs != b.mc_runs || !close(a.uco_window, b.uco_window, rel))
    return false;
  if (!close(a.true_init.mean, b.true_init.mean, rel) || !close(a.true_init.cov, b.true_init.cov, rel) ||
      !close(a.wrong_init.mean, b.wrong_init.mean, rel) || !close(a.wrong_init.cov, b.wrong_init.cov, rel))
    return false;
  if (!close(a.atoms.points, b.atoms.points, rel) || !close(a.atoms.weights, b.atoms.weights, rel))
    return false;
  if (a.epsilons.size() != b.epsilons.size()) return false;
  for (std::size_t i = 0; i < a.epsilons.size(); ++i)
    if (!close(a.epsilons[i], b.epsilons[i], rel)) return false;
  if (!close(a.frequencies, b.frequencies, rel)) return false;
  bool same = true;
  Thresholds ta = a.thresholds;
  Thresholds tb = b.thresholds;
  std::vector<double> va, vb;
  for_each_threshold(ta, [&](const char*, double& v) { va.push_back(v); });
  for_each_threshold(tb, [&](const char*, double& v) { vb.push_back(v); });
  for (std::size_t i = 0; i < va.size(); ++i) same = same && close(va[i], vb[i], rel);
  return same;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kbstab
