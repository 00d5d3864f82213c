#pragma once

#include "kbstab/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace kbstab {

/// Uniform grid t_k = k * dt, k = 0..steps.
struct TimeGrid {
  double dt = 1e-3;
  std::size_t steps = 0;

  static TimeGrid over(double horizon, double dt) {
    return {dt, static_cast<std::size_t>(std::llround(horizon / dt))};
  }
  double t(std::size_t k) const { return static_cast<double>(k) * dt; }
  double horizon() const { return t(steps); }
  std::size_t nodes() const { return steps + 1; }
  /// Nearest node index for time t, clamped to the grid.
  std::size_t index_of(double time) const;
  bool operator==(const TimeGrid& o) const { return dt == o.dt && steps == o.steps; }
};

/// A matrix value per grid node. `rates`, when non-empty, holds the time
/// derivative at each node and enables fourth-order midpoint interpolation.
struct MatrixPath {
  TimeGrid grid;
  std::vector<MatrixXd> values;
  std::vector<MatrixXd> rates;
  std::string label;

  const MatrixXd& operator[](std::size_t k) const { return values[k]; }
  const MatrixXd& back() const { return values.back(); }
  std::size_t size() const { return values.size(); }
  bool has_rates() const { return rates.size() == values.size(); }

  /// Value at the midpoint of [t_k, t_{k+1}]; Hermite if rates are present,
  /// linear otherwise.
  MatrixXd midpoint(std::size_t k) const;
};

/// Writes `t,<label>_11,<label>_12,...` with 17 significant digits. Every
/// `stride`-th node is written, plus the final node.
void write_csv(std::ostream& os, const MatrixPath& path, std::size_t stride = 1);

/// printf-style %.17g formatting used by every CSV writer.
std::string fmt_g17(double v);

}  // namespace kbstab
