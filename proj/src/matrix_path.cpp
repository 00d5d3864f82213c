#include "kbstab/matrix_path.hpp"

#include <algorithm>
#include <cstdio>

namespace kbstab {

std::size_t TimeGrid::index_of(double time) const {
  if (time <= 0.0) return 0;
  const auto k = static_cast<std::size_t>(std::llround(time / dt));
  return std::min(k, steps);
}

MatrixXd MatrixPath::midpoint(std::size_t k) const {
  if (has_rates()) return hermite_midpoint(values[k], values[k + 1], rates[k], rates[k + 1], grid.dt);
  return 0.5 * (values[k] + values[k + 1]);
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const MatrixPath& path, std::size_t stride) {
  if (path.values.empty()) return;
  const auto rows = path.values.front().rows();
  const auto cols = path.values.front().cols();
  const std::string name = path.label.empty() ? "X" : path.label;
  os << "t";
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) os << "," << name << "_" << i + 1 << j + 1;
  os << "\n";
  stride = std::max<std::size_t>(1, stride);
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    if (k % stride != 0 && k + 1 != path.values.size()) continue;
    os << fmt_g17(path.grid.t(k));
    const MatrixXd& x = path.values[k];
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) os << "," << fmt_g17(x(i, j));
    os << "\n";
  }
}

}  // namespace kbstab
