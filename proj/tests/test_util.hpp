#pragma once

#include "kbstab/config.hpp"
#include "kbstab/linalg.hpp"
#include "kbstab/matrix_path.hpp"

#include <algorithm>
#include <cstring>

namespace kbstab::testing {

inline MatrixXd mat1(double v) { return MatrixXd::Constant(1, 1, v); }
inline VectorXd vec1(double v) { return VectorXd::Constant(1, v); }

inline GaussianInit scalar_init(double mean, double var) { return {vec1(mean), mat1(var)}; }

inline double max_diff(const MatrixPath& a, const MatrixPath& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, spectral_norm(a[k] - b[k]));
  return worst;
}

inline bool bitwise_equal(const MatrixXd& a, const MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace kbstab::testing
