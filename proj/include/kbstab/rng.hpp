#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace kbstab {

/// Counter-based generator with labeled streams.
///
/// Stream key:  key = splitmix64(seed ^ fnv1a64(label)).
/// i-th word:   splitmix64(key + (i + 1) * 0x9E3779B97F4A7C15).
/// Uniforms take the top 53 bits, shifted into (0, 1). Normals use the
/// Box-Muller transform on consecutive uniform pairs, both outputs used.
///
/// This algorithm is part of the reproducibility contract: changing it
/// changes every generated path.
class RngStream {
 public:
  RngStream(std::uint64_t seed, const std::string& label);

  std::uint64_t next_u64();
  double uniform();
  double normal();
  Eigen::VectorXd normals(long n);

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace kbstab
