#include "kbstab/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kbstab;

// Reference outputs of the SplitMix64 generator started from state 0.
TEST(Rng, SplitMixReferenceSequence) {
  const std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
  EXPECT_EQ(splitmix64(1 * gamma), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(2 * gamma), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(splitmix64(3 * gamma), 0x06C45D188009454FULL);
}

TEST(Rng, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171F73967E8ULL);
}

TEST(Rng, StreamWordsFollowTheKeyedCounter) {
  RngStream rng(42, "V");
  const std::uint64_t key = splitmix64(42 ^ fnv1a64("V"));
  for (std::uint64_t i = 1; i <= 5; ++i) EXPECT_EQ(rng.next_u64(), splitmix64(key + i * 0x9E3779B97F4A7C15ULL));
  EXPECT_EQ(rng.counter(), 5u);
}

TEST(Rng, SameSeedAndLabelReproduce) {
  RngStream a(7, "x0"), b(7, "x0");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Rng, LabelsAndSeedsGiveDistinctStreams) {
  RngStream a(7, "V"), b(7, "W"), c(8, "V");
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(Rng, UniformsStayInsideOpenInterval) {
  RngStream rng(1, "u");
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMomentsMatchStandardNormal) {
  RngStream rng(3, "moments");
  const int n = 400000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  // Five standard errors for each moment estimate.
  EXPECT_NEAR(s1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(Rng, NormalsVectorMatchesScalarDraws) {
  RngStream a(11, "z"), b(11, "z");
  const Eigen::VectorXd v = a.normals(7);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(v(i), b.normal());
}
