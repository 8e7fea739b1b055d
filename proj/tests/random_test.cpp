#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "simplex_gibbs/random.hpp"

using namespace simplex_gibbs;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
  const PhiloxCounter out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerOnes) {
  const PhiloxCounter out = philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                       {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  const PhiloxCounter out =
      philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, SameTripleSameSequence) {
  RandomStream a(42, 7, 3);
  RandomStream b(42, 7, 3);
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(a(), b());
}

TEST(RandomStream, DifferentStreamsDiffer) {
  RandomStream a(42, 7, 0);
  RandomStream b(42, 8, 0);
  RandomStream c(42, 7, 1);
  RandomStream d(43, 7, 0);
  const auto va = a();
  EXPECT_NE(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

TEST(RandomStream, Uniform01Range) {
  RandomStream rng(1, 0);
  double total = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    total += u;
  }
  EXPECT_NEAR(total / 100000, 0.5, 0.005);
}

TEST(RandomStream, UniformIndexCoversRange) {
  RandomStream rng(2, 0);
  std::vector<int> counts(7, 0);
  for (int k = 0; k < 70000; ++k) {
    const auto v = rng.uniform_index(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(RandomStream, ExponentialAndNormalMoments) {
  RandomStream rng(3, 0);
  const int n = 200000;
  double e1 = 0.0, z1 = 0.0, z2 = 0.0;
  for (int k = 0; k < n; ++k) {
    e1 += rng.exponential();
    const double z = rng.standard_normal();
    z1 += z;
    z2 += z * z;
  }
  EXPECT_NEAR(e1 / n, 1.0, 0.01);
  EXPECT_NEAR(z1 / n, 0.0, 0.01);
  EXPECT_NEAR(z2 / n, 1.0, 0.015);
}

TEST(RandomStream, GammaMean) {
  for (double shape : {0.5, 1.0, 2.5}) {
    RandomStream rng(4, static_cast<std::uint64_t>(shape * 10));
    double total = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) total += rng.gamma(shape);
    EXPECT_NEAR(total / n, shape, 0.02 * std::max(1.0, shape)) << shape;
  }
}

TEST(DeriveSeed, DistinctForIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 10000; ++k) seen.insert(derive_seed(99, k));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_EQ(derive_seed(5, 6), derive_seed(5, 6));
}
