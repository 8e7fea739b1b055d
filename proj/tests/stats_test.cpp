#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "simplex_gibbs/random.hpp"
#include "simplex_gibbs/stats.hpp"

using namespace simplex_gibbs;

TEST(Kolmogorov, TabulatedValues) {
  // Q(t) = 1 - K(t); K(1) = 0.7300003, K(1.36) ~ 0.95.
  EXPECT_NEAR(stats::kolmogorov_survival(1.0), 0.26999967, 1e-7);
  EXPECT_NEAR(stats::kolmogorov_survival(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(stats::kolmogorov_survival(0.0), 1.0, 1e-12);
  EXPECT_LT(stats::kolmogorov_survival(5.0), 1e-20);
}

TEST(KsOneSample, StatisticMatchesDirectScan) {
  const std::vector<double> sample{0.9, 0.1, 0.35, 0.6, 0.61};
  std::vector<double> s = sample;
  std::sort(s.begin(), s.end());
  double d = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    d = std::max({d, (k + 1.0) / s.size() - s[k], s[k] - static_cast<double>(k) / s.size()});
  }
  const auto r = stats::ks_one_sample(sample, [](double t) { return t; });
  EXPECT_NEAR(r.statistic, d, 1e-15);
  EXPECT_EQ(r.n, 5u);
}

TEST(KsOneSample, UniformSampleAccepted) {
  RandomStream rng(1, 0);
  std::vector<double> v;
  for (int k = 0; k < 5000; ++k) v.push_back(rng.uniform01());
  EXPECT_GT(stats::ks_one_sample(v, [](double t) { return std::clamp(t, 0.0, 1.0); }).p_value,
            0.001);
  for (auto& x : v) x = x * x;
  EXPECT_LT(stats::ks_one_sample(v, [](double t) { return std::clamp(t, 0.0, 1.0); }).p_value,
            1e-6);
}

TEST(KsTwoSample, SameAndShifted) {
  RandomStream rng(2, 0);
  std::vector<double> a, b, c;
  for (int k = 0; k < 3000; ++k) {
    a.push_back(rng.uniform01());
    b.push_back(rng.uniform01());
    c.push_back(rng.uniform01() + 0.1);
  }
  EXPECT_EQ(stats::ks_two_sample(a, a).statistic, 0.0);
  EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.001);
  EXPECT_LT(stats::ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_NEAR(stats::ks_two_sample(a, c).statistic, 0.1, 0.04);
}

TEST(Wilson, MatchesClosedForm) {
  const double z = 1.959963984540054;
  const double n = 200, p = 150 / n;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  const auto ci = stats::wilson(150, 200);
  EXPECT_NEAR(ci.lo, centre - half, 1e-12);
  EXPECT_NEAR(ci.hi, centre + half, 1e-12);
  const auto all = stats::wilson(1000, 1000);
  EXPECT_NEAR(all.hi, 1.0, 1e-12);
  EXPECT_NEAR(all.lo, 1000 / (1000 + z * z), 1e-12);
}

TEST(Summaries, SmallSamples) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(stats::mean(v), 2.5);
  EXPECT_NEAR(stats::stddev(v), std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_NEAR(stats::standard_error(v), std::sqrt(5.0 / 3.0) / 2, 1e-15);
  EXPECT_DOUBLE_EQ(stats::quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(stats::median(v), 2.5);
  EXPECT_DOUBLE_EQ(stats::quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(stats::quantile(v, 1.0), 4.0);
}
