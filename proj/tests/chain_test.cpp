#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "simplex_gibbs/chain.hpp"
#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/stats.hpp"

using namespace simplex_gibbs;

namespace {

SimplexPoint point(std::vector<double> v) { return SimplexPoint::from_values(v); }

// Exact Binomial(N, 1/2) cdf by long double summation, used as an oracle.
long double binomial_cdf_oracle(std::uint64_t trials, std::uint64_t k) {
  long double p = std::pow(0.5L, static_cast<long double>(trials));
  long double total = 0.0L;
  for (std::uint64_t j = 0; j <= k; ++j) {
    total += p;
    p = p * static_cast<long double>(trials - j) / static_cast<long double>(j + 1);
  }
  return total;
}

}  // namespace

TEST(SimplexPoint, TotalIsExact) {
  const auto x = point({0.1, 0.2, 0.3, 0.4});
  SimplexPoint::Unit total = 0;
  for (auto u : x.units()) total += u;
  EXPECT_EQ(total, SimplexPoint::kTotal);
  EXPECT_NEAR(x[2], 0.3, 1e-15);
}

TEST(SimplexPoint, RejectsBadInput) {
  EXPECT_THROW(point({1.0}), ArgumentError);
  EXPECT_THROW(point({0.5, 0.6}), ArgumentError);
  EXPECT_THROW(point({-0.1, 1.1}), ArgumentError);
  EXPECT_THROW(point({NAN, 1.0}), ArgumentError);
  EXPECT_THROW(SimplexPoint::from_units({1, 2}), ArgumentError);
  EXPECT_THROW(SimplexPoint::vertex(3, 3), ArgumentError);
}

TEST(SimplexPoint, CenterAndVertex) {
  const auto c = SimplexPoint::center(7);
  EXPECT_NEAR(c[3], 1.0 / 7.0, 1e-15);
  const auto v = SimplexPoint::vertex(4, 2);
  EXPECT_EQ(v[2], 1.0);
  EXPECT_EQ(v.min_value(), 0.0);
}

TEST(ScaleUnits, RoundsToNearest) {
  EXPECT_EQ(scale_units(10, 0.5), 5u);
  EXPECT_EQ(scale_units(11, 0.5), 6u);  // ties round up
  EXPECT_EQ(scale_units(SimplexPoint::kTotal, 0.25), SimplexPoint::kTotal / 4);
  EXPECT_EQ(scale_units(12345, 1.0), 12345u);
  EXPECT_EQ(scale_units(12345, 0.0), 0u);
  EXPECT_THROW(scale_units(1, 1.5), ArgumentError);
  // Against long double for a generic lambda.
  const SimplexPoint::Unit s = 987654321987654321ull;
  const double lambda = 0.3183098861837907;
  const long double exact = static_cast<long double>(s) * lambda;
  EXPECT_LE(std::abs(static_cast<long double>(scale_units(s, lambda)) - exact), 1.0L);
}

TEST(Step, ExampleUpdate) {
  const auto x = point({0.2, 0.3, 0.5});
  const auto y = step(x, StepDraw{0, 2, 0.25});
  EXPECT_NEAR(y[0], 0.175, 1e-15);
  EXPECT_NEAR(y[1], 0.3, 1e-15);
  EXPECT_NEAR(y[2], 0.525, 1e-15);
  EXPECT_EQ(x.unit(1), y.unit(1));
}

TEST(Step, RejectsBadDraws) {
  const auto x = SimplexPoint::center(3);
  EXPECT_THROW(step(x, StepDraw{1, 1, 0.5}), ArgumentError);
  EXPECT_THROW(step(x, StepDraw{2, 1, 0.5}), ArgumentError);
  EXPECT_THROW(step(x, StepDraw{0, 3, 0.5}), ArgumentError);
  EXPECT_THROW(step(x, StepDraw{0, 1, -0.1}), ArgumentError);
}

TEST(Step, ConservesTotalOverManySteps) {
  RandomStream rng(11, 0);
  auto x = SimplexPoint::vertex(6, 0);
  for (int t = 0; t < 100000; ++t) step_in_place(x, sample_step_draw(6, LambdaLaw::uniform(), rng));
  SimplexPoint::Unit total = 0;
  for (auto u : x.units()) total += u;
  EXPECT_EQ(total, SimplexPoint::kTotal);
}

TEST(Step, TwoDimensionalStepForgetsTheStart) {
  // At n = 2 the pair is forced and the new point is (lambda, 1 - lambda).
  const auto a = point({0.9, 0.1});
  const auto b = point({0.2, 0.8});
  const StepDraw d{0, 1, 0.37};
  EXPECT_EQ(step(a, d), step(b, d));
}

TEST(Weight, SubsetSumsAndErrors) {
  const auto x = point({0.1, 0.2, 0.3, 0.4});
  const std::vector<std::size_t> s{0, 3};
  EXPECT_NEAR(weight(s, x), 0.5, 1e-15);
  const std::vector<std::size_t> all{0, 1, 2, 3};
  EXPECT_EQ(weight_units(all, x), SimplexPoint::kTotal);
  const std::vector<std::size_t> repeated{1, 1};
  EXPECT_THROW(weight(repeated, x), ArgumentError);
  const std::vector<std::size_t> out{4};
  EXPECT_THROW(weight(out, x), ArgumentError);
}

TEST(SqDistance, Values) {
  EXPECT_EQ(sq_distance(SimplexPoint::vertex(3, 0), SimplexPoint::vertex(3, 1)), 2.0);
  const auto c = SimplexPoint::center(4);
  EXPECT_EQ(sq_distance(c, c), 0.0);
}

TEST(LambdaLaw, ParseAndMoments) {
  EXPECT_TRUE(LambdaLaw::parse("uniform").is_uniform());
  const auto b = LambdaLaw::parse("beta:2.5");
  EXPECT_DOUBLE_EQ(b.shape(), 2.5);
  EXPECT_EQ(b.to_string(), "beta:2.5");
  EXPECT_THROW(LambdaLaw::parse("beta:"), ArgumentError);
  EXPECT_THROW(LambdaLaw::parse("beta:x"), ArgumentError);
  EXPECT_THROW(LambdaLaw::parse("gauss"), ArgumentError);
  EXPECT_THROW(LambdaLaw::symmetric_beta(-1.0), ArgumentError);
  EXPECT_DOUBLE_EQ(LambdaLaw::uniform().second_moment(), 1.0 / 3.0);
  // Beta(1,1) is the uniform law.
  EXPECT_NEAR(LambdaLaw::symmetric_beta(1.0).second_moment(), 1.0 / 3.0, 1e-15);
}

TEST(LambdaLaw, SampleMatchesCdf) {
  for (const auto& law : {LambdaLaw::uniform(), LambdaLaw::symmetric_beta(0.5),
                          LambdaLaw::symmetric_beta(3.0)}) {
    RandomStream rng(5, 0);
    std::vector<double> v(20000);
    double sq = 0.0;
    for (auto& x : v) {
      x = law.sample(rng);
      sq += x * x;
    }
    const auto ks = stats::ks_one_sample(v, [&](double x) { return law.cdf(x); });
    EXPECT_GT(ks.p_value, 0.001) << law.to_string();
    EXPECT_NEAR(sq / v.size(), law.second_moment(), 0.01) << law.to_string();
  }
}

TEST(LambdaLaw, Symmetry) {
  const auto law = LambdaLaw::symmetric_beta(2.2);
  for (double x : {0.05, 0.3, 0.45}) EXPECT_NEAR(law.cdf(x), 1.0 - law.cdf(1.0 - x), 1e-14);
}

TEST(LambdaLaw, CurvatureSup) {
  EXPECT_EQ(LambdaLaw::uniform().cdf_curvature_sup(), 0.0);
  EXPECT_TRUE(std::isinf(LambdaLaw::symmetric_beta(1.5).cdf_curvature_sup()));
  // Beta(2,2): f(x) = 6x(1-x), |f'| = |6 - 12x| <= 6.
  EXPECT_NEAR(LambdaLaw::symmetric_beta(2.0).cdf_curvature_sup(), 6.0, 1e-6);
  // Beta(3,3): f'(x) = 60 x (1-x) (1-2x); max at x = (3 - sqrt 3)/6.
  const double x = (3.0 - std::sqrt(3.0)) / 6.0;
  EXPECT_NEAR(LambdaLaw::symmetric_beta(3.0).cdf_curvature_sup(),
              60.0 * x * (1 - x) * (1 - 2 * x), 1e-6);
}

TEST(UniformSimplex, MarginalIsBeta) {
  RandomStream rng(8, 0);
  std::vector<double> first(5000);
  for (auto& v : first) v = sample_uniform_simplex(5, rng)[0];
  const auto ks = stats::ks_one_sample(first, [](double x) { return 1.0 - std::pow(1.0 - x, 4); });
  EXPECT_GT(ks.p_value, 0.001);
}

TEST(StepChain, ConvergesToUniformMarginal) {
  std::vector<double> first;
  for (std::uint64_t r = 0; r < 3000; ++r) {
    RandomStream rng(derive_seed(21, r), 0);
    auto x = SimplexPoint::vertex(4, 0);
    for (int t = 0; t < 200; ++t) step_in_place(x, sample_step_draw(4, LambdaLaw::uniform(), rng));
    first.push_back(x[0]);
  }
  const auto ks = stats::ks_one_sample(first, [](double x) { return 1.0 - std::pow(1.0 - x, 3); });
  EXPECT_GT(ks.p_value, 0.001);
}

TEST(Binomial, PmfAgainstOracle) {
  for (std::uint64_t n : {1ull, 7ull, 60ull, 61ull, 200ull, 5000ull}) {
    for (std::uint64_t k = 0; k <= n; k += std::max<std::uint64_t>(1, n / 37)) {
      const long double nn = n, kk = k;
      const long double log_pmf = std::lgamma(nn + 1) - std::lgamma(kk + 1) -
                                  std::lgamma(nn - kk + 1) - nn * std::log(2.0L);
      const long double pmf = std::exp(log_pmf);
      if (pmf < 1e-290L) continue;
      EXPECT_NEAR(binomial_half_pmf(n, k) / static_cast<double>(pmf), 1.0, 1e-9) << n << ' ' << k;
    }
  }
  EXPECT_EQ(binomial_half_pmf(3, 4), 0.0);
}

TEST(Binomial, InverseMatchesOracleCdf) {
  for (std::uint64_t n : {0ull, 1ull, 2ull, 9ull, 50ull, 301ull}) {
    for (double u : {0.0, 0.01, 0.2, 0.5, 0.77, 0.999}) {
      const auto k = binomial_half_inverse(n, u);
      EXPECT_LE(k, n);
      if (n == 0) continue;
      // Smallest k with cdf(k) > u.
      EXPECT_GT(static_cast<double>(binomial_cdf_oracle(n, k)), u - 1e-12) << n << ' ' << u;
      if (k > 0) EXPECT_LE(static_cast<double>(binomial_cdf_oracle(n, k - 1)), u + 1e-12);
    }
  }
  EXPECT_THROW(binomial_half_inverse(4, 1.0), ArgumentError);
}

TEST(Binomial, LargeMeanAndVariance) {
  RandomStream rng(3, 0);
  const std::uint64_t n = 1000000;
  double s1 = 0.0, s2 = 0.0;
  const int reps = 20000;
  for (int k = 0; k < reps; ++k) {
    const double v = static_cast<double>(binomial_half_inverse(n, rng.uniform01()));
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / reps;
  const double var = s2 / reps - mean * mean;
  EXPECT_NEAR(mean, 500000.0, 5 * std::sqrt(250000.0 / reps));
  EXPECT_NEAR(var / 250000.0, 1.0, 0.05);
}

TEST(Composition, ConservationAndEmptyPair) {
  RandomStream rng(4, 0);
  Composition c{{10, 0, 0, 5}};
  for (int t = 0; t < 1000; ++t) {
    const std::size_t i = rng.uniform_index(4);
    const std::size_t j = (i + 1 + rng.uniform_index(3)) % 4;
    c = discrete_step(c, i, j, rng);
    ASSERT_EQ(c.total(), 15u);
  }
  Composition e{{3, 0, 0}};
  discrete_step_in_place(e, 1, 2, 0.42);
  EXPECT_EQ(e.counts, (std::vector<std::uint64_t>{3, 0, 0}));
  EXPECT_THROW(discrete_step_in_place(e, 1, 1, 0.5), ArgumentError);
  EXPECT_THROW((Composition{{0, 0}}).validate(), ArgumentError);
}
