#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/experiments.hpp"
#include "simplex_gibbs/stats.hpp"

using namespace simplex_gibbs;

namespace {

double harmonic(std::size_t k) {
  double h = 0.0;
  for (std::size_t j = 1; j <= k; ++j) h += 1.0 / static_cast<double>(j);
  return h;
}

const Claim& find_claim(const SummaryReport& rep, const std::string& name) {
  for (const auto& c : rep.claims) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing claim " + name);
}

}  // namespace

TEST(LowerBoundFormula, SmallValues) {
  EXPECT_NEAR(lower_bound_formula(3), 7.5, 1e-12);
  EXPECT_NEAR(lower_bound_formula(4), 4 + 16 * (0.25 + 1.0 / 3.0), 1e-12);
  EXPECT_NEAR(chain_collection_mean(4), 3 * (1 + 0.5 + 1.0 / 3.0), 1e-12);
}

TEST(LowerBoundFormula, AgreesWithStageSum) {
  // Directed collector stages k -> k+1 have mean n^2 / (k (n - k)), summing
  // to 2 n H_{n-1}; the formula counts the first stage as n instead.
  for (std::size_t n : {3u, 8u, 32u, 100u}) {
    const double x = static_cast<double>(n);
    EXPECT_NEAR(lower_bound_formula(n) + x / (x - 1), 2 * x * harmonic(n - 1), 1e-9 * x);
  }
}

TEST(Collectors, MeansMatchExactValues) {
  const std::size_t n = 10;
  std::vector<double> directed, chain;
  for (std::uint64_t t = 0; t < 20000; ++t) {
    RandomStream a(derive_seed(1, t), 0, 0), b(derive_seed(1, t), 0, 1);
    directed.push_back(static_cast<double>(directed_collection_time(n, a)));
    chain.push_back(static_cast<double>(chain_collection_time(n, b)));
  }
  EXPECT_NEAR(stats::mean(directed), 2 * 10 * harmonic(9), 4 * stats::standard_error(directed));
  EXPECT_NEAR(stats::mean(chain), chain_collection_mean(n), 4 * stats::standard_error(chain));
  RandomStream rng(1, 0);
  EXPECT_THROW(directed_collection_time(1, rng), ArgumentError);
}

TEST(MakeClaim, Comparisons) {
  EXPECT_TRUE(make_claim("a", 1.0, "<=", 1.0, 1).pass);
  EXPECT_FALSE(make_claim("a", 1.0, "<", 1.0, 1).pass);
  EXPECT_TRUE(make_claim("a", 2.2, "in", 2.0, 1, 2.5).pass);
  EXPECT_FALSE(make_claim("a", 2.6, "in", 2.0, 1, 2.5).pass);
  EXPECT_TRUE(make_claim("a", 3.0, ">", 2.0, 1).pass);
  EXPECT_THROW(make_claim("a", 1.0, "==", 1.0, 1), ArgumentError);
}

TEST(SummaryReport, JsonShape) {
  SummaryReport rep;
  rep.command = "x";
  rep.seed = 7;
  rep.claims.push_back(make_claim("c", 2.2, "in", 2.0, 10, 2.5));
  const Json j = rep.to_json();
  EXPECT_EQ(j["command"], "x");
  EXPECT_EQ(j["claims"][0]["upper"], 2.5);
  EXPECT_EQ(j["claims"][0]["seed"], 7);
  EXPECT_TRUE(j["all_pass"].get<bool>());
  const Json back = Json::parse(j.dump());
  EXPECT_EQ(back, j);
}

TEST(MarginalCdf, BetaFamily) {
  EXPECT_NEAR(simplex_marginal_cdf(5, 0.3), 1 - std::pow(0.7, 4), 1e-15);
  // Beta(2, 2) cdf: 3x^2 - 2x^3.
  EXPECT_NEAR(simplex_marginal_cdf(2, 0.3, 2.0), 3 * 0.09 - 2 * 0.027, 1e-12);
  EXPECT_EQ(simplex_marginal_cdf(3, -1.0, 2.0), 0.0);
  EXPECT_EQ(simplex_marginal_cdf(3, 2.0, 2.0), 1.0);
}

TEST(RunContraction, DimensionTwoIsExact) {
  const auto rep = run_contraction(2, 200, 3);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_EQ(find_claim(rep, "one_step_coalescence_fraction").value, 1.0);
}

TEST(RunContraction, MatchesFactor) {
  const auto rep = run_contraction(6, 50000, 4);
  EXPECT_TRUE(find_claim(rep, "ratio_relative_error").pass);
  const auto beta = run_contraction(6, 50000, 4, LambdaLaw::symmetric_beta(2.0));
  EXPECT_NEAR(beta.statistics["exact_factor"].get<double>(),
              contraction_factor(6, LambdaLaw::symmetric_beta(2.0).second_moment()), 1e-15);
}

TEST(RunConnectivity, ZeroStepsNeverConnect) {
  const auto rep = run_connectivity(6, 0.5, 50, 1, std::size_t{0});
  EXPECT_EQ(rep.statistics["frequency"].get<double>(), 0.0);
  const auto full = run_connectivity(6, 0.5, 500, 1);
  EXPECT_TRUE(full.all_pass());
}

TEST(RunCouple, SmallRunRecordsAndTraces) {
  ExperimentConfig cfg;
  cfg.n = 5;
  cfg.C = 2.0;
  cfg.replicas = 20;
  std::size_t records = 0, rows = 0;
  const auto rep = run_couple(cfg, {}, [&](const Json& j) {
    ++records;
    EXPECT_TRUE(j.contains("coalesced"));
  }, [&](std::size_t, std::size_t, double) { ++rows; });
  EXPECT_EQ(records, 20u);
  EXPECT_GT(rows, 20u);
  EXPECT_TRUE(find_claim(rep, "weight_audit_coalesced").pass);
}

TEST(RunCftp, SmallRunPasses) {
  std::size_t records = 0;
  const auto rep = run_cftp(3, 300, 2, LambdaLaw::uniform(), [&](const Json&) { ++records; });
  EXPECT_EQ(records, 300u);
  EXPECT_TRUE(rep.all_pass()) << rep.to_json().dump(2);
}

TEST(RunDiscrete, ConservesBalls) {
  const auto rep = run_discrete(4, 1000, 30, 200, 5);
  EXPECT_TRUE(find_claim(rep, "ball_conservation").pass);
  EXPECT_EQ(rep.statistics["mean_z"].size(), 31u);
}

TEST(RunSimulate, LongRunIsStationary) {
  const auto rep = run_simulate(4, 200, 2000, 6);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_THROW(run_simulate(1, 10, 10, 6), ArgumentError);
}

TEST(RunLowerBound, ClaimsPresent) {
  const auto rep = run_lower_bound(8, 2000, 7);
  EXPECT_NO_THROW(find_claim(rep, "directed_mean_relative_error"));
  EXPECT_NO_THROW(find_claim(rep, "chain_pairs_mean_z"));
  EXPECT_EQ(rep.claims.size(), 4u);
  EXPECT_THROW(run_lower_bound(2, 10, 1), ArgumentError);
}
