#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "simplex_gibbs/cftp.hpp"
#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/stats.hpp"

using namespace simplex_gibbs;

namespace {

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

CftpConfig small_config(std::size_t n, std::uint64_t seed, std::size_t t1, std::size_t t2) {
  CftpConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.phase1_steps = t1;
  cfg.phase2_steps = t2;
  return cfg;
}

}  // namespace

TEST(TransitionMatrix, IdentityAndCollapse) {
  auto m = TransitionMatrix::identity(4);
  EXPECT_EQ(l1_diameter_bound(m), 2.0);
  EXPECT_EQ(m.column_sum_error(), 0.0);
  auto two = TransitionMatrix::identity(2);
  two.evolve(StepDraw{0, 1, 0.3});
  EXPECT_EQ(l1_diameter_bound(two), 0.0);
  EXPECT_EQ(l1_summed_bound(two), 0.0);
  EXPECT_THROW(TransitionMatrix::identity(1), ArgumentError);
  EXPECT_THROW(m.column(4), ArgumentError);
}

TEST(TransitionMatrix, DiameterBoundDominatesImages) {
  RandomStream rng(1, 0);
  const std::size_t n = 4;
  auto m = TransitionMatrix::identity(n);
  for (int k = 0; k < 6; ++k) m.evolve(sample_step_draw(n, LambdaLaw::uniform(), rng));
  const double bound = l1_diameter_bound(m);
  for (int k = 0; k < 2000; ++k) {
    const auto u = m.apply(sample_uniform_simplex(n, rng).values());
    const auto v = m.apply(sample_uniform_simplex(n, rng).values());
    double l1 = 0.0;
    for (std::size_t r = 0; r < n; ++r) l1 += std::abs(u[r] - v[r]);
    ASSERT_LE(l1, bound + 1e-12);
  }
  EXPECT_GE(l1_summed_bound(m), bound - 1e-12);
}

TEST(TransitionMatrix, ShrinksWithSteps) {
  RandomStream rng(2, 0);
  const std::size_t n = 8;
  auto m = TransitionMatrix::identity(n);
  for (int k = 0; k < 20 * 8 * 3; ++k) m.evolve(sample_step_draw(n, LambdaLaw::uniform(), rng));
  EXPECT_LT(l1_diameter_bound(m), 0.05);
}

TEST(TransitionMatrix, LinearInTheStart) {
  // The proportional dynamics are linear: stepping a point equals applying
  // the accumulated matrix to it.
  const std::size_t n = 5;
  RandomStream rng(3, 0);
  std::vector<SimplexPoint> starts;
  for (int k = 0; k < 10; ++k) starts.push_back(sample_uniform_simplex(n, rng));
  auto m = TransitionMatrix::identity(n);
  auto moved = starts;
  for (int s = 0; s < 1000; ++s) {
    const auto d = sample_step_draw(n, LambdaLaw::uniform(), rng);
    m.evolve(d);
    for (auto& p : moved) step_in_place(p, d);
  }
  for (std::size_t k = 0; k < starts.size(); ++k) {
    EXPECT_LT(linf(m.apply(starts[k].values()), moved[k].values()), 1e-12);
  }
}

TEST(TransitionMatrix, StaysColumnStochastic) {
  const std::size_t n = 5;
  RandomStream rng(4, 0);
  auto m = TransitionMatrix::identity(n);
  for (int s = 0; s < 1000000; ++s) m.evolve(sample_step_draw(n, LambdaLaw::uniform(), rng));
  EXPECT_LT(m.column_sum_error(), 1e-9);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) EXPECT_GE(m(r, c), 0.0);
}

TEST(DrawAt, DependsOnlyOnSeedAndTime) {
  const auto a = draw_at(9, -17, 6, LambdaLaw::uniform());
  const auto b = draw_at(9, -17, 6, LambdaLaw::uniform());
  EXPECT_EQ(a.draw, b.draw);
  EXPECT_EQ(a.accept_u, b.accept_u);
  const auto c = draw_at(9, -18, 6, LambdaLaw::uniform());
  EXPECT_FALSE(a.draw == c.draw && a.accept_u == c.accept_u);
}

TEST(EpochWindow, DoublingLayout) {
  const auto cfg = small_config(4, 1, 3, 2);
  const auto w0 = epoch_window(cfg, 0);
  EXPECT_EQ(w0.start_time, -5);
  EXPECT_EQ(w0.end_time, 0);
  EXPECT_EQ(w0.phase2_start, -2);
  const auto w1 = epoch_window(cfg, 1);
  EXPECT_EQ(w1.start_time, -10);
  EXPECT_EQ(w1.end_time, -5);
  EXPECT_EQ(w1.phase2_start, -7);
  const auto w3 = epoch_window(cfg, 3);
  EXPECT_EQ(w3.start_time, -40);
  EXPECT_EQ(w3.end_time, -20);
  EXPECT_THROW(epoch_window(cfg, -1), ArgumentError);
}

TEST(CftpConfig, DefaultsAndValidation) {
  const auto cfg = CftpConfig::defaults(5, LambdaLaw::uniform(), 1);
  const double nl = 5 * std::log(5.0);
  EXPECT_EQ(cfg.phase1_steps, static_cast<std::size_t>(std::ceil(12 * nl)));
  EXPECT_EQ(cfg.phase2_steps, static_cast<std::size_t>(std::ceil(2 * nl)));
  EXPECT_THROW(small_config(5, 1, 0, 3).validate(), ArgumentError);
  EXPECT_THROW(small_config(1, 1, 3, 3).validate(), ArgumentError);
}

TEST(RunEpoch, ReplayIsBitIdentical) {
  const auto cfg = CftpConfig::defaults(5, LambdaLaw::uniform(), 21);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(run_epoch(cfg, k) == run_epoch(cfg, k));
}

TEST(RunEpoch, CoalescedChainsAgree) {
  int coalesced = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rec = run_epoch(CftpConfig::defaults(5, LambdaLaw::uniform(), seed), 0);
    if (!rec.coalesced) continue;
    ++coalesced;
    for (const auto& v : rec.vertex_end) ASSERT_EQ(v, rec.center_end);
    EXPECT_TRUE(rec.graph_connected);
    EXPECT_FALSE(rec.failure.has_value());
  }
  EXPECT_GT(coalesced, 25);
}

TEST(Propagate, CenterStartReproducesCenterEnd) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rec = run_epoch(small_config(5, seed, 2, 8), 0);
    EXPECT_EQ(propagate_through_epoch(rec.center_start, rec), rec.center_end);
  }
}

TEST(Propagate, CoalescedEpochForgetsTheValue) {
  RandomStream rng(5, 0);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rec = run_epoch(CftpConfig::defaults(5, LambdaLaw::uniform(), seed), 0);
    if (!rec.coalesced) continue;
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_EQ(propagate_through_epoch(SimplexPoint::vertex(5, k), rec), rec.center_end);
    }
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Propagate, MatchesVertexChainsBeforeTheFailure) {
  // Chains with a smaller index than the first failing one used no
  // remainder draw, so replaying a vertex reproduces them exactly.
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto rec = run_epoch(small_config(5, seed, 2, 8), 0);
    if (!rec.failure) continue;
    ++failures;
    for (std::size_t k = 0; k < rec.failure->chain; ++k) {
      ASSERT_EQ(propagate_through_epoch(SimplexPoint::vertex(5, k), rec), rec.vertex_end[k]);
    }
    EXPECT_GE(rec.failure->time, rec.window.phase2_start);
    EXPECT_LT(rec.failure->time, rec.window.end_time);
  }
  EXPECT_GT(failures, 20);
}

TEST(Propagate, RejectsTamperedRecords) {
  auto rec = run_epoch(small_config(4, 3, 3, 5), 0);
  EXPECT_THROW(propagate_through_epoch(SimplexPoint::center(5), rec), ArgumentError);
  rec.center_end = SimplexPoint::vertex(4, 0);
  EXPECT_THROW(propagate_through_epoch(rec.center_start, rec), IntegrityError);
}

TEST(Cftp, ShortPhasesNeedSeveralEpochs) {
  std::size_t multi = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto cfg = small_config(4, seed, 2, 3);
    const auto res = cftp_detailed(cfg);
    double total = 0.0;
    for (double v : res.point.values()) total += v;
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_EQ(res.records.size(), res.epochs);
    EXPECT_TRUE(res.records.back().coalesced);
    for (std::size_t k = 0; k + 1 < res.records.size(); ++k) EXPECT_FALSE(res.records[k].coalesced);
    if (res.epochs > 1) ++multi;
    const auto again = cftp_detailed(cfg);
    EXPECT_EQ(res.point, again.point);
    EXPECT_EQ(res.steps, again.steps);
    // Manual replay of the propagation.
    SimplexPoint v = res.records.back().center_end;
    for (std::size_t j = res.records.size() - 1; j-- > 0;) v = propagate_through_epoch(v, res.records[j]);
    EXPECT_EQ(v, res.point);
  }
  EXPECT_GT(multi, 10u);
}

TEST(Cftp, BudgetExhaustion) {
  auto cfg = small_config(5, 1, 1, 1);
  cfg.max_doublings = 0;
  EXPECT_THROW(cftp_detailed(cfg), TerminationError);
  cfg.max_doublings = 41;
  EXPECT_THROW(cftp_detailed(cfg), ArgumentError);
}

TEST(Cftp, DimensionTwoIsUniform) {
  std::vector<double> first;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    first.push_back(cftp(2, LambdaLaw::uniform(), seed)[0]);
  }
  EXPECT_GT(stats::ks_one_sample(first, [](double t) { return std::clamp(t, 0.0, 1.0); }).p_value,
            0.001);
}
