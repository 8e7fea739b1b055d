#include "simplex_gibbs/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "simplex_gibbs/cftp.hpp"
#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/parallel.hpp"
#include "simplex_gibbs/partitions.hpp"
#include "simplex_gibbs/stats.hpp"

namespace simplex_gibbs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t ceil_n_log_n(double factor, std::size_t n) {
  const double x = static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(factor * x * std::log(x) - 1e-12));
}

std::vector<double> to_doubles(const std::vector<std::uint64_t>& v) {
  return std::vector<double>(v.begin(), v.end());
}

Json ks_json(const stats::KsResult& ks) {
  return Json{{"statistic", ks.statistic}, {"p_value", ks.p_value}, {"sample_size", ks.n}};
}

// Two-proportion z-test, two-sided p-value.
double two_proportion_p(std::size_t a, std::size_t na, std::size_t b, std::size_t nb) {
  const double pa = static_cast<double>(a) / na;
  const double pb = static_cast<double>(b) / nb;
  const double pool = static_cast<double>(a + b) / (na + nb);
  const double se = std::sqrt(pool * (1.0 - pool) * (1.0 / na + 1.0 / nb));
  if (se == 0.0) return pa == pb ? 1.0 : 0.0;
  return std::erfc(std::abs(pa - pb) / se / std::sqrt(2.0));
}

}  // namespace

Claim make_claim(std::string name, double value, std::string comparison,
                 double threshold, std::size_t sample_size, double upper) {
  Claim c{std::move(name), value, threshold, std::move(comparison), upper, sample_size, false};
  if (c.comparison == "<=") c.pass = value <= threshold;
  else if (c.comparison == ">=") c.pass = value >= threshold;
  else if (c.comparison == "<") c.pass = value < threshold;
  else if (c.comparison == ">") c.pass = value > threshold;
  else if (c.comparison == "in") c.pass = value >= threshold && value <= upper;
  else throw ArgumentError("make_claim: unknown comparison " + c.comparison);
  return c;
}

bool SummaryReport::all_pass() const {
  return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.pass; });
}

Json SummaryReport::to_json() const {
  Json cl = Json::array();
  for (const auto& c : claims) {
    Json j{{"name", c.name},
           {"value", c.value},
           {"comparison", c.comparison},
           {"threshold", c.threshold},
           {"sample_size", c.sample_size},
           {"seed", seed},
           {"pass", c.pass}};
    if (c.comparison == "in") j["upper"] = c.upper;
    cl.push_back(std::move(j));
  }
  return Json{{"command", command},
              {"seed", seed},
              {"parameters", parameters},
              {"statistics", statistics},
              {"claims", std::move(cl)},
              {"all_pass", all_pass()},
              {"steps", steps},
              {"wall_seconds", wall_seconds}};
}

double simplex_marginal_cdf(std::size_t n, double x, double a) {
  if (n < 2) throw ArgumentError("simplex_marginal_cdf: n must be >= 2");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (a == 1.0) return -std::expm1(static_cast<double>(n - 1) * std::log1p(-x));
  return boost::math::ibeta(a, a * static_cast<double>(n - 1), x);
}

double stationary_shape(const LambdaLaw& law) {
  return law.is_uniform() ? 1.0 : law.shape();
}

// ---------------------------------------------------------------------------
// Lower bound

std::uint64_t directed_collection_time(std::size_t n, RandomStream& rng) {
  if (n < 2) throw ArgumentError("collection: n must be >= 2");
  std::vector<bool> collected(n, false);
  collected[0] = true;
  std::size_t count = 1;
  std::uint64_t steps = 0;
  while (count < n) {
    ++steps;
    const std::size_t i = rng.uniform_index(n);
    const std::size_t j = rng.uniform_index(n);
    if (collected[i] && !collected[j]) {
      collected[j] = true;
      ++count;
    }
  }
  return steps;
}

std::uint64_t chain_collection_time(std::size_t n, RandomStream& rng) {
  if (n < 2) throw ArgumentError("collection: n must be >= 2");
  std::vector<bool> collected(n, false);
  collected[0] = true;
  std::size_t count = 1;
  std::uint64_t steps = 0;
  while (count < n) {
    ++steps;
    std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    if (collected[i] != collected[j]) {
      collected[i] = collected[j] = true;
      ++count;
    }
  }
  return steps;
}

double lower_bound_formula(std::size_t n) {
  const double x = static_cast<double>(n);
  double total = x;
  for (std::size_t j = 2; j + 1 <= n; ++j) {
    total += x * x / (static_cast<double>(j) * (x - static_cast<double>(j)));
  }
  return total;
}

double chain_collection_mean(std::size_t n) {
  double h = 0.0;
  for (std::size_t k = 1; k < n; ++k) h += 1.0 / static_cast<double>(k);
  return static_cast<double>(n - 1) * h;
}

SummaryReport run_lower_bound(std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n < 3) throw ArgumentError("lowerbound: n must be >= 3");
  if (trials < 1) throw ArgumentError("lowerbound: trials must be >= 1");
  const auto start = Clock::now();
  SummaryReport rep;
  rep.command = "lowerbound";
  rep.seed = seed;
  rep.parameters = {{"n", n}, {"trials", trials}};

  auto sample = [&](std::size_t dim, std::uint32_t purpose, bool directed) {
    return to_doubles(parallel_map(trials, [&](std::size_t t) {
      RandomStream rng(derive_seed(seed, t), dim, purpose);
      return directed ? directed_collection_time(dim, rng) : chain_collection_time(dim, rng);
    }));
  };

  const auto directed = sample(n, 0, true);
  const double formula = lower_bound_formula(n);
  const double mean = stats::mean(directed);
  const double rel = std::abs(mean / formula - 1.0);
  rep.statistics["directed"] = {{"mean", mean},
                                {"standard_error", stats::standard_error(directed)},
                                {"median", stats::median(directed)},
                                {"q10", stats::quantile(directed, 0.1)},
                                {"q90", stats::quantile(directed, 0.9)},
                                {"formula", formula},
                                {"relative_error", rel}};
  rep.claims.push_back(make_claim("directed_mean_relative_error", rel, "<=", 0.03, trials));

  const auto chain = sample(n, 1, false);
  const double chain_mean = stats::mean(chain);
  const double chain_se = stats::standard_error(chain);
  const double exact = chain_collection_mean(n);
  rep.statistics["chain_pairs"] = {{"mean", chain_mean},
                                   {"standard_error", chain_se},
                                   {"median", stats::median(chain)},
                                   {"exact_mean", exact}};
  rep.claims.push_back(make_claim("chain_pairs_mean_z", std::abs(chain_mean - exact) / chain_se,
                                  "<=", 4.0, trials));
  rep.steps = static_cast<std::uint64_t>((mean + chain_mean) * trials);

  if (n / 2 >= 3) {
    Json scaling = Json::array();
    const std::vector<std::size_t> dims{n / 2, n, 2 * n};
    std::vector<double> medians;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const auto v = dims[k] == n ? directed : sample(dims[k], 0, true);
      medians.push_back(stats::median(v));
      scaling.push_back({{"n", dims[k]}, {"median", medians.back()}, {"mean", stats::mean(v)}});
    }
    rep.statistics["median_scaling"] = scaling;
    for (std::size_t k = 1; k < dims.size(); ++k) {
      rep.claims.push_back(make_claim("median_ratio_n" + std::to_string(dims[k]) + "_over_n" +
                                          std::to_string(dims[k - 1]),
                                      medians[k] / medians[k - 1], "in", 2.0, trials, 2.5));
    }
  }
  rep.wall_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------------------
// Contraction

SummaryReport run_contraction(std::size_t n, std::size_t replicas, std::uint64_t seed,
                              const LambdaLaw& law) {
  if (n < 2) throw ArgumentError("contraction: n must be >= 2");
  if (replicas < 2) throw ArgumentError("contraction: replicas must be >= 2");
  const auto start = Clock::now();
  SummaryReport rep;
  rep.command = "contraction";
  rep.seed = seed;
  rep.parameters = {{"n", n}, {"replicas", replicas}, {"law", law.to_string()}};

  RandomStream init(seed, 0, 1);
  const SimplexPoint x0 = SimplexPoint::vertex(n, 0);
  const SimplexPoint y0 = sample_stationary(n, law, init);
  const double z0 = sq_distance(x0, y0);

  struct One {
    double ratio = 0.0;
    bool equal = false;
  };
  const auto results = parallel_map(replicas, [&](std::size_t r) {
    RandomStream rng(derive_seed(seed, r), 0, 0);
    const StepDraw d = sample_step_draw(n, law, rng);
    const SimplexPoint x1 = step(x0, d);
    const SimplexPoint y1 = step(y0, d);
    return One{sq_distance(x1, y1) / z0, x1 == y1};
  });
  std::vector<double> ratios;
  std::size_t equal = 0;
  for (const auto& o : results) {
    ratios.push_back(o.ratio);
    equal += o.equal ? 1 : 0;
  }
  const double factor = contraction_factor(n, law.second_moment());
  const double mean = stats::mean(ratios);
  const double se = stats::standard_error(ratios);
  rep.statistics = {{"z0", z0},
                    {"mean_ratio", mean},
                    {"standard_error", se},
                    {"exact_factor", factor},
                    {"bit_identical_after_one_step", equal}};
  if (factor > 0.0) {
    const double rel = std::abs(mean / factor - 1.0);
    rep.statistics["relative_error"] = rel;
    rep.claims.push_back(make_claim("ratio_relative_error", rel, "<=", 0.02, replicas));
  } else {
    rep.claims.push_back(make_claim("ratio_abs", std::abs(mean), "<=", 0.0, replicas));
  }
  if (n == 2) {
    rep.claims.push_back(make_claim("one_step_coalescence_fraction",
                                    static_cast<double>(equal) / replicas, ">=", 1.0,
                                    replicas));
  }
  rep.steps = replicas;
  rep.wall_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------------------
// Connectivity

SummaryReport run_connectivity(std::size_t n, double epsilon, std::size_t trials,
                               std::uint64_t seed, std::optional<std::size_t> steps) {
  if (n < 2) throw ArgumentError("connectivity: n must be >= 2");
  if (!(epsilon > 0.0)) throw ArgumentError("connectivity: epsilon must be > 0");
  if (trials < 1) throw ArgumentError("connectivity: trials must be >= 1");
  const auto start = Clock::now();
  const std::size_t t_steps = steps.value_or(ceil_n_log_n(0.5 + epsilon, n));
  SummaryReport rep;
  rep.command = "connectivity";
  rep.seed = seed;
  rep.parameters = {{"n", n}, {"epsilon", epsilon}, {"trials", trials}, {"T", t_steps}};

  struct One {
    bool connected = false;
    double product = 1.0;
    double total_product = 1.0;
  };
  const auto results = parallel_map(trials, [&](std::size_t t) {
    RandomStream rng(derive_seed(seed, t), 0, 0);
    const EdgeSchedule s = EdgeSchedule::sample(n, t_steps, rng);
    const NestedPartitions p = build_partitions(s);
    return One{p.connected(), product_bound_check(p), total_split_product(p)};
  });
  std::size_t connected = 0;
  std::size_t violations = 0;
  double worst = 1.0;
  double worst_total = 1.0;
  const double cap = 2.0 * static_cast<double>(n);
  for (const auto& o : results) {
    connected += o.connected ? 1 : 0;
    violations += o.product > cap ? 1 : 0;
    worst = std::max(worst, o.product);
    worst_total = std::max(worst_total, o.total_product);
  }
  const double freq = static_cast<double>(connected) / trials;
  const double bound = 1.0 - 2.0 * std::pow(static_cast<double>(n), -epsilon);
  const auto ci = stats::wilson(connected, trials);
  rep.statistics = {{"connected", connected},
                    {"frequency", freq},
                    {"wilson_lo", ci.lo},
                    {"wilson_hi", ci.hi},
                    {"bound", bound},
                    {"max_product_bound", worst},
                    {"product_cap", cap},
                    {"product_violations", violations},
                    {"max_total_split_product", worst_total}};
  rep.claims.push_back(make_claim("connected_frequency", freq, ">=", bound, trials));
  rep.claims.push_back(make_claim("product_bound_violations",
                                  static_cast<double>(violations), "<=", 0.0, trials));
  rep.steps = static_cast<std::uint64_t>(t_steps) * trials;
  rep.wall_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------------------
// Two-stage coupling

SummaryReport run_couple(const ExperimentConfig& cfg_in, const CoupleOptions& options,
                         const RecordSink& records, const TraceSink& traces) {
  ExperimentConfig cfg = cfg_in;
  cfg.validate();
  cfg.keep_reports = true;
  if (traces && cfg.trace_stride == 0) cfg.trace_stride = 1;
  const auto start = Clock::now();
  const CouplingSummary s = full_coupling_run(cfg);

  SummaryReport rep;
  rep.command = "couple";
  rep.seed = cfg.seed;
  rep.parameters = {{"n", cfg.n},           {"C", cfg.C},
                    {"d", cfg.d},           {"e", cfg.e},
                    {"b", cfg.b},           {"epsilon", cfg.epsilon},
                    {"law", cfg.law.to_string()},
                    {"replicas", cfg.replicas},
                    {"schedule", to_string(cfg.schedule)},
                    {"start", cfg.start == StartKind::kVertex ? "vertex" : "stationary"},
                    {"burn_in_steps", s.burn_in_steps},
                    {"stage_steps", s.stage_steps}};
  rep.statistics = {{"coalesced", s.coalesced},
                    {"frequency", s.frequency},
                    {"wilson_lo", s.wilson_lo},
                    {"wilson_hi", s.wilson_hi},
                    {"theorem_bound", s.theorem_bound},
                    {"disconnected", s.disconnected},
                    {"subset_attempts", s.subset_attempts},
                    {"subset_failures", s.subset_failures},
                    {"condition_a_violations", s.condition_a_violations},
                    {"largeness_violations", s.largeness_violations},
                    {"min_coordinate_seen", s.min_coordinate_seen},
                    {"max_weight_audit_coalesced", s.max_weight_audit_coalesced},
                    {"mean_burn_in_final_z", s.mean_burn_in_final_z}};
  rep.claims.push_back(make_claim("coalescence_frequency", s.frequency, ">=",
                                  std::max(0.0, s.theorem_bound), cfg.replicas));
  if (s.theorem_bound > 0.0) {
    rep.claims.push_back(make_claim("coalescence_wilson_lo", s.wilson_lo, ">",
                                    s.theorem_bound, cfg.replicas));
  }
  rep.claims.push_back(make_claim("weight_audit_coalesced", s.max_weight_audit_coalesced,
                                  "<=", 0.0, s.coalesced));
  rep.steps = static_cast<std::uint64_t>(s.burn_in_steps + s.stage_steps) * cfg.replicas;

  for (std::size_t r = 0; r < s.reports.size(); ++r) {
    if (records) records(report_to_json(s.reports[r], r));
    if (traces) {
      for (const auto& [t, z] : s.reports[r].z_trace) traces(r, t, z);
    }
  }

  if (options.stationary_control) {
    ExperimentConfig control = cfg;
    control.start = StartKind::kUniform;
    control.seed = derive_seed(cfg.seed, 0x5eed);
    control.keep_reports = false;
    control.trace_stride = 0;
    const CouplingSummary c = full_coupling_run(control);
    const double p = two_proportion_p(s.coalesced, s.replicas, c.coalesced, c.replicas);
    rep.statistics["stationary_control"] = {{"seed", control.seed},
                                            {"coalesced", c.coalesced},
                                            {"frequency", c.frequency},
                                            {"two_proportion_p", p}};
    rep.claims.push_back(make_claim("start_comparison_p", p, ">", 0.001, cfg.replicas));
    rep.steps *= 2;
  }

  if (options.scan_replicas > 0) {
    std::size_t missing = 0;
    const auto times = parallel_map(options.scan_replicas, [&](std::size_t r) {
      return coupling_time(cfg.n, cfg.law, cfg.seed, r);
    });
    std::vector<double> found;
    for (const auto& t : times) {
      if (t) found.push_back(static_cast<double>(*t));
      else ++missing;
    }
    Json scan{{"replicas", options.scan_replicas}, {"not_coalesced", missing}};
    if (!found.empty()) {
      scan["median"] = stats::median(found);
      scan["mean"] = stats::mean(found);
      scan["q10"] = stats::quantile(found, 0.1);
      scan["q90"] = stats::quantile(found, 0.9);
    }
    rep.statistics["coupling_time"] = scan;
  }
  rep.wall_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------------------
// Perfect sampling

SummaryReport run_cftp(std::size_t n, std::size_t samples, std::uint64_t seed,
                       const LambdaLaw& law, const RecordSink& records) {
  if (n < 2) throw ArgumentError("cftp: n must be >= 2");
  if (samples < 1) throw ArgumentError("cftp: samples must be >= 1");
  const auto start = Clock::now();
  SummaryReport rep;
  rep.command = "cftp";
  rep.seed = seed;
  rep.parameters = {{"n", n}, {"samples", samples}, {"law", law.to_string()}};
  const CftpConfig base = CftpConfig::defaults(n, law, seed);
  rep.parameters["phase1_steps"] = base.phase1_steps;
  rep.parameters["phase2_steps"] = base.phase2_steps;
  rep.parameters["max_doublings"] = base.max_doublings;

  auto config_for = [&](std::size_t k) {
    CftpConfig c = base;
    c.seed = derive_seed(seed, k);
    return c;
  };
  const auto results =
      parallel_map(samples, [&](std::size_t k) { return cftp_detailed(config_for(k)); });

  const double a = stationary_shape(law);
  const double alpha = a;
  const double beta = a * static_cast<double>(n - 1);
  const double sd = std::sqrt(alpha * beta / ((alpha + beta) * (alpha + beta) * (alpha + beta + 1.0)));
  const double target_mean = 1.0 / static_cast<double>(n);

  Json coords = Json::array();
  double min_p = 1.0;
  double max_z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v;
    v.reserve(samples);
    for (const auto& r : results) v.push_back(r.point[i]);
    const auto ks = stats::ks_one_sample(
        v, [&](double x) { return simplex_marginal_cdf(n, x, a); });
    const double m = stats::mean(v);
    const double z = std::abs(m - target_mean) / (sd / std::sqrt(static_cast<double>(samples)));
    min_p = std::min(min_p, ks.p_value);
    max_z = std::max(max_z, z);
    coords.push_back({{"coordinate", i + 1}, {"mean", m}, {"z", z}, {"ks", ks_json(ks)}});
  }

  std::vector<double> epochs;
  std::uint64_t steps = 0;
  Json histogram = Json::object();
  for (const auto& r : results) {
    epochs.push_back(static_cast<double>(r.epochs));
    steps += r.steps;
    const std::string key = std::to_string(r.epochs);
    histogram[key] = histogram.value(key, 0) + 1;
  }
  const CftpResult again = cftp_detailed(config_for(0));
  const bool deterministic = again.point == results[0].point && again.epochs == results[0].epochs;

  rep.statistics = {{"marginal", {{"family", "beta"}, {"alpha", alpha}, {"beta", beta}}},
                    {"coordinates", std::move(coords)},
                    {"min_ks_p", min_p},
                    {"max_mean_z", max_z},
                    {"epochs", {{"median", stats::median(epochs)},
                                {"mean", stats::mean(epochs)},
                                {"max", *std::max_element(epochs.begin(), epochs.end())},
                                {"histogram", std::move(histogram)}}},
                    {"deterministic_replay", deterministic}};
  rep.claims.push_back(make_claim("min_coordinate_ks_p", min_p, ">", 0.001, samples));
  rep.claims.push_back(make_claim("max_coordinate_mean_z", max_z, "<=", 3.0, samples));
  rep.claims.push_back(make_claim("deterministic_replay", deterministic ? 1.0 : 0.0, ">=",
                                  1.0, 1));
  rep.claims.push_back(make_claim("median_epochs", stats::median(epochs), "<=", 2.0, samples));

  if (records) {
    for (std::size_t k = 0; k < results.size(); ++k) {
      Json recs = Json::array();
      for (const auto& e : results[k].records) recs.push_back(epoch_record_to_json(e));
      records(Json{{"sample", k},
                   {"seed", config_for(k).seed},
                   {"epochs", results[k].epochs},
                   {"steps", results[k].steps},
                   {"point", point_to_json(results[k].point)},
                   {"records", std::move(recs)}});
    }
  }
  rep.steps = steps;
  rep.wall_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------------------
// Discrete analogue

SummaryReport run_discrete(std::size_t n, std::uint64_t balls, std::size_t steps,
                           std::size_t replicas, std::uint64_t seed, const TraceSink& traces) {
  if (n < 2) throw ArgumentError("discrete: n must be >= 2");
  if (balls < 1) throw ArgumentError("discrete: M must be >= 1");
  if (steps < 1) throw ArgumentError("discrete: steps must be >= 1");
  if (replicas < 1) throw ArgumentError("discrete: replicas must be >= 1");
  const auto start = Clock::now();
  SummaryReport rep;
  rep.command = "discrete";
  rep.seed = seed;
  rep.parameters = {{"n", n}, {"M", balls}, {"steps", steps}, {"replicas", replicas}};

  auto distance = [&](const Composition& a, const Composition& b) {
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = (static_cast<double>(a.counts[k]) - static_cast<double>(b.counts[k])) /
                       static_cast<double>(balls);
      total += d * d;
    }
    return total;
  };

  struct One {
    std::vector<double> z;
    bool conserved = true;
  };
  const auto results = parallel_map(replicas, [&](std::size_t r) {
    RandomStream rng(derive_seed(seed, r), 0, 0);
    Composition a{std::vector<std::uint64_t>(n, 0)};
    a.counts[0] = balls;
    Composition b{std::vector<std::uint64_t>(n, balls / n)};
    b.counts[0] += balls - (balls / n) * n;
    One out;
    out.z.push_back(distance(a, b));
    for (std::size_t t = 1; t <= steps; ++t) {
      std::size_t i = rng.uniform_index(n);
      std::size_t j = rng.uniform_index(n - 1);
      if (j >= i) ++j;
      const double u = rng.uniform01();
      discrete_step_in_place(a, i, j, u);
      discrete_step_in_place(b, i, j, u);
      out.conserved = out.conserved && a.total() == balls && b.total() == balls;
      out.z.push_back(distance(a, b));
    }
    return out;
  });

  std::vector<double> mean_z(steps + 1, 0.0);
  std::size_t conserved = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    conserved += results[r].conserved ? 1 : 0;
    for (std::size_t t = 0; t <= steps; ++t) {
      mean_z[t] += results[r].z[t] / static_cast<double>(replicas);
      if (traces) traces(r, t, results[r].z[t]);
    }
  }
  const double ratio = std::pow(mean_z[steps] / mean_z[0], 1.0 / static_cast<double>(steps));
  // Binomial(N, 1/2) splits behave like lambda = 1/2 for large N.
  const double predicted = contraction_factor(n, 0.25);
  rep.statistics = {{"mean_z", mean_z},
                    {"per_step_ratio", ratio},
                    {"continuous_prediction", predicted},
                    {"relative_error", std::abs(ratio / predicted - 1.0)},
                    {"conserved_replicas", conserved},
                    {"note", "no distributional claim: the continuous limit needs M far beyond "
                             "desk scale"}};
  rep.claims.push_back(make_claim("ball_conservation", static_cast<double>(conserved), ">=",
                                  static_cast<double>(replicas), replicas));
  rep.claims.push_back(make_claim("decay_ratio_relative_error",
                                  std::abs(ratio / predicted - 1.0), "<=", 0.10, replicas));
  rep.steps = static_cast<std::uint64_t>(steps) * replicas;
  rep.wall_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------------------
// Plain simulation

SummaryReport run_simulate(std::size_t n, std::size_t steps, std::size_t replicas,
                           std::uint64_t seed, const LambdaLaw& law, const TraceSink& traces) {
  if (n < 2) throw ArgumentError("simulate: n must be >= 2");
  if (replicas < 1) throw ArgumentError("simulate: replicas must be >= 1");
  const auto start = Clock::now();
  SummaryReport rep;
  rep.command = "simulate";
  rep.seed = seed;
  rep.parameters = {{"n", n}, {"T", steps}, {"replicas", replicas}, {"law", law.to_string()}};

  const auto finals = parallel_map(replicas, [&](std::size_t r) {
    RandomStream rng(derive_seed(seed, r), 0, 0);
    SimplexPoint x = SimplexPoint::vertex(n, 0);
    std::vector<double> path;
    if (traces) path.push_back(x[0]);
    for (std::size_t t = 1; t <= steps; ++t) {
      step_in_place(x, sample_step_draw(n, law, rng));
      if (traces) path.push_back(x[0]);
    }
    return std::make_pair(x, path);
  });

  const double a = stationary_shape(law);
  Json coords = Json::array();
  double min_p = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v;
    for (const auto& f : finals) v.push_back(f.first[i]);
    const auto ks = stats::ks_one_sample(v, [&](double x) { return simplex_marginal_cdf(n, x, a); });
    min_p = std::min(min_p, ks.p_value);
    coords.push_back({{"coordinate", i + 1}, {"mean", stats::mean(v)}, {"ks", ks_json(ks)}});
  }
  if (traces) {
    for (std::size_t r = 0; r < finals.size(); ++r) {
      for (std::size_t t = 0; t < finals[r].second.size(); ++t) traces(r, t, finals[r].second[t]);
    }
  }
  rep.statistics = {{"coordinates", std::move(coords)}, {"min_ks_p", min_p}};
  rep.claims.push_back(make_claim("min_coordinate_ks_p", min_p, ">", 0.001, replicas));
  rep.steps = static_cast<std::uint64_t>(steps) * replicas;
  rep.wall_seconds = seconds_since(start);
  return rep;
}

}  // namespace simplex_gibbs
