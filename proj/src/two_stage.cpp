#include "simplex_gibbs/two_stage.hpp"

#include <algorithm>
#include <cmath>

#include "simplex_gibbs/couplings.hpp"
#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/parallel.hpp"
#include "simplex_gibbs/stats.hpp"

namespace simplex_gibbs {

namespace {

double n_log_n(std::size_t n) {
  const double x = static_cast<double>(n);
  return x * std::log(x);
}

std::size_t ceil_steps(double v) {
  return static_cast<std::size_t>(std::ceil(v - 1e-12));
}

double max_abs_difference(const SimplexPoint& x, const SimplexPoint& y) {
  SimplexPoint::Unit worst = 0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const auto a = x.unit(k);
    const auto b = y.unit(k);
    worst = std::max(worst, a > b ? a - b : b - a);
  }
  return static_cast<double>(worst) * SimplexPoint::kUnit;
}

}  // namespace

StageSchedule parse_stage_schedule(const std::string& text) {
  if (text == "operational") return StageSchedule::kOperational;
  if (text == "theorem") return StageSchedule::kTheorem;
  if (text == "exponents") return StageSchedule::kExponents;
  throw ArgumentError("unknown schedule '" + text +
                      "' (expected operational, theorem or exponents)");
}

std::string to_string(StageSchedule s) {
  switch (s) {
    case StageSchedule::kOperational: return "operational";
    case StageSchedule::kTheorem: return "theorem";
    case StageSchedule::kExponents: return "exponents";
  }
  return "operational";
}

void ExperimentConfig::validate() const {
  if (n < 2) throw ArgumentError("config: n must be >= 2");
  if (!(C > 0.0)) throw ArgumentError("config: C must be > 0");
  if (!(e > b)) throw ArgumentError("config: e must exceed b");
  if (!(d > 2.0 * e)) throw ArgumentError("config: d must exceed 2e");
  if (!(epsilon > 0.0)) throw ArgumentError("config: epsilon must be > 0");
  if (replicas < 1) throw ArgumentError("config: replicas must be >= 1");
  if (stage_override && *stage_override < 1) {
    throw ArgumentError("config: second stage needs at least one step");
  }
}

std::size_t ExperimentConfig::burn_in_steps() const {
  if (burn_in_override) return *burn_in_override;
  switch (schedule) {
    case StageSchedule::kOperational: return ceil_steps(6.0 * C * n_log_n(n));
    case StageSchedule::kTheorem: return ceil_steps(6.0 * (C + 6.5) * n_log_n(n));
    case StageSchedule::kExponents: return default_burn_in_steps(n, d);
  }
  return 0;
}

std::size_t ExperimentConfig::stage_steps() const {
  if (stage_override) return *stage_override;
  std::size_t t = 0;
  switch (schedule) {
    case StageSchedule::kOperational: t = ceil_steps(C * n_log_n(n)); break;
    case StageSchedule::kTheorem: t = ceil_steps((C + 6.5) * n_log_n(n)); break;
    case StageSchedule::kExponents: t = ceil_steps((0.5 + epsilon) * n_log_n(n)); break;
  }
  return std::max<std::size_t>(t, 1);
}

// ---------------------------------------------------------------------------

BurnInResult burn_in(const SimplexPoint& x0, const SimplexPoint& y0,
                     std::size_t steps, const LambdaLaw& law, RandomStream& rng,
                     std::size_t trace_stride) {
  if (x0.dim() != y0.dim()) throw ArgumentError("burn_in: dimension mismatch");
  BurnInResult out{x0, y0, {}};
  const std::size_t n = x0.dim();
  if (trace_stride > 0) out.z_trace.emplace_back(0, sq_distance(out.x, out.y));
  for (std::size_t t = 1; t <= steps; ++t) {
    const StepDraw d = sample_step_draw(n, law, rng);
    step_in_place(out.x, d);
    step_in_place(out.y, d);
    if (trace_stride > 0 && (t % trace_stride == 0 || t == steps)) {
      out.z_trace.emplace_back(t, sq_distance(out.x, out.y));
    }
  }
  return out;
}

std::size_t default_burn_in_steps(std::size_t n, double d) {
  if (!(d > 0.0)) throw ArgumentError("default_burn_in_steps: d must be > 0");
  if (n < 2) throw ArgumentError("default_burn_in_steps: n must be >= 2");
  return ceil_steps(1.5 * d * n_log_n(n));
}

double contraction_factor(std::size_t n, double second_moment) {
  if (n < 2) throw ArgumentError("contraction_factor: n must be >= 2");
  const double x = static_cast<double>(n);
  return 1.0 - 2.0 / x + 4.0 * second_moment * (x - 2.0) / (x * (x - 1.0));
}

double weight_audit_labels(const SimplexPoint& x, const SimplexPoint& y,
                           const std::vector<std::size_t>& labels) {
  std::vector<__int128> diff(x.dim(), 0);
  for (std::size_t k = 0; k < x.dim(); ++k) {
    diff[labels[k]] += static_cast<__int128>(x.unit(k)) - static_cast<__int128>(y.unit(k));
  }
  __int128 worst = 0;
  for (auto v : diff) worst = std::max(worst, v < 0 ? -v : v);
  return static_cast<double>(worst) * SimplexPoint::kUnit;
}

double weight_audit(const SimplexPoint& x, const SimplexPoint& y,
                    const NestedPartitions& p, std::size_t t) {
  if (x.dim() != y.dim() || x.dim() != p.dim()) {
    throw ArgumentError("weight_audit: dimension mismatch");
  }
  return weight_audit_labels(x, y, p.labels_at(t));
}

bool condition_a_monitor(const SimplexPoint& x, const SimplexPoint& y, double e,
                         double b) {
  if (!(e > b)) throw ArgumentError("condition_a_monitor: requires e > b");
  if (x.dim() != y.dim()) throw ArgumentError("condition_a_monitor: dimension mismatch");
  const double n = static_cast<double>(x.dim());
  const double floor_value = std::pow(n, -b);
  return max_abs_difference(x, y) <= 2.0 * std::pow(n, -e) &&
         x.min_value() >= floor_value && y.min_value() >= floor_value;
}

CouplingReport second_stage(SimplexPoint& x, SimplexPoint& y, std::size_t steps,
                            const LambdaLaw& law, RandomStream& rng,
                            StageThresholds thresholds) {
  if (x.dim() != y.dim()) throw ArgumentError("second_stage: dimension mismatch");
  if (steps < 1) throw ArgumentError("second_stage: needs at least one step");
  const std::size_t n = x.dim();
  const double largeness_floor = std::pow(static_cast<double>(n), -thresholds.b);

  CouplingReport report;
  report.stage2_steps = steps;
  const EdgeSchedule schedule = EdgeSchedule::sample(n, steps, rng);
  const NestedPartitions parts = build_partitions(schedule);
  report.graph_connected = parts.connected();
  report.marked_times = parts.splits().size();
  report.min_coordinate_seen = std::min(x.min_value(), y.min_value());

  // Labels of P(s), relabelled as each marked time is passed.
  std::vector<std::size_t> labels = parts.labels_at(0);
  bool failed = false;

  for (std::size_t s = 1; s <= steps; ++s) {
    const auto [ei, ej] = schedule.edges[s - 1];
    const double lambda_y = law.sample(rng);
    const SplitEvent* split = parts.split_at(s);

    if (split != nullptr && !failed) {
      const double accept_u = rng.uniform01();
      ++report.subset_attempts;
      const SubsetOutcome outcome =
          subset_couple_into(x, y, split->small_end, split->large_end,
                             split->small_part, lambda_y, accept_u, law, rng);
      const auto sy = y.unit(split->small_end) + y.unit(split->large_end);
      y.redistribute(split->small_end, split->large_end, scale_units(sy, lambda_y));
      if (!outcome.success) {
        ++report.subset_failures;
        report.first_failure_time = s;
        failed = true;
      }
    } else {
      const StepDraw d{std::min(ei, ej), std::max(ei, ej), lambda_y};
      step_in_place(x, d);
      step_in_place(y, d);
    }

    if (split != nullptr) {
      const std::size_t fresh = split->small_part.front();
      for (std::size_t k : split->small_part) labels[k] = fresh;
      // The larger part may have lost its minimum to the smaller one.
      std::size_t large_min = n;
      const std::size_t old = labels[split->large_end];
      for (std::size_t k = 0; k < n; ++k) {
        if (labels[k] == old && k != fresh &&
            !std::binary_search(split->small_part.begin(), split->small_part.end(), k)) {
          large_min = std::min(large_min, k);
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (labels[k] == old &&
            !std::binary_search(split->small_part.begin(), split->small_part.end(), k)) {
          labels[k] = large_min;
        }
      }
      if (!failed) {
        report.max_weight_audit =
            std::max(report.max_weight_audit, weight_audit_labels(x, y, labels));
      }
    }

    if (!report.condition_a_violated_at &&
        !condition_a_monitor(x, y, thresholds.e, thresholds.b)) {
      report.condition_a_violated_at = s;
    }
    const double ymin = y.min_value();
    if (!report.largeness_violated_at && ymin < largeness_floor) {
      report.largeness_violated_at = s;
    }
    report.min_coordinate_seen = std::min({report.min_coordinate_seen, ymin, x.min_value()});
  }

  report.final_z = sq_distance(x, y);
  report.coalesced = report.graph_connected && report.subset_failures == 0;
  if (report.coalesced) {
    if (!(x == y)) {
      throw IntegrityError("second_stage: coupling succeeded but chains differ");
    }
    y = x;
  }
  return report;
}

// ---------------------------------------------------------------------------

CouplingReport coupling_replica(const ExperimentConfig& cfg, std::size_t replica) {
  RandomStream rng(derive_seed(cfg.seed, replica), 0, 0);
  const SimplexPoint y0 = sample_stationary(cfg.n, cfg.law, rng);
  const SimplexPoint x0 = cfg.start == StartKind::kVertex
                              ? SimplexPoint::vertex(cfg.n, 0)
                              : sample_stationary(cfg.n, cfg.law, rng);
  const std::size_t burn = cfg.burn_in_steps();
  BurnInResult warm = burn_in(x0, y0, burn, cfg.law, rng, cfg.trace_stride);
  const double burn_z = sq_distance(warm.x, warm.y);
  CouplingReport report = second_stage(warm.x, warm.y, cfg.stage_steps(), cfg.law,
                                       rng, StageThresholds{cfg.e, cfg.b});
  report.burn_in_steps = burn;
  report.burn_in_final_z = burn_z;
  report.z_trace = std::move(warm.z_trace);
  if (cfg.trace_stride > 0) report.z_trace.emplace_back(burn + report.stage2_steps, report.final_z);
  return report;
}

CouplingSummary full_coupling_run(const ExperimentConfig& cfg) {
  cfg.validate();
  auto reports = parallel_map(
      cfg.replicas, [&](std::size_t r) { return coupling_replica(cfg, r); }, cfg.threads);

  CouplingSummary s;
  s.config = cfg;
  s.burn_in_steps = cfg.burn_in_steps();
  s.stage_steps = cfg.stage_steps();
  s.replicas = cfg.replicas;
  double z_total = 0.0;
  for (const auto& r : reports) {
    if (r.coalesced) {
      ++s.coalesced;
      s.max_weight_audit_coalesced = std::max(s.max_weight_audit_coalesced, r.max_weight_audit);
    }
    if (!r.graph_connected) ++s.disconnected;
    s.subset_attempts += r.subset_attempts;
    s.subset_failures += r.subset_failures;
    if (r.condition_a_violated_at) ++s.condition_a_violations;
    if (r.largeness_violated_at) ++s.largeness_violations;
    s.min_coordinate_seen = std::min(s.min_coordinate_seen, r.min_coordinate_seen);
    z_total += r.burn_in_final_z;
  }
  s.frequency = static_cast<double>(s.coalesced) / static_cast<double>(s.replicas);
  const auto ci = stats::wilson(s.coalesced, s.replicas);
  s.wilson_lo = ci.lo;
  s.wilson_hi = ci.hi;
  s.theorem_bound = 1.0 - 8.0 * std::pow(static_cast<double>(cfg.n), -cfg.C);
  s.mean_burn_in_final_z = z_total / static_cast<double>(s.replicas);
  if (cfg.keep_reports) s.reports = std::move(reports);
  return s;
}

std::optional<std::size_t> coupling_time(std::size_t n, const LambdaLaw& law,
                                         std::uint64_t seed, std::size_t replica,
                                         double c_step, std::size_t max_levels) {
  if (n < 2) throw ArgumentError("coupling_time: n must be >= 2");
  if (!(c_step > 0.0)) throw ArgumentError("coupling_time: C step must be > 0");
  const std::uint64_t replica_seed = derive_seed(seed, replica);
  RandomStream rng(replica_seed, 0, 0);
  SimplexPoint x = SimplexPoint::vertex(n, 0);
  SimplexPoint y = sample_stationary(n, law, rng);
  std::size_t done = 0;
  for (std::size_t level = 1; level <= max_levels; ++level) {
    const double c = c_step * static_cast<double>(level);
    const std::size_t burn = ceil_steps(6.0 * c * n_log_n(n));
    for (; done < burn; ++done) {
      const StepDraw d = sample_step_draw(n, law, rng);
      step_in_place(x, d);
      step_in_place(y, d);
    }
    const std::size_t stage = std::max<std::size_t>(1, ceil_steps(c * n_log_n(n)));
    SimplexPoint xs = x;
    SimplexPoint ys = y;
    RandomStream attempt(replica_seed, 0, static_cast<std::uint32_t>(level));
    if (second_stage(xs, ys, stage, law, attempt).coalesced) return burn + stage;
  }
  return std::nullopt;
}

}  // namespace simplex_gibbs
