#pragma once

// Two-stage coupling: proportional burn-in, then a second stage driven by a
// pre-drawn edge schedule with subset couplings at the marked times of its
// reversed partitions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simplex_gibbs/chain.hpp"
#include "simplex_gibbs/partitions.hpp"
#include "simplex_gibbs/random.hpp"

namespace simplex_gibbs {

// How burn-in and second-stage lengths are derived from the config.
//   operational: burn-in ceil(6 C n ln n), stage ceil(C n ln n)
//   theorem:     burn-in ceil(6 (C + 6.5) n ln n), stage ceil((C + 6.5) n ln n)
//   exponents:   burn-in ceil(1.5 d n ln n), stage ceil((0.5 + epsilon) n ln n)
enum class StageSchedule { kOperational, kTheorem, kExponents };

enum class StartKind { kVertex, kUniform };

StageSchedule parse_stage_schedule(const std::string& text);
std::string to_string(StageSchedule s);

struct ExperimentConfig {
  std::size_t n = 16;
  double C = 1.0;
  double d = 14.0;
  double e = 6.5;
  double b = 4.5;
  double epsilon = 0.5;
  LambdaLaw law = LambdaLaw::uniform();
  std::uint64_t seed = 1;
  std::size_t replicas = 1000;
  StageSchedule schedule = StageSchedule::kOperational;
  StartKind start = StartKind::kVertex;
  std::optional<std::size_t> burn_in_override;
  std::optional<std::size_t> stage_override;
  // Record Z_t every `trace_stride` steps (0 disables traces).
  std::size_t trace_stride = 0;
  bool keep_reports = false;
  std::size_t threads = 0;

  void validate() const;
  std::size_t burn_in_steps() const;
  std::size_t stage_steps() const;
};

struct CouplingReport {
  bool coalesced = false;
  std::size_t burn_in_steps = 0;
  std::size_t stage2_steps = 0;
  std::vector<std::pair<std::size_t, double>> z_trace;
  std::size_t subset_attempts = 0;
  std::size_t subset_failures = 0;
  std::optional<std::size_t> first_failure_time;
  std::optional<std::size_t> condition_a_violated_at;
  std::optional<std::size_t> largeness_violated_at;
  double min_coordinate_seen = 1.0;
  bool graph_connected = false;
  std::size_t marked_times = 0;
  // Largest |w(S,x) - w(S,y)| over parts of P(t), checked at marked times
  // up to the first failure.
  double max_weight_audit = 0.0;
  double final_z = 0.0;
  double burn_in_final_z = 0.0;
};

struct BurnInResult {
  SimplexPoint x;
  SimplexPoint y;
  std::vector<std::pair<std::size_t, double>> z_trace;
};

// `steps` proportional-coupling steps. Z_t = |x_t - y_t|^2 is recorded at
// t = 0, stride, 2 stride, ... and at the final step when trace_stride > 0.
BurnInResult burn_in(const SimplexPoint& x0, const SimplexPoint& y0,
                     std::size_t steps, const LambdaLaw& law, RandomStream& rng,
                     std::size_t trace_stride = 1);

// ceil(1.5 d n ln n); requires d > 0.
std::size_t default_burn_in_steps(std::size_t n, double d);

// One-step factor E[Z_1] / Z_0 of the proportional coupling:
// 1 - 2/n + 4 E[lambda^2] (n - 2) / (n (n - 1)). For the uniform law
// (E[lambda^2] = 1/3) this is 1 - 2/(3(n-1)) - 2/(3n(n-1)).
double contraction_factor(std::size_t n, double second_moment = 1.0 / 3.0);

struct StageThresholds {
  double e = 6.5;
  double b = 4.5;
};

// Runs the second stage on (x, y) in place. When the run coalesces, x and y
// are bit-identical at exit.
CouplingReport second_stage(SimplexPoint& x, SimplexPoint& y, std::size_t steps,
                            const LambdaLaw& law, RandomStream& rng,
                            StageThresholds thresholds = {});

// max over parts S of P(t) of |w(S, x) - w(S, y)|.
double weight_audit(const SimplexPoint& x, const SimplexPoint& y,
                    const NestedPartitions& p, std::size_t t);
// Same, with the part labels of P(t) already at hand.
double weight_audit_labels(const SimplexPoint& x, const SimplexPoint& y,
                           const std::vector<std::size_t>& labels);

// sup |x - y| <= 2 n^-e and min x, min y >= n^-b. Requires e > b.
bool condition_a_monitor(const SimplexPoint& x, const SimplexPoint& y, double e,
                         double b);

struct CouplingSummary {
  ExperimentConfig config;
  std::size_t burn_in_steps = 0;
  std::size_t stage_steps = 0;
  std::size_t replicas = 0;
  std::size_t coalesced = 0;
  double frequency = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double theorem_bound = 0.0;  // 1 - 8 n^-C
  std::size_t disconnected = 0;
  std::size_t subset_attempts = 0;
  std::size_t subset_failures = 0;
  std::size_t condition_a_violations = 0;
  std::size_t largeness_violations = 0;
  double min_coordinate_seen = 1.0;
  double max_weight_audit_coalesced = 0.0;
  double mean_burn_in_final_z = 0.0;
  std::vector<CouplingReport> reports;  // filled when config.keep_reports
};

// Replica r uses RandomStream(derive_seed(seed, r), 0, 0).
CouplingReport coupling_replica(const ExperimentConfig& cfg, std::size_t replica);
CouplingSummary full_coupling_run(const ExperimentConfig& cfg);

// Smallest total time B + T at which a full two-stage coupling from
// (vertex e_1, uniform) coalesces, scanning C over step, 2 step, ...: the
// proportional burn-in is extended to ceil(6 C n ln n) and a second stage of
// ceil(C n ln n) is attempted on a copy of the pair. nullopt when no level up
// to max_levels coalesces.
std::optional<std::size_t> coupling_time(std::size_t n, const LambdaLaw& law,
                                         std::uint64_t seed, std::size_t replica,
                                         double c_step = 0.05,
                                         std::size_t max_levels = 400);

}  // namespace simplex_gibbs
