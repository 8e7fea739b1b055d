#pragma once

// Seeded experiments behind the command-line driver. Each returns a summary
// with its parameters, statistics and pass/fail claims; optional sinks
// receive per-replica records and CSV traces.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "simplex_gibbs/chain.hpp"
#include "simplex_gibbs/json_io.hpp"
#include "simplex_gibbs/two_stage.hpp"

namespace simplex_gibbs {

struct Claim {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  // One of "<=", ">=", "<", ">", "in" (value within [threshold, upper]).
  std::string comparison;
  double upper = 0.0;
  std::size_t sample_size = 0;
  bool pass = false;
};

Claim make_claim(std::string name, double value, std::string comparison,
                 double threshold, std::size_t sample_size, double upper = 0.0);

struct SummaryReport {
  std::string command;
  std::uint64_t seed = 0;
  Json parameters = Json::object();
  Json statistics = Json::object();
  std::vector<Claim> claims;
  double wall_seconds = 0.0;
  std::uint64_t steps = 0;

  bool all_pass() const;
  Json to_json() const;
};

// Receives one JSON object per replica / epoch.
using RecordSink = std::function<void(const Json&)>;
// Receives (replica, t, value) rows.
using TraceSink = std::function<void(std::size_t, std::size_t, double)>;

// Directed-pair collector from (1, 0, ..., 0): each step draws an ordered
// pair (i, j) uniformly from [n]^2; j becomes collected when i is collected
// and j is not. Returns the number of steps to collect all n coordinates.
std::uint64_t directed_collection_time(std::size_t n, RandomStream& rng);
// Same collection rule driven by the chain's own unordered pair draws.
std::uint64_t chain_collection_time(std::size_t n, RandomStream& rng);
// n + n^2 sum_{j=2}^{n-1} 1 / (j (n - j)).
double lower_bound_formula(std::size_t n);
// (n - 1) H_{n-1}: exact mean of chain_collection_time.
double chain_collection_mean(std::size_t n);

SummaryReport run_lower_bound(std::size_t n, std::size_t trials, std::uint64_t seed);

SummaryReport run_contraction(std::size_t n, std::size_t replicas, std::uint64_t seed,
                              const LambdaLaw& law = LambdaLaw::uniform());

// steps defaults to ceil((0.5 + epsilon) n ln n).
SummaryReport run_connectivity(std::size_t n, double epsilon, std::size_t trials,
                               std::uint64_t seed,
                               std::optional<std::size_t> steps = std::nullopt);

struct CoupleOptions {
  // Also run the stationary-start control and compare with a two-sample test.
  bool stationary_control = false;
  // Replicas for the coupling-time scan (0 skips it).
  std::size_t scan_replicas = 0;
};
SummaryReport run_couple(const ExperimentConfig& cfg, const CoupleOptions& options = {},
                         const RecordSink& records = {}, const TraceSink& traces = {});

SummaryReport run_cftp(std::size_t n, std::size_t samples, std::uint64_t seed,
                       const LambdaLaw& law = LambdaLaw::uniform(),
                       const RecordSink& records = {});

SummaryReport run_discrete(std::size_t n, std::uint64_t balls, std::size_t steps,
                           std::size_t replicas, std::uint64_t seed,
                           const TraceSink& traces = {});

// Single chain from the vertex e_1 for `steps` steps; compares the
// coordinate marginals with Beta(1, n - 1).
SummaryReport run_simulate(std::size_t n, std::size_t steps, std::size_t replicas,
                           std::uint64_t seed, const LambdaLaw& law = LambdaLaw::uniform(),
                           const TraceSink& traces = {});

// One-coordinate marginal of the stationary law. A symmetric Beta(a, a)
// update leaves Dirichlet(a, ..., a) invariant, so the marginal is
// Beta(a, (n - 1) a); a = 1 (the uniform law) gives Beta(1, n - 1).
double simplex_marginal_cdf(std::size_t n, double x, double a = 1.0);
double stationary_shape(const LambdaLaw& law);

}  // namespace simplex_gibbs
