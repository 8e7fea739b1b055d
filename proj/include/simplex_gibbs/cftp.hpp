#pragma once

// Perfect sampling from the uniform law on the simplex by coupling from the
// past.
//
// Time runs over negative integers ending at 0. Everything drawn at time t
// comes from RandomStream(seed, t, purpose), so any rerun that covers t sees
// the same pair, lambda and acceptance uniform:
//   purpose 0: step draw (pair, lambda) then the acceptance uniform
//   purpose 1: remainder draws of the tracked vertex chains
//   purpose 2: remainder draws when a value is propagated through an epoch
//
// Epoch 0 covers [-L, 0) and epoch k >= 1 covers [-2^k L, -2^(k-1) L), where
// L = T1 + T2. Each epoch ends with a phase 2 of T2 steps; the rest is
// phase 1 (proportional coupling only).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "simplex_gibbs/chain.hpp"
#include "simplex_gibbs/couplings.hpp"
#include "simplex_gibbs/random.hpp"

namespace simplex_gibbs {

// Column-stochastic map: column j is the image of vertex e_j, so the image
// of v is M v.
class TransitionMatrix {
 public:
  static TransitionMatrix identity(std::size_t n);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t row, std::size_t col) const {
    return entries_[row * n_ + col];
  }
  std::vector<double> column(std::size_t j) const;
  std::vector<double> apply(const std::vector<double>& v) const;
  // max over columns of |column sum - 1|.
  double column_sum_error() const;

  void evolve(const StepDraw& d);

 private:
  explicit TransitionMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}
  std::size_t n_;
  std::vector<double> entries_;
};

// (lambda s, s - lambda s): the second half is exact whenever
// lambda s >= s / 2 and close to exact otherwise.
std::pair<double, double> split_pair(double s, double lambda);

TransitionMatrix evolve_matrix(const TransitionMatrix& m, const StepDraw& d);

// max over column pairs of the L1 distance. Dominates the L1 diameter of the
// image of the simplex.
double l1_diameter_bound(const TransitionMatrix& m);
// (1 - 1/n) sum_{j,k} |col_j - col_k|_1, reported alongside.
double l1_summed_bound(const TransitionMatrix& m);

// Randomness of one CFTP time step.
struct TimeDraw {
  StepDraw draw;
  double accept_u = 0.0;
};
TimeDraw draw_at(std::uint64_t seed, std::int64_t t, std::size_t n,
                 const LambdaLaw& law);

struct CftpConfig {
  std::size_t n = 5;
  LambdaLaw law = LambdaLaw::uniform();
  std::uint64_t seed = 1;
  std::size_t phase1_steps = 0;  // T1
  std::size_t phase2_steps = 0;  // T2
  std::size_t max_doublings = 20;

  // T1 = ceil(1.5 * 8 * n ln n), T2 = ceil(2 n ln n).
  static CftpConfig defaults(std::size_t n, const LambdaLaw& law, std::uint64_t seed);
  void validate() const;
  std::size_t base_length() const { return phase1_steps + phase2_steps; }
};

struct EpochWindow {
  int epoch_index = 0;
  std::int64_t start_time = 0;   // inclusive
  std::int64_t end_time = 0;     // exclusive
  std::int64_t phase2_start = 0;
};
EpochWindow epoch_window(const CftpConfig& cfg, int epoch_index);

struct EpochFailure {
  std::int64_t time = 0;
  std::size_t chain = 0;  // tracked vertex chain that failed
  double m = 0.0;
  double delta = 0.0;
  RemainderLaw remainder;
};

struct EpochRecord {
  EpochWindow window;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  LambdaLaw law = LambdaLaw::uniform();
  bool coalesced = false;
  bool graph_connected = false;
  std::size_t marked_times = 0;
  std::size_t subset_attempts = 0;
  std::optional<EpochFailure> failure;
  double phase1_diameter = 0.0;
  double phase1_summed_bound = 0.0;
  SimplexPoint center_start = SimplexPoint::center(2);
  SimplexPoint center_end = SimplexPoint::center(2);
  std::vector<SimplexPoint> vertex_end;

  friend bool operator==(const EpochRecord& a, const EpochRecord& b);
};

// Runs one epoch: phase 1 moves the n vertex chains, the center chain and
// the transition matrix by proportional steps; phase 2 couples every vertex
// chain to the center chain at marked times (shared lambda and acceptance
// uniform). The first failure switches the rest of the epoch to proportional
// steps.
EpochRecord run_epoch(const CftpConfig& cfg, int epoch_index);
// Same with an explicit window.
EpochRecord run_epoch_window(std::size_t n, const LambdaLaw& law,
                             std::uint64_t seed, const EpochWindow& window);

// Pushes `value` through the recorded epoch with the epoch's own randomness.
// Throws IntegrityError when the replayed center chain does not end where
// the record says.
SimplexPoint propagate_through_epoch(const SimplexPoint& value, const EpochRecord& rec);

struct CftpResult {
  SimplexPoint point = SimplexPoint::center(2);
  std::size_t epochs = 0;          // epochs run, including the coalesced one
  std::size_t steps = 0;           // total time steps covered
  std::vector<EpochRecord> records;
};

// Throws TerminationError when no epoch up to max_doublings coalesces.
CftpResult cftp_detailed(const CftpConfig& cfg);
SimplexPoint cftp(std::size_t n, const LambdaLaw& law, std::uint64_t seed);

}  // namespace simplex_gibbs
