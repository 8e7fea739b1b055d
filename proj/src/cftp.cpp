#include "simplex_gibbs/cftp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/partitions.hpp"

namespace simplex_gibbs {

namespace {

constexpr std::uint32_t kDrawPurpose = 0;
constexpr std::uint32_t kVertexRemainderPurpose = 1;
constexpr std::uint32_t kValueRemainderPurpose = 2;

std::uint64_t time_stream(std::int64_t t) { return static_cast<std::uint64_t>(t); }

double column_l1(const TransitionMatrix& m, std::size_t j, std::size_t k) {
  double total = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r) total += std::abs(m(r, j) - m(r, k));
  return total;
}

void check_window(const EpochWindow& w) {
  if (!(w.start_time <= w.phase2_start && w.phase2_start < w.end_time)) {
    throw ArgumentError("epoch window: need start <= phase2 start < end");
  }
}

EdgeSchedule phase2_schedule(std::size_t n, const LambdaLaw& law, std::uint64_t seed,
                             const EpochWindow& w, std::vector<TimeDraw>& draws) {
  EdgeSchedule schedule{n, {}};
  for (std::int64_t t = w.phase2_start; t < w.end_time; ++t) {
    draws.push_back(draw_at(seed, t, n, law));
    schedule.edges.emplace_back(draws.back().draw.i, draws.back().draw.j);
  }
  return schedule;
}

}  // namespace

// ---------------------------------------------------------------------------
// TransitionMatrix

TransitionMatrix TransitionMatrix::identity(std::size_t n) {
  if (n < 2) throw ArgumentError("TransitionMatrix: dimension must be >= 2");
  TransitionMatrix m(n);
  for (std::size_t k = 0; k < n; ++k) m.entries_[k * n + k] = 1.0;
  return m;
}

std::vector<double> TransitionMatrix::column(std::size_t j) const {
  if (j >= n_) throw ArgumentError("TransitionMatrix: column out of range");
  std::vector<double> c(n_);
  for (std::size_t r = 0; r < n_; ++r) c[r] = (*this)(r, j);
  return c;
}

std::vector<double> TransitionMatrix::apply(const std::vector<double>& v) const {
  if (v.size() != n_) throw ArgumentError("TransitionMatrix: dimension mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < n_; ++c) total += entries_[r * n_ + c] * v[c];
    out[r] = total;
  }
  return out;
}

double TransitionMatrix::column_sum_error() const {
  double worst = 0.0;
  for (std::size_t c = 0; c < n_; ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < n_; ++r) total += (*this)(r, c);
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

void TransitionMatrix::evolve(const StepDraw& d) {
  d.validate(n_);
  double* row_i = &entries_[d.i * n_];
  double* row_j = &entries_[d.j * n_];
  for (std::size_t c = 0; c < n_; ++c) {
    const auto [a, b] = split_pair(row_i[c] + row_j[c], d.lambda);
    row_i[c] = a;
    row_j[c] = b;
  }
}

std::pair<double, double> split_pair(double s, double lambda) {
  const double a = lambda * s;
  return {a, s - a};
}

TransitionMatrix evolve_matrix(const TransitionMatrix& m, const StepDraw& d) {
  TransitionMatrix out = m;
  out.evolve(d);
  return out;
}

double l1_diameter_bound(const TransitionMatrix& m) {
  double worst = 0.0;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    for (std::size_t k = j + 1; k < m.dim(); ++k) worst = std::max(worst, column_l1(m, j, k));
  }
  return worst;
}

double l1_summed_bound(const TransitionMatrix& m) {
  double total = 0.0;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    for (std::size_t k = 0; k < m.dim(); ++k) total += column_l1(m, j, k);
  }
  return (1.0 - 1.0 / static_cast<double>(m.dim())) * total;
}

TimeDraw draw_at(std::uint64_t seed, std::int64_t t, std::size_t n,
                 const LambdaLaw& law) {
  RandomStream rng(seed, time_stream(t), kDrawPurpose);
  TimeDraw out;
  out.draw = sample_step_draw(n, law, rng);
  out.accept_u = rng.uniform01();
  return out;
}

// ---------------------------------------------------------------------------
// Configuration and windows

CftpConfig CftpConfig::defaults(std::size_t n, const LambdaLaw& law, std::uint64_t seed) {
  if (n < 2) throw ArgumentError("cftp: n must be >= 2");
  const double nl = static_cast<double>(n) * std::log(static_cast<double>(n));
  CftpConfig cfg;
  cfg.n = n;
  cfg.law = law;
  cfg.seed = seed;
  cfg.phase1_steps = static_cast<std::size_t>(std::ceil(1.5 * 8.0 * nl));
  cfg.phase2_steps = static_cast<std::size_t>(std::ceil(2.0 * nl));
  return cfg;
}

void CftpConfig::validate() const {
  if (n < 2) throw ArgumentError("cftp: n must be >= 2");
  if (phase1_steps < 1 || phase2_steps < 1) {
    throw ArgumentError("cftp: both phases need at least one step");
  }
  if (max_doublings > 40) throw ArgumentError("cftp: at most 40 doublings");
}

EpochWindow epoch_window(const CftpConfig& cfg, int epoch_index) {
  if (epoch_index < 0) throw ArgumentError("epoch_window: negative epoch index");
  const auto base = static_cast<std::int64_t>(cfg.base_length());
  EpochWindow w;
  w.epoch_index = epoch_index;
  if (epoch_index == 0) {
    w.start_time = -base;
    w.end_time = 0;
  } else {
    w.end_time = -(base << (epoch_index - 1));
    w.start_time = -(base << epoch_index);
  }
  w.phase2_start = w.end_time - static_cast<std::int64_t>(cfg.phase2_steps);
  return w;
}

bool operator==(const EpochRecord& a, const EpochRecord& b) {
  auto same_failure = [](const std::optional<EpochFailure>& x,
                         const std::optional<EpochFailure>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    if (x->time != y->time || x->chain != y->chain || x->m != y->m ||
        x->delta != y->delta || x->remainder.pieces.size() != y->remainder.pieces.size()) {
      return false;
    }
    for (std::size_t k = 0; k < x->remainder.pieces.size(); ++k) {
      const auto& p = x->remainder.pieces[k];
      const auto& q = y->remainder.pieces[k];
      if (p.lo != q.lo || p.hi != q.hi || p.density != q.density) return false;
    }
    return true;
  };
  return a.window.epoch_index == b.window.epoch_index &&
         a.window.start_time == b.window.start_time &&
         a.window.end_time == b.window.end_time &&
         a.window.phase2_start == b.window.phase2_start && a.seed == b.seed &&
         a.n == b.n && a.law == b.law && a.coalesced == b.coalesced &&
         a.graph_connected == b.graph_connected && a.marked_times == b.marked_times &&
         a.subset_attempts == b.subset_attempts && same_failure(a.failure, b.failure) &&
         a.phase1_diameter == b.phase1_diameter &&
         a.phase1_summed_bound == b.phase1_summed_bound &&
         a.center_start == b.center_start && a.center_end == b.center_end &&
         a.vertex_end == b.vertex_end;
}

// ---------------------------------------------------------------------------
// Epochs

EpochRecord run_epoch(const CftpConfig& cfg, int epoch_index) {
  cfg.validate();
  return run_epoch_window(cfg.n, cfg.law, cfg.seed, epoch_window(cfg, epoch_index));
}

EpochRecord run_epoch_window(std::size_t n, const LambdaLaw& law,
                             std::uint64_t seed, const EpochWindow& window) {
  if (n < 2) throw ArgumentError("run_epoch: n must be >= 2");
  check_window(window);
  EpochRecord rec;
  rec.window = window;
  rec.seed = seed;
  rec.n = n;
  rec.law = law;
  rec.center_start = SimplexPoint::center(n);

  SimplexPoint center = rec.center_start;
  std::vector<SimplexPoint> chains;
  chains.reserve(n);
  for (std::size_t k = 0; k < n; ++k) chains.push_back(SimplexPoint::vertex(n, k));
  TransitionMatrix matrix = TransitionMatrix::identity(n);

  for (std::int64_t t = window.start_time; t < window.phase2_start; ++t) {
    const StepDraw d = draw_at(seed, t, n, law).draw;
    step_in_place(center, d);
    for (auto& c : chains) step_in_place(c, d);
    matrix.evolve(d);
  }
  rec.phase1_diameter = l1_diameter_bound(matrix);
  rec.phase1_summed_bound = l1_summed_bound(matrix);

  std::vector<TimeDraw> draws;
  const EdgeSchedule schedule = phase2_schedule(n, law, seed, window, draws);
  const NestedPartitions parts = build_partitions(schedule);
  rec.graph_connected = parts.connected();
  rec.marked_times = parts.splits().size();

  bool failed = false;
  for (std::size_t s = 1; s <= draws.size(); ++s) {
    const std::int64_t t = window.phase2_start + static_cast<std::int64_t>(s) - 1;
    const TimeDraw& td = draws[s - 1];
    const SplitEvent* split = parts.split_at(s);
    if (split != nullptr && !failed) {
      ++rec.subset_attempts;
      RandomStream remainder_rng(seed, time_stream(t), kVertexRemainderPurpose);
      for (std::size_t k = 0; k < n; ++k) {
        const SubsetOutcome out = subset_couple_into(
            chains[k], center, split->small_end, split->large_end, split->small_part,
            td.draw.lambda, td.accept_u, law, remainder_rng);
        if (!out.success && !rec.failure) {
          rec.failure = EpochFailure{t, k, out.m, out.delta, out.remainder};
        }
      }
      const auto sc = center.unit(split->small_end) + center.unit(split->large_end);
      center.redistribute(split->small_end, split->large_end,
                          scale_units(sc, td.draw.lambda));
      failed = rec.failure.has_value();
    } else {
      step_in_place(center, td.draw);
      for (auto& c : chains) step_in_place(c, td.draw);
    }
  }

  rec.coalesced = rec.graph_connected && !rec.failure;
  if (rec.coalesced) {
    for (const auto& c : chains) {
      if (!(c == center)) throw IntegrityError("run_epoch: coalesced chains differ");
    }
  }
  rec.center_end = center;
  rec.vertex_end = std::move(chains);
  return rec;
}

SimplexPoint propagate_through_epoch(const SimplexPoint& value, const EpochRecord& rec) {
  if (value.dim() != rec.n) throw ArgumentError("propagate: dimension mismatch");
  check_window(rec.window);
  if (!(rec.center_start == SimplexPoint::center(rec.n))) {
    throw IntegrityError("propagate: record's center start is not the center");
  }
  const std::size_t n = rec.n;
  const EpochWindow& w = rec.window;
  SimplexPoint center = rec.center_start;
  SimplexPoint x = value;

  for (std::int64_t t = w.start_time; t < w.phase2_start; ++t) {
    const StepDraw d = draw_at(rec.seed, t, n, rec.law).draw;
    step_in_place(center, d);
    step_in_place(x, d);
  }

  std::vector<TimeDraw> draws;
  const EdgeSchedule schedule = phase2_schedule(n, rec.law, rec.seed, w, draws);
  const NestedPartitions parts = build_partitions(schedule);
  if (parts.connected() != rec.graph_connected ||
      parts.splits().size() != rec.marked_times) {
    throw IntegrityError("propagate: replayed partitions differ from the record");
  }
  const std::int64_t switch_time =
      rec.failure ? rec.failure->time : std::numeric_limits<std::int64_t>::max();

  for (std::size_t s = 1; s <= draws.size(); ++s) {
    const std::int64_t t = w.phase2_start + static_cast<std::int64_t>(s) - 1;
    const TimeDraw& td = draws[s - 1];
    const SplitEvent* split = parts.split_at(s);
    if (split != nullptr && t <= switch_time) {
      RandomStream remainder_rng(rec.seed, time_stream(t), kValueRemainderPurpose);
      subset_couple_into(x, center, split->small_end, split->large_end,
                         split->small_part, td.draw.lambda, td.accept_u, rec.law,
                         remainder_rng);
      const auto sc = center.unit(split->small_end) + center.unit(split->large_end);
      center.redistribute(split->small_end, split->large_end,
                          scale_units(sc, td.draw.lambda));
    } else {
      step_in_place(center, td.draw);
      step_in_place(x, td.draw);
    }
  }
  if (!(center == rec.center_end)) {
    throw IntegrityError("propagate: replayed center chain does not match the record");
  }
  return x;
}

CftpResult cftp_detailed(const CftpConfig& cfg) {
  cfg.validate();
  CftpResult result;
  for (std::size_t k = 0; k <= cfg.max_doublings; ++k) {
    result.records.push_back(run_epoch(cfg, static_cast<int>(k)));
    const EpochRecord& rec = result.records.back();
    result.epochs = k + 1;
    result.steps += static_cast<std::size_t>(rec.window.end_time - rec.window.start_time);
    if (!rec.coalesced) continue;
    SimplexPoint value = rec.center_end;
    for (std::size_t j = k; j-- > 0;) {
      value = propagate_through_epoch(value, result.records[j]);
    }
    result.point = std::move(value);
    return result;
  }
  throw TerminationError("cftp: no coalescence within " +
                         std::to_string(cfg.max_doublings) + " doublings (n=" +
                         std::to_string(cfg.n) + ", seed=" + std::to_string(cfg.seed) +
                         ", epochs=" + std::to_string(result.epochs) +
                         ", steps=" + std::to_string(result.steps) + ")");
}

SimplexPoint cftp(std::size_t n, const LambdaLaw& law, std::uint64_t seed) {
  return cftp_detailed(CftpConfig::defaults(n, law, seed)).point;
}

}  // namespace simplex_gibbs
