#include "simplex_gibbs/partitions.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "simplex_gibbs/errors.hpp"

namespace simplex_gibbs {

namespace {
constexpr std::size_t kUnmarked = std::numeric_limits<std::size_t>::max();
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t k) {
  while (parent_[k] != k) {
    parent_[k] = parent_[parent_[k]];
    k = parent_[k];
  }
  return k;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

void EdgeSchedule::validate() const {
  if (n < 2) throw ArgumentError("EdgeSchedule: dimension must be >= 2");
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) throw ArgumentError("EdgeSchedule: coordinate out of range");
    if (i == j) throw ArgumentError("EdgeSchedule: edge endpoints must differ");
  }
}

EdgeSchedule EdgeSchedule::sample(std::size_t n, std::size_t steps,
                                  RandomStream& rng) {
  if (n < 2) throw ArgumentError("EdgeSchedule: dimension must be >= 2");
  EdgeSchedule schedule{n, {}};
  schedule.edges.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    schedule.edges.emplace_back(std::min(i, j), std::max(i, j));
  }
  return schedule;
}

bool GraphState::add_edge(std::size_t a, std::size_t b) {
  edges_.emplace_back(a, b);
  return components_.unite(a, b);
}

// ---------------------------------------------------------------------------

NestedPartitions::NestedPartitions(std::size_t n, std::size_t horizon,
                                   std::vector<SplitEvent> splits)
    : n_(n), horizon_(horizon), splits_(std::move(splits)),
      split_index_(horizon + 1, kUnmarked) {
  for (std::size_t k = 0; k < splits_.size(); ++k) {
    split_index_.at(splits_[k].time) = k;
  }
}

std::vector<std::size_t> NestedPartitions::marked_times() const {
  std::vector<std::size_t> times;
  times.reserve(splits_.size());
  for (const auto& s : splits_) times.push_back(s.time);
  return times;
}

const SplitEvent* NestedPartitions::split_at(std::size_t t) const {
  if (t > horizon_ || split_index_[t] == kUnmarked) return nullptr;
  return &splits_[split_index_[t]];
}

std::vector<std::size_t> NestedPartitions::labels_at(std::size_t t) const {
  if (t > horizon_) throw ArgumentError("NestedPartitions: time out of range");
  UnionFind uf(n_);
  for (const auto& s : splits_) {
    if (s.time > t) uf.unite(s.small_end, s.large_end);
  }
  std::vector<std::size_t> root_min(n_, n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t r = uf.find(k);
    root_min[r] = std::min(root_min[r], k);
  }
  std::vector<std::size_t> labels(n_);
  for (std::size_t k = 0; k < n_; ++k) labels[k] = root_min[uf.find(k)];
  return labels;
}

std::vector<std::vector<std::size_t>> NestedPartitions::partition_at(
    std::size_t t) const {
  const auto labels = labels_at(t);
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> slot(n_, kUnmarked);
  for (std::size_t k = 0; k < n_; ++k) {
    // Labels are minimum elements, so parts appear in order of their minima.
    if (slot[labels[k]] == kUnmarked) {
      slot[labels[k]] = parts.size();
      parts.emplace_back();
    }
    parts[slot[labels[k]]].push_back(k);
  }
  return parts;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
NestedPartitions::split_parts(std::size_t t) const {
  const SplitEvent* split = split_at(t);
  if (split == nullptr) throw ArgumentError("NestedPartitions: time is not marked");
  const auto labels = labels_at(t - 1);
  std::vector<std::size_t> large;
  for (std::size_t k = 0; k < n_; ++k) {
    if (labels[k] == labels[split->small_end] &&
        !std::binary_search(split->small_part.begin(), split->small_part.end(), k)) {
      large.push_back(k);
    }
  }
  return {split->small_part, std::move(large)};
}

bool operator==(const NestedPartitions& a, const NestedPartitions& b) {
  if (a.n_ != b.n_ || a.horizon_ != b.horizon_ || a.splits_.size() != b.splits_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.splits_.size(); ++k) {
    const auto& x = a.splits_[k];
    const auto& y = b.splits_[k];
    if (x.time != y.time || x.small_end != y.small_end ||
        x.large_end != y.large_end || x.small_part != y.small_part ||
        x.large_size != y.large_size) {
      return false;
    }
  }
  return true;
}

NestedPartitions build_partitions(const EdgeSchedule& schedule) {
  schedule.validate();
  const std::size_t n = schedule.n;
  const std::size_t horizon = schedule.horizon();

  UnionFind uf(n);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t k = 0; k < n; ++k) members[k] = {k};

  std::vector<SplitEvent> splits;
  for (std::size_t s = horizon; s >= 1; --s) {
    auto [i, j] = schedule.edges[s - 1];
    const std::size_t ri = uf.find(i);
    const std::size_t rj = uf.find(j);
    if (ri == rj) continue;
    auto& mi = members[ri];
    auto& mj = members[rj];
    // Member lists are kept sorted, so front() is the minimum.
    const bool i_small = mi.size() < mj.size() ||
                         (mi.size() == mj.size() && mi.front() < mj.front());
    SplitEvent split;
    split.time = s;
    split.small_end = i_small ? i : j;
    split.large_end = i_small ? j : i;
    split.small_part = i_small ? mi : mj;
    split.large_size = i_small ? mj.size() : mi.size();
    splits.push_back(std::move(split));

    std::vector<std::size_t> merged;
    merged.reserve(mi.size() + mj.size());
    std::merge(mi.begin(), mi.end(), mj.begin(), mj.end(), std::back_inserter(merged));
    mi.clear();
    mj.clear();
    uf.unite(ri, rj);
    members[uf.find(ri)] = std::move(merged);
  }
  std::reverse(splits.begin(), splits.end());
  return NestedPartitions(n, horizon, std::move(splits));
}

bool is_connected(const EdgeSchedule& schedule) {
  schedule.validate();
  UnionFind uf(schedule.n);
  for (const auto& [i, j] : schedule.edges) uf.unite(i, j);
  return uf.components() == 1;
}

double connectedness_frequency(std::size_t n, std::size_t steps,
                               std::size_t trials, RandomStream& rng) {
  if (trials < 1) throw ArgumentError("connectedness_frequency: trials must be >= 1");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    if (is_connected(EdgeSchedule::sample(n, steps, rng))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double product_bound_check(const NestedPartitions& p) {
  // Replay the merges backwards; every member of a merged part picks up the
  // split's factor.
  const std::size_t n = p.dim();
  UnionFind uf(n);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t k = 0; k < n; ++k) members[k] = {k};
  std::vector<double> product(n, 1.0);
  const auto& splits = p.splits();
  for (auto it = splits.rbegin(); it != splits.rend(); ++it) {
    const double factor = 1.0 + static_cast<double>(it->small_part.size()) /
                                    static_cast<double>(it->parent_size());
    const std::size_t ra = uf.find(it->small_end);
    const std::size_t rb = uf.find(it->large_end);
    auto merged = std::move(members[ra]);
    merged.insert(merged.end(), members[rb].begin(), members[rb].end());
    members[rb].clear();
    for (std::size_t k : merged) product[k] *= factor;
    uf.unite(ra, rb);
    members[uf.find(ra)] = std::move(merged);
  }
  return *std::max_element(product.begin(), product.end());
}

double total_split_product(const NestedPartitions& p) {
  double product = 1.0;
  for (const auto& s : p.splits()) {
    product *= 1.0 + static_cast<double>(s.small_part.size()) /
                         static_cast<double>(s.parent_size());
  }
  return product;
}

}  // namespace simplex_gibbs
