#pragma once

// Reverse-time nested partitions built from an edge schedule.
//
// Time convention: edge s (1 <= s <= T) is the pair updated at forward time
// s. Walking backwards from P(T) = singletons, P(s-1) is P(s) with the parts
// containing the endpoints of edge s merged. When that merge joins two
// distinct parts, s is a marked time: forward step s splits the part
// p(s) of P(s-1) into S(s,1) and S(s,2), with |S(s,1)| <= |S(s,2)| and ties
// going to the part with the smaller minimum element.

#include <cstddef>
#include <utility>
#include <vector>

#include "simplex_gibbs/random.hpp"

namespace simplex_gibbs {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t k);
  // Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const { return components_; }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::size_t components_;
};

struct EdgeSchedule {
  std::size_t n = 0;
  // edges[s - 1] is the pair at time s.
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t horizon() const { return edges.size(); }
  void validate() const;
  // T pairs, each uniform over the n(n-1)/2 unordered pairs.
  static EdgeSchedule sample(std::size_t n, std::size_t steps, RandomStream& rng);
};

// Graph G_t on [n] grown edge by edge.
class GraphState {
 public:
  explicit GraphState(std::size_t n) : components_(n) {}
  bool add_edge(std::size_t a, std::size_t b);
  std::size_t components() const { return components_.components(); }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }

 private:
  UnionFind components_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

struct SplitEvent {
  std::size_t time = 0;
  // Edge endpoints oriented so that small_end is in S(t,1), large_end in
  // S(t,2).
  std::size_t small_end = 0;
  std::size_t large_end = 0;
  std::vector<std::size_t> small_part;  // S(t,1), sorted
  std::size_t large_size = 0;           // |S(t,2)|

  std::size_t parent_size() const { return small_part.size() + large_size; }
};

class NestedPartitions {
 public:
  NestedPartitions(std::size_t n, std::size_t horizon, std::vector<SplitEvent> splits);

  std::size_t dim() const { return n_; }
  std::size_t horizon() const { return horizon_; }
  // Ascending in time; at most n - 1 of them.
  const std::vector<SplitEvent>& splits() const { return splits_; }
  std::vector<std::size_t> marked_times() const;
  // nullptr when t is not marked.
  const SplitEvent* split_at(std::size_t t) const;
  // P(0) == {[n]}.
  bool connected() const { return splits_.size() + 1 == n_; }

  // P(t) materialized: parts sorted internally and by minimum element.
  std::vector<std::vector<std::size_t>> partition_at(std::size_t t) const;
  // Part label (minimum element of the part) of every coordinate in P(t).
  std::vector<std::size_t> labels_at(std::size_t t) const;
  // (S(t,1), S(t,2)) for a marked time t.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_parts(
      std::size_t t) const;

  friend bool operator==(const NestedPartitions& a, const NestedPartitions& b);

 private:
  std::size_t n_;
  std::size_t horizon_;
  std::vector<SplitEvent> splits_;
  std::vector<std::size_t> split_index_;  // per time, index into splits_ or npos
};

NestedPartitions build_partitions(const EdgeSchedule& schedule);

bool is_connected(const EdgeSchedule& schedule);

// Fraction of `trials` uniformly drawn schedules of length `steps` whose
// graph is connected.
double connectedness_frequency(std::size_t n, std::size_t steps,
                               std::size_t trials, RandomStream& rng);

// max over coordinates i of prod_{s marked, i in p(s)} (1 + |S(s,1)| / |p(s)|),
// the per-index product whose 2n bound drives the distance estimate of the
// second coupling stage.
double product_bound_check(const NestedPartitions& p);

// prod over all marked times of (1 + |S(s,1)| / |p(s)|). Unlike the
// per-index product this is not bounded by 2n (e.g. balanced merges).
double total_split_product(const NestedPartitions& p);

}  // namespace simplex_gibbs
