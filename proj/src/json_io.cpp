#include "simplex_gibbs/json_io.hpp"

#include "simplex_gibbs/errors.hpp"

namespace simplex_gibbs {

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json one_based(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (std::size_t k : v) out.push_back(k + 1);
  return out;
}

}  // namespace

Json schedule_to_json(const EdgeSchedule& s) {
  Json edges = Json::array();
  for (const auto& [i, j] : s.edges) edges.push_back({i + 1, j + 1});
  return Json{{"n", s.n}, {"edges", std::move(edges)}};
}

EdgeSchedule schedule_from_json(const Json& j) {
  try {
    EdgeSchedule s;
    s.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ArgumentError("schedule: edges are pairs");
      const auto a = e[0].get<std::int64_t>();
      const auto b = e[1].get<std::int64_t>();
      if (a < 1 || b < 1) throw ArgumentError("schedule: coordinates are 1-based");
      s.edges.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    }
    s.validate();
    return s;
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("schedule: ") + e.what());
  }
}

Json point_to_json(const SimplexPoint& x) {
  Json units = Json::array();
  for (auto u : x.units()) units.push_back(u);
  return Json{{"values", x.values()}, {"units", std::move(units)}};
}

SimplexPoint point_from_json(const Json& j) {
  try {
    if (j.contains("units")) {
      return SimplexPoint::from_units(j.at("units").get<std::vector<SimplexPoint::Unit>>());
    }
    return SimplexPoint::from_values(j.at("values").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("point: ") + e.what());
  }
}

Json partitions_to_json(const NestedPartitions& p) {
  Json splits = Json::array();
  for (const auto& s : p.splits()) {
    splits.push_back({{"time", s.time},
                      {"edge", {s.small_end + 1, s.large_end + 1}},
                      {"small_part", one_based(s.small_part)},
                      {"large_size", s.large_size}});
  }
  return Json{{"n", p.dim()},
              {"horizon", p.horizon()},
              {"connected", p.connected()},
              {"splits", std::move(splits)}};
}

Json report_to_json(const CouplingReport& r, std::size_t replica) {
  return Json{{"replica", replica},
              {"coalesced", r.coalesced},
              {"graph_connected", r.graph_connected},
              {"burn_in_steps", r.burn_in_steps},
              {"stage2_steps", r.stage2_steps},
              {"marked_times", r.marked_times},
              {"subset_attempts", r.subset_attempts},
              {"subset_failures", r.subset_failures},
              {"first_failure_time", optional_json(r.first_failure_time)},
              {"condition_a_violated_at", optional_json(r.condition_a_violated_at)},
              {"largeness_violated_at", optional_json(r.largeness_violated_at)},
              {"min_coordinate_seen", r.min_coordinate_seen},
              {"max_weight_audit", r.max_weight_audit},
              {"burn_in_final_z", r.burn_in_final_z},
              {"final_z", r.final_z}};
}

Json epoch_record_to_json(const EpochRecord& rec) {
  Json failure = nullptr;
  if (rec.failure) {
    Json pieces = Json::array();
    for (const auto& p : rec.failure->remainder.pieces) {
      pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"density", p.density}});
    }
    failure = {{"time", rec.failure->time},
               {"chain", rec.failure->chain + 1},
               {"m", rec.failure->m},
               {"delta", rec.failure->delta},
               {"remainder", std::move(pieces)}};
  }
  return Json{{"epoch_index", rec.window.epoch_index},
              {"start_time", rec.window.start_time},
              {"end_time", rec.window.end_time},
              {"phase2_start", rec.window.phase2_start},
              {"seed", rec.seed},
              {"n", rec.n},
              {"law", rec.law.to_string()},
              {"outcome", rec.coalesced ? "coalesced" : "failed"},
              {"graph_connected", rec.graph_connected},
              {"marked_times", rec.marked_times},
              {"subset_attempts", rec.subset_attempts},
              {"failure", std::move(failure)},
              {"phase1_diameter", rec.phase1_diameter},
              {"phase1_summed_bound", rec.phase1_summed_bound},
              {"center_end", point_to_json(rec.center_end)}};
}

}  // namespace simplex_gibbs
