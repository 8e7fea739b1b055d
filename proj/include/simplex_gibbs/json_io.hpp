#pragma once

// JSON encodings. Coordinates are 1-based in every external format.

#include "json.hpp"

#include "simplex_gibbs/cftp.hpp"
#include "simplex_gibbs/chain.hpp"
#include "simplex_gibbs/partitions.hpp"
#include "simplex_gibbs/two_stage.hpp"

namespace simplex_gibbs {

using Json = nlohmann::json;

// {"n": 4, "edges": [[1, 2], [3, 4], ...]}
Json schedule_to_json(const EdgeSchedule& s);
EdgeSchedule schedule_from_json(const Json& j);

// {"values": [...], "units": [...]}; units are exact and sum to 2^62.
Json point_to_json(const SimplexPoint& x);
SimplexPoint point_from_json(const Json& j);

// {"n", "horizon", "connected", "splits": [{"time", "small_part", "large_size", ...}]}
Json partitions_to_json(const NestedPartitions& p);

Json report_to_json(const CouplingReport& r, std::size_t replica);
Json epoch_record_to_json(const EpochRecord& rec);

}  // namespace simplex_gibbs
