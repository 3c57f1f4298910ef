#pragma once

#include <json.hpp>

#include "rwl1/bench.hpp"
#include "rwl1/reweight.hpp"

namespace rwl1::cli {

using nlohmann::json;

// Config <-> JSON. Every reader rejects unknown keys and wrong types with an
// invalid-argument Error naming the offending key, so a typo in a config
// file is never silently ignored.

json to_json(const SolverConfig& c);
json to_json(const OuterConfig& c);
json to_json(const bench::SparseGridConfig& c);
json to_json(const bench::CompressibleConfig& c);

SolverConfig solver_from_json(const json& j);
OuterConfig outer_from_json(const json& j);
bench::SparseGridConfig sparse_grid_from_json(const json& j);
bench::CompressibleConfig compressible_from_json(const json& j);

/// Reads and parses a JSON file; throws io on read or parse failure.
json read_json_file(const std::string& path);

/// Recursively overlays `patch` onto `base` (objects merge, everything else replaces).
void overlay(json& base, const json& patch);

}  // namespace rwl1::cli
