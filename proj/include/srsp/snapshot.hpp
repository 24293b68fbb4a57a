#pragma once

#include <json.hpp>

#include "srsp/state.hpp"

namespace srsp {

// JSON snapshots of states and stationary solutions.  Keys appear in a fixed
// order and numbers use shortest round-trip decimals, so re-serializing a
// parsed snapshot reproduces it byte for byte; parsed values equal the
// originals exactly.
using Snapshot = nlohmann::ordered_json;

Snapshot state_to_json(const MixedState& state);
MixedState state_from_json(const Snapshot& j);

Snapshot solution_to_json(const StationarySolution& sol);
StationarySolution solution_from_json(const Snapshot& j);

// Parses either snapshot kind from text; throws std::runtime_error with a
// line and column on malformed input, or a key-path message on a snapshot
// that does not match the schema.
Snapshot parse_snapshot(const std::string& text);

}  // namespace srsp
