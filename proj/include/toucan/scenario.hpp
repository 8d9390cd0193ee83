#pragma once

// Scenario files (JSON) and simulator output formats.
//
// {
//   "seed": 7, "duration": 50,
//   "profile": {"algorithm": "chaskey", "mac_tx_len": 24, "bind_id": false},
//   "keys_file": "demo.keys",                // relative to the scenario file
//   "keys": ["100-1FF <mackey> <enckey>"],   // or inline keystore lines
//   "nodes": [{"name": "engine", "tx_ids": ["0x100"], "secured": true}],
//   "schedule": [
//     {"tick": 0, "node": "engine", "id": "0x100", "payload": "0102030405"},
//     {"node": "engine", "id": "0x100", "start": 1, "every": 2, "count": 10, "payload": "random"}
//   ],
//   "attacker": [
//     {"kind": "eavesdrop"},
//     {"kind": "modify", "match_id": "0x100", "tick": 3, "bits": [3], "layer": "frame", "random_bits": 0},
//     {"kind": "replay", "tick": 20, "record": 0, "as_id": "0x200"},
//     {"kind": "inject", "tick": 5, "frame": "7FF#0011223344556677"}
//   ]
// }
//
// Identifiers may be JSON integers or hex strings. "random" payloads are drawn
// from a generator seeded by the scenario seed.

#include <filesystem>
#include <optional>
#include <ostream>

#include "toucan/bus_sim.hpp"
#include <json.hpp>

namespace toucan::sim {

/// Throws ParseError (malformed JSON or schema) or ConfigError (semantic problems).
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                        std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario load_scenario(const std::filesystem::path& path,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

nlohmann::json event_to_json(const BusEvent& event);
/// One JSON object per line.
void write_event_log(std::ostream& out, const std::vector<BusEvent>& events);
/// "metric,value" header then one row per metric.
void write_metrics_csv(std::ostream& out, const Metrics& metrics);
nlohmann::json metrics_to_json(const Metrics& metrics);

}  // namespace toucan::sim
