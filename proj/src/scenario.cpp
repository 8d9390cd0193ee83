#include "toucan/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "toucan/candump.hpp"
#include "toucan/errors.hpp"
#include "toucan/hex.hpp"

namespace toucan::sim {
namespace {

using nlohmann::json;

std::uint64_t as_u64(const json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    try {
      if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) return parse_hex_u64(s);
      std::size_t used = 0;
      const auto value = std::stoull(s, &used, 10);
      if (used == s.size()) return value;
    } catch (const std::exception&) {
    }
  }
  throw ParseError(what + ": expected a non-negative integer or 0x-prefixed hex string");
}

std::uint16_t as_id(const json& v, const std::string& what) {
  std::uint64_t id = 0;
  if (v.is_string()) {
    // Bare strings are hex, matching candump notation.
    try {
      id = parse_hex_u64(v.get<std::string>());
    } catch (const ParseError&) {
      throw ParseError(what + ": malformed identifier '" + v.get<std::string>() + "'");
    }
  } else {
    id = as_u64(v, what);
  }
  if (id > kMaxStandardId) throw ParseError(what + ": identifier above 0x7FF");
  return static_cast<std::uint16_t>(id);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

SecOcProfile parse_profile(const json& j) {
  SecOcProfile p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw ParseError("profile: expected an object");
  if (j.contains("algorithm")) p.algorithm = parse_mac_algorithm(j.at("algorithm").get<std::string>(), &p.chaskey_rounds);
  if (j.contains("mac_tx_len")) p.mac_tx_len = static_cast<unsigned>(as_u64(j.at("mac_tx_len"), "profile.mac_tx_len"));
  if (j.contains("freshness_len")) p.freshness_len = static_cast<unsigned>(as_u64(j.at("freshness_len"), "profile.freshness_len"));
  if (j.contains("freshness_tx_len")) p.freshness_tx_len = static_cast<unsigned>(as_u64(j.at("freshness_tx_len"), "profile.freshness_tx_len"));
  if (j.contains("bind_id")) p.bind_id = j.at("bind_id").get<bool>();
  p.validate();
  return p;
}

KeyStore parse_keys(const json& doc, const std::filesystem::path& base_dir) {
  if (doc.contains("keys_file")) {
    auto path = std::filesystem::path(doc.at("keys_file").get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    return load_keystore(path);
  }
  if (doc.contains("keys")) {
    std::ostringstream text;
    for (const auto& line : doc.at("keys")) text << line.get<std::string>() << '\n';
    std::istringstream in(text.str());
    return parse_keystore(in);
  }
  return {};
}

AttackerAction parse_action(const json& j, std::size_t index) {
  const std::string where = "attacker[" + std::to_string(index) + "]";
  AttackerAction a;
  const auto kind = require(j, "kind", where).get<std::string>();
  if (kind == "eavesdrop") a.kind = AttackKind::eavesdrop;
  else if (kind == "modify") a.kind = AttackKind::modify;
  else if (kind == "replay") a.kind = AttackKind::replay;
  else if (kind == "inject") a.kind = AttackKind::inject;
  else throw ParseError(where + ": unknown kind '" + kind + "'");

  if (j.contains("tick")) a.tick = as_u64(j.at("tick"), where + ".tick");
  if (j.contains("match_id")) a.match_id = as_id(j.at("match_id"), where + ".match_id");
  if (j.contains("layer")) {
    const auto layer = j.at("layer").get<std::string>();
    if (layer == "frame") a.layer = ModifyLayer::frame;
    else if (layer == "wire") a.layer = ModifyLayer::wire;
    else throw ParseError(where + ": layer must be 'frame' or 'wire'");
  }
  if (j.contains("bits")) {
    for (const auto& b : j.at("bits")) a.bits.push_back(static_cast<unsigned>(as_u64(b, where + ".bits")));
  }
  if (j.contains("random_bits")) a.random_bits = static_cast<unsigned>(as_u64(j.at("random_bits"), where + ".random_bits"));
  if (j.contains("record")) a.record_index = static_cast<std::size_t>(as_u64(j.at("record"), where + ".record"));
  if (j.contains("as_id")) a.as_id = as_id(j.at("as_id"), where + ".as_id");
  if (j.contains("frame")) {
    a.frame = parse_candump_line("(0.0) attacker " + j.at("frame").get<std::string>()).frame;
  }
  return a;
}

void parse_schedule(const json& list, const Scenario& s, std::uint64_t seed, std::vector<Submission>& out) {
  std::mt19937_64 payload_rng(seed ^ 0x9E3779B97F4A7C15ull);
  auto payload_bits_for = [&](const std::string& node) -> unsigned {
    for (const auto& n : s.nodes) {
      if (n.name == node) return n.secured ? s.profile.payload_bits() : 64;
    }
    return s.profile.payload_bits();
  };
  auto parse_payload = [&](const json& p, unsigned bits, const std::string& where) -> std::uint64_t {
    if (p.is_string() && p.get<std::string>() == "random") {
      const std::uint64_t r = payload_rng();
      return bits >= 64 ? r : (r & ((std::uint64_t{1} << bits) - 1));
    }
    if (p.is_string()) {
      try {
        return parse_hex_u64(p.get<std::string>());
      } catch (const ParseError&) {
        throw ParseError(where + ": malformed payload hex");
      }
    }
    return as_u64(p, where + ".payload");
  };

  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& e = list[i];
    const std::string where = "schedule[" + std::to_string(i) + "]";
    const auto node = require(e, "node", where).get<std::string>();
    const auto id = as_id(require(e, "id", where), where + ".id");
    const auto& payload = require(e, "payload", where);
    const unsigned bits = payload_bits_for(node);
    if (e.contains("count")) {
      const auto start = e.contains("start") ? as_u64(e.at("start"), where + ".start") : 0;
      const auto every = e.contains("every") ? as_u64(e.at("every"), where + ".every") : 1;
      const auto count = as_u64(e.at("count"), where + ".count");
      if (every == 0) throw ParseError(where + ": every must be positive");
      for (std::uint64_t k = 0; k < count; ++k) {
        out.push_back({start + k * every, node, id, parse_payload(payload, bits, where)});
      }
    } else {
      out.push_back({as_u64(require(e, "tick", where), where + ".tick"), node, id, parse_payload(payload, bits, where)});
    }
  }
}

std::string data_hex(const CanFrame& f) {
  if (f.rtr) return "R";
  return to_hex(f.payload());
}

}  // namespace

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir,
                        std::optional<std::uint64_t> seed_override) {
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
  try {
    Scenario s;
    s.seed = seed_override ? *seed_override : (doc.contains("seed") ? as_u64(doc.at("seed"), "seed") : 0);
    s.duration = as_u64(require(doc, "duration", "scenario"), "duration");
    s.profile = parse_profile(doc.value("profile", json()));
    s.keys = parse_keys(doc, base_dir);

    for (const auto& n : require(doc, "nodes", "scenario")) {
      NodeConfig cfg;
      cfg.name = require(n, "name", "node").get<std::string>();
      if (n.contains("tx_ids")) {
        for (const auto& id : n.at("tx_ids")) cfg.tx_ids.push_back(as_id(id, "node " + cfg.name));
      }
      cfg.secured = n.value("secured", true);
      s.nodes.push_back(std::move(cfg));
    }
    if (doc.contains("schedule")) parse_schedule(doc.at("schedule"), s, s.seed, s.schedule);
    if (doc.contains("attacker")) {
      const auto& list = doc.at("attacker");
      for (std::size_t i = 0; i < list.size(); ++i) s.attacker.push_back(parse_action(list[i], i));
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario schema: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.parent_path(), seed_override);
}

json event_to_json(const BusEvent& e) {
  char id[8];
  std::snprintf(id, sizeof id, "%03X", static_cast<unsigned>(e.frame.id));
  json j = {{"tick", e.tick}, {"kind", to_string(e.kind)}, {"source", e.source},
            {"id", id},       {"dlc", e.frame.dlc},       {"data", data_hex(e.frame)}};
  if (!e.target.empty()) j["target"] = e.target;
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

void write_event_log(std::ostream& out, const std::vector<BusEvent>& events) {
  for (const auto& e : events) out << event_to_json(e).dump() << '\n';
}

void write_metrics_csv(std::ostream& out, const Metrics& metrics) {
  out << "metric,value\n";
  for (const auto& [name, value] : metrics.rows()) out << name << ',' << value << '\n';
}

json metrics_to_json(const Metrics& metrics) {
  json j = json::object();
  for (const auto& [name, value] : metrics.rows()) j[name] = value;
  return j;
}

}  // namespace toucan::sim
