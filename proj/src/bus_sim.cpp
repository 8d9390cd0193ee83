#include "toucan/bus_sim.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "toucan/errors.hpp"
#include "toucan/hex.hpp"

namespace toucan::sim {
namespace {

std::string hex_id(std::uint16_t id) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%03X", static_cast<unsigned>(id));
  return buf;
}

std::string hex_payload(std::uint64_t payload, unsigned bits) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%0*llx", static_cast<int>((bits + 3) / 4),
                static_cast<unsigned long long>(payload));
  return buf;
}

std::string join(const std::vector<unsigned>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

void flip_data_bit(CanFrame& frame, unsigned bit) {
  frame.data[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
}

}  // namespace

const char* to_string(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::eavesdrop: return "eavesdrop";
    case AttackKind::modify: return "modify";
    case AttackKind::replay: return "replay";
    case AttackKind::inject: return "inject";
  }
  return "unknown";
}

const char* to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::tx_request: return "tx_request";
    case EventKind::arbitration_win: return "arbitration_win";
    case EventKind::delivery: return "delivery";
    case EventKind::attacker_op: return "attacker_op";
  }
  return "unknown";
}

std::vector<std::pair<std::string, std::uint64_t>> Metrics::rows() const {
  std::vector<std::pair<std::string, std::uint64_t>> r = {
      {"payloads_submitted", payloads_submitted},
      {"frames_on_bus", frames_on_bus},
      {"honest_frames", honest_frames},
      {"attacker_frames", attacker_frames},
      {"deliveries", deliveries},
      {"accepted", accepted},
      {"rejected", rejected},
      {"rejected_bad_tag", rejected_bad_tag},
      {"rejected_bad_dlc", rejected_bad_dlc},
      {"rejected_no_key", rejected_no_key},
      {"link_errors", link_errors},
      {"acked_frames", acked_frames},
      {"modified_frames", modified_frames},
      {"modified_accepted", modified_accepted},
      {"replayed_frames", replayed_frames},
      {"replay_accepted", replay_accepted},
      {"injected_frames", injected_frames},
      {"inject_accepted", inject_accepted},
      {"pending_at_end", pending_at_end},
  };
  for (const auto& [name, c] : per_node) {
    r.emplace_back("node." + name + ".sent", c.sent);
    r.emplace_back("node." + name + ".accepted", c.accepted);
    r.emplace_back("node." + name + ".rejected", c.rejected);
    r.emplace_back("node." + name + ".link_errors", c.link_errors);
  }
  return r;
}

void Scenario::validate() const {
  profile.validate();
  std::set<std::string> names;
  for (const auto& n : nodes) {
    if (n.name.empty()) throw ConfigError("node with empty name");
    if (n.name == kAttackerName) throw ConfigError("node name 'attacker' is reserved");
    if (!names.insert(n.name).second) throw ConfigError("duplicate node name '" + n.name + "'");
    for (auto id : n.tx_ids) {
      if (id > kMaxStandardId) throw ConfigError("node '" + n.name + "' transmits identifier above 0x7FF");
    }
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& s = schedule[i];
    const auto it = std::find_if(nodes.begin(), nodes.end(), [&](const NodeConfig& n) { return n.name == s.node; });
    const std::string where = "schedule entry " + std::to_string(i) + ": ";
    if (it == nodes.end()) throw ConfigError(where + "unknown node '" + s.node + "'");
    if (std::find(it->tx_ids.begin(), it->tx_ids.end(), s.id) == it->tx_ids.end()) {
      throw ConfigError(where + "node '" + s.node + "' does not transmit " + hex_id(s.id));
    }
    const unsigned bits = it->secured ? profile.payload_bits() : 64;
    if (bits < 64 && (s.payload >> bits) != 0) {
      throw ConfigError(where + "payload exceeds " + std::to_string(bits) + " bits");
    }
    if (it->secured && !keys.lookup(s.id)) {
      throw ConfigError(where + "no key record covers " + hex_id(s.id));
    }
  }
}

BusSimulator::BusSimulator(Scenario scenario) : scenario_(std::move(scenario)), rng_(scenario_.seed) {
  scenario_.validate();
  nodes_.reserve(scenario_.nodes.size());
  for (const auto& cfg : scenario_.nodes) nodes_.emplace_back(cfg);

  schedule_order_.resize(scenario_.schedule.size());
  for (std::size_t i = 0; i < schedule_order_.size(); ++i) schedule_order_[i] = i;
  std::stable_sort(schedule_order_.begin(), schedule_order_.end(), [&](std::size_t a, std::size_t b) {
    return scenario_.schedule[a].tick < scenario_.schedule[b].tick;
  });
  attach_attacker(scenario_.attacker);
  sync_metrics();
}

void BusSimulator::attach_attacker(const std::vector<AttackerAction>& script) {
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& a = script[i];
    const std::string where = "attacker action " + std::to_string(i) + " (" + to_string(a.kind) + "): ";
    switch (a.kind) {
      case AttackKind::eavesdrop:
        break;
      case AttackKind::modify:
        if (a.bits.empty() && a.random_bits == 0) throw ConfigError(where + "no bits to flip");
        if (a.layer == ModifyLayer::frame) {
          for (auto b : a.bits) {
            if (b >= 64) throw ConfigError(where + "Data-field bit " + std::to_string(b) + " out of range");
          }
        } else if (a.random_bits != 0) {
          throw ConfigError(where + "random_bits applies to the frame layer only");
        }
        if (a.random_bits > 64) throw ConfigError(where + "random_bits exceeds 64");
        if (a.match_id && *a.match_id > kMaxStandardId) throw ConfigError(where + "match identifier above 0x7FF");
        break;
      case AttackKind::replay:
        if (!a.tick) throw ConfigError(where + "replay needs a trigger tick");
        if (a.as_id && *a.as_id > kMaxStandardId) throw ConfigError(where + "identifier above 0x7FF");
        break;
      case AttackKind::inject:
        if (!a.tick) throw ConfigError(where + "inject needs a trigger tick");
        if (!a.frame) throw ConfigError(where + "inject needs a frame");
        a.frame->validate();
        break;
    }
  }
  actions_.insert(actions_.end(), script.begin(), script.end());
}

EcuNode& BusSimulator::node(const std::string& name) {
  for (auto& n : nodes_) {
    if (n.name() == name) return n;
  }
  throw std::out_of_range("no node named '" + name + "'");
}

CanFrame BusSimulator::build_frame(const EcuNode& node, std::uint16_t id, std::uint64_t payload) const {
  if (node.config().secured) return secure_send(payload, id, scenario_.keys, scenario_.profile);
  return CanFrame::data_frame_u64(id, payload);
}

void BusSimulator::enqueue_due(std::vector<BusEvent>& events) {
  while (next_submission_ < schedule_order_.size()) {
    const auto& s = scenario_.schedule[schedule_order_[next_submission_]];
    if (s.tick > tick_) break;
    ++next_submission_;
    EcuNode& n = node(s.node);
    CanFrame f = build_frame(n, s.id, s.payload);
    const unsigned bits = n.config().secured ? scenario_.profile.payload_bits() : 64;
    events.push_back({tick_, EventKind::tx_request, f, n.name(), "", "payload=" + hex_payload(s.payload, bits)});
    n.tx_queue_.push_back(f);
    ++metrics_.payloads_submitted;
  }

  for (const auto& a : actions_) {
    if (!a.tick || *a.tick != tick_) continue;
    if (a.kind == AttackKind::replay) {
      if (a.record_index >= recorded_.size()) {
        throw SimulationFault("replay of record " + std::to_string(a.record_index) + " at tick " +
                              std::to_string(tick_) + " but only " + std::to_string(recorded_.size()) +
                              " frames recorded");
      }
      CanFrame f = recorded_[a.record_index];
      std::string detail = "replay record=" + std::to_string(a.record_index);
      if (a.as_id) {
        f.id = *a.as_id;
        detail += " as=" + hex_id(*a.as_id);
      }
      attacker_queue_.push_back({f, Origin::replay});
      events.push_back({tick_, EventKind::attacker_op, f, kAttackerName, "", detail});
    } else if (a.kind == AttackKind::inject) {
      attacker_queue_.push_back({*a.frame, Origin::inject});
      events.push_back({tick_, EventKind::attacker_op, *a.frame, kAttackerName, "", "inject"});
    }
  }
}

std::vector<unsigned> BusSimulator::tamper(CanFrame& frame, bool& modified, std::vector<BusEvent>& events) {
  std::vector<unsigned> wire_flips;
  for (const auto& a : actions_) {
    if (a.kind != AttackKind::modify) continue;
    if (a.match_id && *a.match_id != frame.id) continue;
    if (a.tick && *a.tick != tick_) continue;

    if (a.layer == ModifyLayer::wire) {
      wire_flips.insert(wire_flips.end(), a.bits.begin(), a.bits.end());
      events.push_back({tick_, EventKind::attacker_op, frame, kAttackerName, "", "modify wire bits=" + join(a.bits)});
      modified = true;
      continue;
    }

    const unsigned capacity = static_cast<unsigned>(frame.data_length() * 8);
    std::vector<unsigned> flipped;
    for (auto b : a.bits) {
      if (b < capacity) flipped.push_back(b);
    }
    if (a.random_bits != 0 && capacity != 0) {
      std::vector<unsigned> pool(capacity);
      for (unsigned i = 0; i < capacity; ++i) pool[i] = i;
      const unsigned take = std::min(a.random_bits, capacity);
      // Partial Fisher-Yates on raw engine output keeps the draw platform-independent.
      for (unsigned i = 0; i < take; ++i) {
        const auto j = i + static_cast<unsigned>(rng_() % (capacity - i));
        std::swap(pool[i], pool[j]);
        flipped.push_back(pool[i]);
      }
    }
    for (auto b : flipped) flip_data_bit(frame, b);
    if (!flipped.empty()) modified = true;
    events.push_back({tick_, EventKind::attacker_op, frame, kAttackerName, "", "modify frame bits=" + join(flipped)});
  }
  return wire_flips;
}

void BusSimulator::deliver(const CanFrame& frame, const BitString& wire, const std::string& source, Origin origin,
                           bool modified, std::vector<BusEvent>& events) {
  CanFrame received;
  std::string link_error;
  try {
    received = decode_frame(wire);
  } catch (const FrameError& e) {
    link_error = to_string(e.kind());
  }

  if (link_error.empty()) ++metrics_.acked_frames;  // every receiver passes the same CRC
  bool any_accepted = false;
  for (auto& n : nodes_) {
    if (n.name() == source) continue;
    ++metrics_.deliveries;
    if (!link_error.empty()) {
      ++n.counters_.link_errors;
      ++metrics_.link_errors;
      events.push_back({tick_, EventKind::delivery, frame, source, n.name(), "link_error " + link_error});
      continue;
    }
    Verdict v;
    if (n.config().secured) {
      v = secure_receive(received, scenario_.keys, scenario_.profile);
    } else {
      v = Verdict::accept(received.data_u64());
    }
    if (v.accepted) {
      any_accepted = true;
      ++n.counters_.accepted;
      ++metrics_.accepted;
      n.rx_buffer_ = ReceivedFrame{tick_, received.id, v.payload};
      const unsigned bits = n.config().secured ? scenario_.profile.payload_bits() : 64;
      events.push_back({tick_, EventKind::delivery, received, source, n.name(), "accept payload=" + hex_payload(v.payload, bits)});
    } else {
      ++n.counters_.rejected;
      ++metrics_.rejected;
      switch (v.reason) {
        case RejectReason::bad_tag: ++metrics_.rejected_bad_tag; break;
        case RejectReason::bad_dlc: ++metrics_.rejected_bad_dlc; break;
        case RejectReason::no_key: ++metrics_.rejected_no_key; break;
      }
      events.push_back({tick_, EventKind::delivery, received, source, n.name(), std::string("reject ") + to_string(v.reason)});
    }
  }

  if (any_accepted) {
    if (origin == Origin::replay) ++metrics_.replay_accepted;
    if (origin == Origin::inject) ++metrics_.inject_accepted;
    if (origin == Origin::honest && modified) ++metrics_.modified_accepted;
  }
}

std::vector<BusEvent> BusSimulator::step() {
  if (finished()) throw SimulationFault("simulation already past its duration");
  std::vector<BusEvent> events;
  enqueue_due(events);

  // Arbitration among queue heads; kAttackerSlot marks the attacker's queue.
  constexpr std::size_t kAttackerSlot = static_cast<std::size_t>(-1);
  std::vector<std::pair<std::uint16_t, std::size_t>> heads;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].tx_queue_.empty()) heads.emplace_back(nodes_[i].tx_queue_.front().id, i);
  }
  if (!attacker_queue_.empty()) heads.emplace_back(attacker_queue_.front().frame.id, kAttackerSlot);

  std::set<std::uint16_t> seen;
  for (const auto& head : heads) {
    if (!seen.insert(head.first).second) {
      throw SimulationFault("identifier collision at tick " + std::to_string(tick_) + ": " +
                            hex_id(head.first) + " queued by two transmitters");
    }
  }
  std::optional<std::pair<std::uint16_t, std::size_t>> best;
  for (const auto& head : heads) {
    if (!best || wins_arbitration(best->first, head.first) == head.first) best = head;
  }
  const std::size_t contenders = heads.size();
  const bool attacker_wins = best && best->second == kAttackerSlot;
  EcuNode* winner_node = (best && !attacker_wins) ? &nodes_[best->second] : nullptr;

  if (best) {
    CanFrame frame;
    std::string source;
    Origin origin = Origin::honest;
    if (attacker_wins) {
      frame = attacker_queue_.front().frame;
      origin = attacker_queue_.front().origin;
      attacker_queue_.pop_front();
      source = kAttackerName;
      ++metrics_.attacker_frames;
      if (origin == Origin::replay) ++metrics_.replayed_frames;
      if (origin == Origin::inject) ++metrics_.injected_frames;
    } else {
      frame = winner_node->tx_queue_.front();
      winner_node->tx_queue_.pop_front();
      ++winner_node->counters_.sent;
      source = winner_node->name();
      ++metrics_.honest_frames;
    }
    ++metrics_.frames_on_bus;
    events.push_back({tick_, EventKind::arbitration_win, frame, source, "",
                      "contenders=" + std::to_string(contenders)});

    // The attacker observes every frame before it reaches the receivers.
    const std::size_t record_index = recorded_.size();
    recorded_.push_back(frame);
    const bool logging = std::any_of(actions_.begin(), actions_.end(),
                                     [](const AttackerAction& a) { return a.kind == AttackKind::eavesdrop; });
    if (logging) {
      events.push_back({tick_, EventKind::attacker_op, frame, kAttackerName, "",
                        "eavesdrop record=" + std::to_string(record_index)});
    }

    bool modified = false;
    const auto wire_flips = tamper(frame, modified, events);
    if (modified) ++metrics_.modified_frames;

    BitString wire = encode_frame(frame);
    for (auto b : wire_flips) {
      if (b < wire.size()) wire.flip(b);
    }
    deliver(frame, wire, source, origin, modified, events);
  }

  ++tick_;
  sync_metrics();
  return events;
}

void BusSimulator::sync_metrics() {
  std::uint64_t pending = attacker_queue_.size();
  for (const auto& n : nodes_) {
    metrics_.per_node[n.name()] = n.counters();
    pending += n.pending();
  }
  metrics_.pending_at_end = pending;
}

RunResult run_scenario(const Scenario& scenario) {
  BusSimulator sim(scenario);
  RunResult result;
  while (!sim.finished()) {
    auto ev = sim.step();
    result.events.insert(result.events.end(), std::make_move_iterator(ev.begin()),
                         std::make_move_iterator(ev.end()));
  }
  result.metrics = sim.metrics();
  return result;
}

std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios) {
  std::vector<RunResult> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(run_scenario(s));
  return out;
}

std::vector<RunResult> run_batch(const std::vector<Scenario>& scenarios) {
  std::vector<RunResult> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = run_scenario(scenarios[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace toucan::sim
