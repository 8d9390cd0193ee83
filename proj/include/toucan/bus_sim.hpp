#pragma once

// Deterministic discrete-event model of a broadcast CAN bus.
//
// Time advances in integer ticks, one frame on the bus per tick. At each tick
// every node with a queued frame contends; the lowest identifier wins and
// losers retry on the next tick. The attacker sits on the bus between
// arbitration and delivery: it sees (and records) every frame, may rewrite
// it, and may queue frames of its own that contend like anyone else's.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toucan/can_frame.hpp"
#include "toucan/keystore.hpp"
#include "toucan/protocol.hpp"

namespace toucan::sim {

inline constexpr const char* kAttackerName = "attacker";

struct NodeConfig {
  std::string name;
  std::vector<std::uint16_t> tx_ids;
  /// Plain CAN nodes send the payload as an 8-byte big-endian Data field and accept anything.
  bool secured = true;
};

struct Submission {
  std::uint64_t tick = 0;
  std::string node;
  std::uint16_t id = 0;
  std::uint64_t payload = 0;
};

enum class AttackKind { eavesdrop, modify, replay, inject };
enum class ModifyLayer { frame, wire };

const char* to_string(AttackKind kind) noexcept;

struct AttackerAction {
  AttackKind kind = AttackKind::eavesdrop;

  // Trigger. modify: applies to broadcast frames matching every set field
  // (no field set: every frame). replay/inject: queued at `tick`.
  std::optional<std::uint64_t> tick;
  std::optional<std::uint16_t> match_id;

  // modify
  ModifyLayer layer = ModifyLayer::frame;
  std::vector<unsigned> bits;  // frame: Data-field bit, 0 = MSB of byte 0; wire: encoded bit index
  unsigned random_bits = 0;    // additional distinct Data-field bits drawn from the scenario RNG

  // replay
  std::size_t record_index = 0;
  std::optional<std::uint16_t> as_id;  // re-send the recorded Data field under another identifier

  // inject
  std::optional<CanFrame> frame;
};

struct ReceivedFrame {
  std::uint64_t tick = 0;
  std::uint16_t id = 0;
  std::uint64_t payload = 0;

  friend bool operator==(const ReceivedFrame&, const ReceivedFrame&) = default;
};

struct NodeCounters {
  std::uint64_t sent = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t link_errors = 0;
};

class EcuNode {
 public:
  explicit EcuNode(NodeConfig config) : config_(std::move(config)) {}

  const std::string& name() const noexcept { return config_.name; }
  const NodeConfig& config() const noexcept { return config_; }
  const NodeCounters& counters() const noexcept { return counters_; }

  /// Latest accepted frame without consuming it.
  const std::optional<ReceivedFrame>& rx_buffer() const noexcept { return rx_buffer_; }
  /// Consumes the buffered frame.
  std::optional<ReceivedFrame> read() { return std::exchange(rx_buffer_, std::nullopt); }

  std::size_t pending() const noexcept { return tx_queue_.size(); }

 private:
  friend class BusSimulator;

  NodeConfig config_;
  NodeCounters counters_;
  std::optional<ReceivedFrame> rx_buffer_;  // single slot: newer frames overwrite
  std::deque<CanFrame> tx_queue_;
};

enum class EventKind { tx_request, arbitration_win, delivery, attacker_op };
const char* to_string(EventKind kind) noexcept;

struct BusEvent {
  std::uint64_t tick = 0;
  EventKind kind = EventKind::tx_request;
  CanFrame frame;
  std::string source;  // originating node or "attacker"
  std::string target;  // delivery: receiving node
  std::string detail;  // verdict, attacker operation, ...

  friend bool operator==(const BusEvent&, const BusEvent&) = default;
};

struct Metrics {
  std::uint64_t payloads_submitted = 0;
  std::uint64_t frames_on_bus = 0;
  std::uint64_t honest_frames = 0;
  std::uint64_t attacker_frames = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rejected_bad_tag = 0;
  std::uint64_t rejected_bad_dlc = 0;
  std::uint64_t rejected_no_key = 0;
  std::uint64_t link_errors = 0;
  std::uint64_t acked_frames = 0;
  std::uint64_t modified_frames = 0;
  std::uint64_t modified_accepted = 0;
  std::uint64_t replayed_frames = 0;
  std::uint64_t replay_accepted = 0;
  std::uint64_t injected_frames = 0;
  std::uint64_t inject_accepted = 0;
  std::uint64_t pending_at_end = 0;
  std::map<std::string, NodeCounters> per_node;

  /// (name, value) pairs in a fixed order; per-node rows come last.
  std::vector<std::pair<std::string, std::uint64_t>> rows() const;
};

struct Scenario {
  std::vector<NodeConfig> nodes;
  std::vector<Submission> schedule;
  std::vector<AttackerAction> attacker;
  std::uint64_t duration = 0;
  std::uint64_t seed = 0;
  SecOcProfile profile;
  KeyStore keys;

  /// Throws ConfigError naming the first problem found.
  void validate() const;
};

class BusSimulator {
 public:
  /// Validates the scenario and queues nothing yet; attacker actions from the
  /// scenario are attached.
  explicit BusSimulator(Scenario scenario);

  /// Adds attacker actions. Throws ConfigError on a malformed action.
  void attach_attacker(const std::vector<AttackerAction>& script);

  /// Advances one tick. Throws SimulationFault on an identifier collision.
  std::vector<BusEvent> step();

  bool finished() const noexcept { return tick_ >= scenario_.duration; }
  std::uint64_t tick() const noexcept { return tick_; }

  const Metrics& metrics() const noexcept { return metrics_; }
  const std::vector<EcuNode>& nodes() const noexcept { return nodes_; }
  EcuNode& node(const std::string& name);
  /// Frames the attacker has observed, in broadcast order (before modification).
  const std::vector<CanFrame>& recorded() const noexcept { return recorded_; }

 private:
  enum class Origin { honest, replay, inject };
  struct AttackerFrame {
    CanFrame frame;
    Origin origin;
  };

  void enqueue_due(std::vector<BusEvent>& events);
  /// Applies matching modify actions; returns wire-level bit indexes to flip after encoding.
  std::vector<unsigned> tamper(CanFrame& frame, bool& modified, std::vector<BusEvent>& events);
  void deliver(const CanFrame& frame, const BitString& wire, const std::string& source, Origin origin,
               bool modified, std::vector<BusEvent>& events);
  CanFrame build_frame(const EcuNode& node, std::uint16_t id, std::uint64_t payload) const;
  void sync_metrics();

  Scenario scenario_;
  std::vector<EcuNode> nodes_;
  std::vector<AttackerAction> actions_;
  std::deque<AttackerFrame> attacker_queue_;
  std::vector<CanFrame> recorded_;
  std::vector<std::size_t> schedule_order_;  // schedule indices sorted by (tick, position)
  std::size_t next_submission_ = 0;
  std::uint64_t tick_ = 0;
  std::mt19937_64 rng_;
  Metrics metrics_;
};

struct RunResult {
  Metrics metrics;
  std::vector<BusEvent> events;
};

/// Runs the scenario for its full duration.
RunResult run_scenario(const Scenario& scenario);

/// Runs independent scenarios; the OpenMP variant splits them across threads.
std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios);
std::vector<RunResult> run_batch(const std::vector<Scenario>& scenarios);

}  // namespace toucan::sim
