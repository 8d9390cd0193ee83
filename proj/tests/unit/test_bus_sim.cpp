#include <gtest/gtest.h>

#include "toucan/bus_sim.hpp"
#include "toucan/errors.hpp"

using namespace toucan;
using namespace toucan::sim;

namespace {

Block128 fill(std::uint8_t start) {
  Block128 b{};
  for (int i = 0; i < 16; ++i) b[i] = static_cast<std::uint8_t>(start + i);
  return b;
}

Scenario base_scenario() {
  Scenario s;
  s.duration = 20;
  s.seed = 1;
  s.keys = KeyStore({KeyRecord(0x100, 0x1FF, fill(0), fill(16)), KeyRecord(0x200, 0x2FF, fill(32), fill(48))});
  s.nodes = {{"engine", {0x120}, true}, {"brake", {0x220}, true}, {"gateway", {}, true}};
  return s;
}

std::size_t count(const std::vector<BusEvent>& ev, EventKind kind) {
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](const BusEvent& e) { return e.kind == kind; }));
}

}  // namespace

TEST(BusSim, LowestIdentifierWinsAndLoserRetries) {
  Scenario s = base_scenario();
  s.schedule = {{0, "brake", 0x220, 2}, {0, "engine", 0x120, 1}};
  BusSimulator sim(s);
  auto ev = sim.step();
  const auto win = std::find_if(ev.begin(), ev.end(), [](const BusEvent& e) { return e.kind == EventKind::arbitration_win; });
  ASSERT_NE(win, ev.end());
  EXPECT_EQ(win->frame.id, 0x120);
  EXPECT_EQ(win->source, "engine");
  EXPECT_EQ(win->detail, "contenders=2");
  EXPECT_EQ(sim.node("brake").pending(), 1u);

  ev = sim.step();
  EXPECT_EQ(sim.node("brake").pending(), 0u);
  ASSERT_TRUE(sim.node("engine").rx_buffer());
  EXPECT_EQ(sim.node("engine").rx_buffer()->payload, 2u);
  EXPECT_EQ(sim.node("gateway").read()->payload, 2u);
  EXPECT_FALSE(sim.node("gateway").rx_buffer());
}

TEST(BusSim, HonestTrafficIsAccepted) {
  Scenario s = base_scenario();
  for (std::uint64_t t = 0; t < 10; ++t) s.schedule.push_back({t, "engine", 0x120, t * 1000});
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.payloads_submitted, 10u);
  EXPECT_EQ(r.metrics.frames_on_bus, 10u);
  EXPECT_EQ(r.metrics.accepted, 20u);
  EXPECT_EQ(r.metrics.rejected, 0u);
  EXPECT_EQ(r.metrics.per_node.at("engine").sent, 10u);
  EXPECT_EQ(r.metrics.per_node.at("gateway").accepted, 10u);
}

TEST(BusSim, EavesdropDoesNotPerturb) {
  Scenario s = base_scenario();
  for (std::uint64_t t = 0; t < 6; ++t) s.schedule.push_back({t, t % 2 ? "brake" : "engine", static_cast<std::uint16_t>(t % 2 ? 0x220 : 0x120), t});
  const RunResult quiet = run_scenario(s);
  s.attacker = {AttackerAction{}};
  BusSimulator sim(s);
  std::vector<BusEvent> events;
  while (!sim.finished()) {
    auto ev = sim.step();
    events.insert(events.end(), ev.begin(), ev.end());
  }
  EXPECT_EQ(sim.metrics().rows(), quiet.metrics.rows());
  ASSERT_EQ(sim.recorded().size(), 6u);
  std::vector<CanFrame> on_bus;
  for (const auto& e : events) {
    if (e.kind == EventKind::arbitration_win) on_bus.push_back(e.frame);
  }
  EXPECT_EQ(sim.recorded(), on_bus);
  EXPECT_EQ(count(events, EventKind::attacker_op), 6u);
}

TEST(BusSim, IdentifierCollisionIsFault) {
  Scenario s = base_scenario();
  s.nodes.push_back({"clone", {0x120}, true});
  s.schedule = {{0, "engine", 0x120, 1}, {0, "clone", 0x120, 2}};
  BusSimulator sim(s);
  EXPECT_THROW(sim.step(), SimulationFault);
}

TEST(BusSim, ReplayIsAcceptedWithoutFreshness) {
  Scenario s = base_scenario();
  s.schedule = {{0, "engine", 0x120, 0xABCDE}};
  AttackerAction replay;
  replay.kind = AttackKind::replay;
  replay.tick = 5;
  replay.record_index = 0;
  s.attacker = {replay};
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.replayed_frames, 1u);
  EXPECT_EQ(r.metrics.replay_accepted, 1u);
}

TEST(BusSim, ReplayBeforeCaptureIsFault) {
  Scenario s = base_scenario();
  AttackerAction replay;
  replay.kind = AttackKind::replay;
  replay.tick = 0;
  s.attacker = {replay};
  EXPECT_THROW(run_scenario(s), SimulationFault);
}

TEST(BusSim, SplicedIdentifierIsRejected) {
  Scenario s = base_scenario();
  s.schedule = {{0, "engine", 0x120, 0x12345}};
  AttackerAction replay;
  replay.kind = AttackKind::replay;
  replay.tick = 3;
  replay.as_id = 0x121;  // same key record, different nonce
  s.attacker = {replay};
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.replay_accepted, 0u);
  EXPECT_EQ(r.metrics.rejected_bad_tag, 3u);
}

TEST(BusSim, InjectUnknownIdentifierHasNoKey) {
  Scenario s = base_scenario();
  AttackerAction inject;
  inject.kind = AttackKind::inject;
  inject.tick = 2;
  inject.frame = CanFrame::data_frame_u64(0x7AB, 0x1122334455667788ull);
  s.attacker = {inject};
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.injected_frames, 1u);
  EXPECT_EQ(r.metrics.inject_accepted, 0u);
  EXPECT_EQ(r.metrics.rejected_no_key, 3u);
}

TEST(BusSim, InjectCollidingWithHonestHeadIsFault) {
  Scenario s = base_scenario();
  s.schedule = {{2, "engine", 0x120, 1}};
  AttackerAction inject;
  inject.kind = AttackKind::inject;
  inject.tick = 2;
  inject.frame = CanFrame::data_frame_u64(0x120, 0);
  s.attacker = {inject};
  EXPECT_THROW(run_scenario(s), SimulationFault);
}

TEST(BusSim, FrameLevelModifyIsRejected) {
  Scenario s = base_scenario();
  for (std::uint64_t t = 0; t < 8; ++t) s.schedule.push_back({t, "engine", 0x120, t + 77});
  AttackerAction mod;
  mod.kind = AttackKind::modify;
  mod.bits = {3};
  s.attacker = {mod};
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.modified_frames, 8u);
  EXPECT_EQ(r.metrics.modified_accepted, 0u);
  EXPECT_EQ(r.metrics.rejected_bad_tag, 16u);
  EXPECT_EQ(r.metrics.link_errors, 0u);
}

TEST(BusSim, RandomBitModifyIsDeterministicPerSeed) {
  Scenario s = base_scenario();
  for (std::uint64_t t = 0; t < 8; ++t) s.schedule.push_back({t, "engine", 0x120, t});
  AttackerAction mod;
  mod.kind = AttackKind::modify;
  mod.random_bits = 2;
  s.attacker = {mod};
  const RunResult a = run_scenario(s);
  const RunResult b = run_scenario(s);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.metrics.modified_accepted, 0u);
}

TEST(BusSim, WireLevelModifyCausesLinkError) {
  Scenario s = base_scenario();
  s.schedule = {{0, "engine", 0x120, 5}};
  AttackerAction mod;
  mod.kind = AttackKind::modify;
  mod.layer = ModifyLayer::wire;
  mod.bits = {30};
  s.attacker = {mod};
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.link_errors, 2u);
  EXPECT_EQ(r.metrics.acked_frames, 0u);
  EXPECT_EQ(r.metrics.accepted, 0u);
}

TEST(BusSim, PlainNodesAcceptAnything) {
  Scenario s = base_scenario();
  s.nodes.push_back({"legacy", {0x050}, false});
  s.schedule = {{0, "legacy", 0x050, 0xFFFFFFFFFFFFFFFFull}};
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.per_node.at("legacy").sent, 1u);
  // Secured receivers have no key for 0x050.
  EXPECT_EQ(r.metrics.rejected_no_key, 3u);
}

TEST(BusSim, ConfigErrors) {
  Scenario s = base_scenario();
  s.schedule = {{0, "nobody", 0x120, 1}};
  EXPECT_THROW(BusSimulator{s}, ConfigError);
  s.schedule = {{0, "engine", 0x121, 1}};
  EXPECT_THROW(BusSimulator{s}, ConfigError);
  s.schedule = {{0, "engine", 0x120, 1ull << 40}};
  EXPECT_THROW(BusSimulator{s}, ConfigError);
  s = base_scenario();
  s.nodes.push_back({"attacker", {}, true});
  EXPECT_THROW(BusSimulator{s}, ConfigError);
  s = base_scenario();
  AttackerAction mod;
  mod.kind = AttackKind::modify;
  s.attacker = {mod};
  EXPECT_THROW(BusSimulator{s}, ConfigError);
}

TEST(BusSim, BatchMatchesSerial) {
  std::vector<Scenario> batch;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Scenario s = base_scenario();
    s.seed = seed;
    for (std::uint64_t t = 0; t < 10; ++t) s.schedule.push_back({t, "engine", 0x120, t * seed});
    AttackerAction mod;
    mod.kind = AttackKind::modify;
    mod.random_bits = 1;
    mod.tick = seed;
    s.attacker = {mod};
    batch.push_back(s);
  }
  const auto serial = run_batch_serial(batch);
  const auto parallel = run_batch(batch);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].events, parallel[i].events);
    EXPECT_EQ(serial[i].metrics.rows(), parallel[i].metrics.rows());
  }
}
