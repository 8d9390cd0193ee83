#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "cli/bench.hpp"
#include "toucan/candump.hpp"
#include "toucan/errors.hpp"
#include "toucan/hex.hpp"
#include "toucan/keystore.hpp"
#include "toucan/protocol.hpp"
#include "toucan/scenario.hpp"

namespace toucan::cli {
namespace {

struct ProfileFlags {
  std::string algorithm = "chaskey";
  unsigned tag_bits = 24;
  bool bind_id = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--profile", algorithm, "MAC algorithm: chaskey, chaskey12 or cmac")
        ->check(CLI::IsMember({"chaskey", "chaskey12", "cmac"}));
    cmd->add_option("--tag-bits", tag_bits, "Truncated MAC length in bits")
        ->check(CLI::IsMember({8u, 12u, 16u, 24u, 32u}));
    cmd->add_flag("--bind-id", bind_id, "Include the identifier in the MAC input");
  }

  SecOcProfile build() const {
    SecOcProfile p;
    p.algorithm = parse_mac_algorithm(algorithm, &p.chaskey_rounds);
    p.mac_tx_len = tag_bits;
    p.bind_id = bind_id;
    p.validate();
    return p;
  }
};

std::string payload_hex(std::uint64_t payload, unsigned bits) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%0*llx", static_cast<int>((bits + 3) / 4),
                static_cast<unsigned long long>(payload));
  return buf;
}

int cmd_bench(std::uint64_t iterations, int rounds, const std::string& format, const std::string& csv_path,
              bool no_pin, std::ostream& out, std::ostream& err) {
  BenchOptions opts;
  opts.iterations = iterations;
  opts.chaskey_rounds = rounds;
  opts.pin_cpu = !no_pin;
  auto rows = run_bench(opts);
  if (iterations < 10000) err << "note: fewer than 10^4 iterations; timings are indicative only\n";
  const auto refs = reference_rows();
  rows.insert(rows.end(), refs.begin(), refs.end());

  if (format == "csv") {
    write_bench_csv(out, rows);
  } else if (format == "json") {
    write_bench_json(out, rows);
  } else {
    write_bench_table(out, rows);
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) {
      err << "error: cannot write '" << csv_path << "'\n";
      return kDataError;
    }
    write_bench_csv(f, rows);
  }
  return kOk;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, const std::string& events_path,
            const std::string& metrics_path, const std::string& format, std::ostream& out, std::ostream& err) {
  sim::Scenario scenario;
  try {
    scenario = sim::load_scenario(scenario_path, seed);
  } catch (const std::exception& e) {
    err << "error: " << scenario_path << ": " << e.what() << '\n';
    return kDataError;
  }

  sim::RunResult result;
  try {
    result = sim::run_scenario(scenario);
  } catch (const SimulationFault& e) {
    err << "simulation fault: " << e.what() << '\n';
    return kSimulationFault;
  }

  auto write_to = [&](const std::string& path, auto&& writer) -> bool {
    if (path.empty()) return true;
    if (path == "-") {
      writer(out);
      return true;
    }
    std::ofstream f(path);
    if (!f) {
      err << "error: cannot write '" << path << "'\n";
      return false;
    }
    writer(f);
    return true;
  };
  if (!write_to(events_path, [&](std::ostream& o) { sim::write_event_log(o, result.events); })) return kDataError;
  if (!write_to(metrics_path, [&](std::ostream& o) { sim::write_metrics_csv(o, result.metrics); })) {
    return kDataError;
  }
  if (events_path != "-" && metrics_path != "-") {
    if (format == "json") {
      out << sim::metrics_to_json(result.metrics).dump(2) << '\n';
    } else {
      sim::write_metrics_csv(out, result.metrics);
    }
  }
  return kOk;
}

int cmd_analyze(const std::string& log_path, const std::string& keys_path, const SecOcProfile& profile,
                const std::string& format, std::ostream& out, std::ostream& err) {
  KeyStore keys;
  std::vector<CandumpRecord> records;
  try {
    keys = load_keystore(keys_path);
    std::ifstream in(log_path);
    if (!in) throw std::runtime_error("cannot open log '" + log_path + "'");
    records = read_candump(in);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }

  std::uint64_t accepted = 0;
  nlohmann::json verdicts = nlohmann::json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const Verdict v = secure_receive(rec.frame, keys, profile);
    char id[8];
    std::snprintf(id, sizeof id, "%03X", static_cast<unsigned>(rec.frame.id));
    if (v.accepted) ++accepted;
    if (format == "json") {
      nlohmann::json j = {{"frame", i}, {"id", id}, {"verdict", v.accepted ? "accept" : "reject"}};
      if (v.accepted) {
        j["payload"] = payload_hex(v.payload, profile.payload_bits());
      } else {
        j["reason"] = to_string(v.reason);
      }
      verdicts.push_back(j);
    } else if (v.accepted) {
      out << id << " accept " << payload_hex(v.payload, profile.payload_bits()) << '\n';
    } else {
      out << id << " reject " << to_string(v.reason) << '\n';
    }
  }
  const std::uint64_t rejected = records.size() - accepted;
  if (format == "json") {
    out << nlohmann::json{{"frames", verdicts},
                          {"summary", {{"frames", records.size()}, {"accepted", accepted}, {"rejected", rejected}}}}
               .dump(2)
        << '\n';
  } else {
    out << "frames=" << records.size() << " accepted=" << accepted << " rejected=" << rejected << '\n';
  }
  return kOk;
}

int cmd_wrap(const std::string& payload_text, const std::string& id_text, const std::string& keys_path,
             const SecOcProfile& profile, const std::string& channel, std::ostream& out, std::ostream& err) {
  try {
    const std::uint64_t id = parse_hex_u64(id_text);
    if (id > kMaxStandardId) throw RangeError("identifier exceeds 0x7FF");
    const std::uint64_t payload = parse_hex_u64(payload_text);
    if (payload_text.size() > 2 && payload >> profile.payload_bits()) {
      throw RangeError("payload exceeds " + std::to_string(profile.payload_bits()) + " bits");
    }
    const KeyStore keys = load_keystore(keys_path);
    CandumpRecord rec;
    rec.channel = channel;
    rec.frame = secure_send(payload, static_cast<std::uint16_t>(id), keys, profile);
    out << format_candump_line(rec) << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secured CAN Data-field toolkit: benchmark, simulate, wrap and analyze frames", "toucan"};
  app.require_subcommand(1);

  auto* bench = app.add_subcommand("bench", "Time the per-field MAC and encryption primitives");
  std::uint64_t iterations = 100000;
  int rounds = 8;
  std::string bench_format = "table";
  std::string bench_csv;
  bool no_pin = false;
  bench->add_option("--iterations", iterations, "Operations per primitive")->check(CLI::PositiveNumber);
  bench->add_option("--rounds", rounds, "Chaskey rounds (8 or 12)")->check(CLI::IsMember({8, 12}));
  bench->add_option("--format", bench_format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  bench->add_option("--csv", bench_csv, "Also write the CSV report to this file");
  bench->add_flag("--no-pin", no_pin, "Do not pin the process to one CPU");

  auto* run_cmd = app.add_subcommand("run", "Run a bus scenario");
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string events_path;
  std::string metrics_path;
  std::string run_format = "csv";
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--events", events_path, "Write the event log (JSON lines); '-' for stdout");
  run_cmd->add_option("--metrics", metrics_path, "Write metrics CSV; '-' for stdout");
  run_cmd->add_option("--format", run_format, "Metrics on stdout as csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* analyze = app.add_subcommand("analyze", "Verify every frame of a candump capture");
  std::string log_path;
  std::string keys_path;
  std::string analyze_format = "text";
  ProfileFlags analyze_profile;
  analyze->add_option("log", log_path, "candump-format capture")->required();
  analyze->add_option("--keys", keys_path, "Key file")->required();
  analyze->add_option("--format", analyze_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  analyze_profile.add_to(analyze);

  auto* wrap = app.add_subcommand("wrap", "Secure one payload and print it as a candump line");
  std::string payload_text;
  std::string id_text;
  std::string wrap_keys;
  std::string channel = "can0";
  ProfileFlags wrap_profile;
  wrap->add_option("payload", payload_text, "Payload as hex (at most 40 bits by default)")->required();
  wrap->add_option("--id", id_text, "11-bit identifier, hex")->required();
  wrap->add_option("--keys", wrap_keys, "Key file")->required();
  wrap->add_option("--channel", channel, "Channel name for the output line");
  wrap_profile.add_to(wrap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*bench) return cmd_bench(iterations, rounds, bench_format, bench_csv, no_pin, out, err);
    if (*run_cmd) return cmd_run(scenario_path, seed, events_path, metrics_path, run_format, out, err);
    if (*analyze) return cmd_analyze(log_path, keys_path, analyze_profile.build(), analyze_format, out, err);
    if (*wrap) return cmd_wrap(payload_text, id_text, wrap_keys, wrap_profile.build(), channel, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace toucan::cli
