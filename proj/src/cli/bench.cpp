#include "cli/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#ifdef __linux__
#include <sched.h>
#include <sys/utsname.h>
#endif

#include "toucan/aes128.hpp"
#include "toucan/chaskey.hpp"

namespace toucan::cli {
namespace {

using Clock = std::chrono::steady_clock;

// Operations per timed sample; steady_clock reads cost tens of nanoseconds,
// so single-op timings would be dominated by the clock itself.
constexpr std::uint64_t kBatch = 64;

volatile std::uint64_t g_sink = 0;

void pin_to_current_cpu() {
#ifdef __linux__
  const int cpu = sched_getcpu();
  if (cpu < 0) return;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  sched_setaffinity(0, sizeof set, &set);
#endif
}

template <typename Op>
BenchReport measure(const std::string& name, std::uint64_t iterations, Op&& op) {
  // Warm caches and tables.
  std::uint64_t acc = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) acc ^= op(i);

  const std::uint64_t samples = (iterations + kBatch - 1) / kBatch;
  std::vector<double> per_op(samples);
  double total_ns = 0;
  std::uint64_t done = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const std::uint64_t n = std::min(kBatch, iterations - done);
    const auto t0 = Clock::now();
    for (std::uint64_t i = 0; i < n; ++i) acc ^= op(done + i);
    const auto t1 = Clock::now();
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    total_ns += ns;
    per_op[s] = ns / static_cast<double>(n);
    done += n;
  }
  g_sink = g_sink ^ acc;

  std::sort(per_op.begin(), per_op.end());
  auto quantile = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(per_op.size()))) - 1;
    return per_op[std::min(idx, per_op.size() - 1)];
  };
  BenchReport r;
  r.algorithm = name;
  r.source = "measured";
  r.input_bytes = 8;
  r.iterations = iterations;
  r.mean_ns = total_ns / static_cast<double>(iterations);
  r.median_ns = quantile(0.5);
  r.p99_ns = quantile(0.99);
  return r;
}

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return line.substr(colon + 2);
    }
  }
  return "unknown cpu";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string host_descriptor(int chaskey_rounds) {
  std::string host = cpu_model();
#ifdef __linux__
  utsname u{};
  if (uname(&u) == 0) host += std::string("; ") + u.sysname + " " + u.release + " " + u.machine;
#endif
#if defined(__clang__)
  host += "; clang " __clang_version__;
#elif defined(__GNUC__)
  host += "; gcc " __VERSION__;
#endif
  host += "; chaskey rounds " + std::to_string(chaskey_rounds);
  host += "; steady_clock, " + std::to_string(kBatch) + " ops per sample";
  return host;
}

std::vector<BenchReport> run_bench(const BenchOptions& options) {
  if (options.iterations == 0) throw std::invalid_argument("iterations must be positive");
  if (options.chaskey_rounds != kChaskeyRounds && options.chaskey_rounds != kChaskey12Rounds) {
    throw std::invalid_argument("chaskey rounds must be 8 or 12");
  }
  if (options.pin_cpu) pin_to_current_cpu();

  const Block128 key = {0x00, 0x11, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77,
                        0x88, 0x99, 0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0xff};
  const ChaskeyKey mac_key(key);
  const Aes128Key enc_key(key);
  const int rounds = options.chaskey_rounds;

  std::vector<BenchReport> rows;
  rows.push_back(measure(rounds == 8 ? "chaskey" : "chaskey12", options.iterations, [&](std::uint64_t i) {
    std::uint8_t field[8];
    for (int b = 0; b < 8; ++b) field[b] = static_cast<std::uint8_t>(i >> (8 * b));
    const auto tag = truncate_tag(chaskey_mac(mac_key, field, rounds), 24);
    return std::uint64_t{tag.bytes[0]} | (std::uint64_t{tag.bytes[1]} << 8) | (std::uint64_t{tag.bytes[2]} << 16);
  }));
  rows.push_back(measure("aes128-ctr", options.iterations, [&](std::uint64_t i) {
    return encrypt_data_field(enc_key, CtrContext::for_identifier(static_cast<std::uint16_t>(i & 0x7FF)), i);
  }));

  const std::string host = host_descriptor(rounds);
  for (auto& r : rows) r.host = host;
  return rows;
}

std::vector<BenchReport> reference_rows() {
  const std::string host = "STM32F407 Discovery, ARM Cortex-M4 @ 84 MHz (published figures, not measured)";
  return {
      {"aes128", "reference", 8, 0, 11650.0, 11650.0, 11650.0, host},
      {"chaskey", "reference", 8, 0, 11900.0, 11900.0, 11900.0, host},
  };
}

void write_bench_csv(std::ostream& out, const std::vector<BenchReport>& rows) {
  out << kBenchCsvHeader << '\n';
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%llu,%.3f,%.3f,%.3f", r.input_bytes,
                  static_cast<unsigned long long>(r.iterations), r.mean_ns, r.median_ns, r.p99_ns);
    out << csv_field(r.algorithm) << ',' << r.source << ',' << buf << ',' << csv_field(r.host) << '\n';
  }
}

void write_bench_table(std::ostream& out, const std::vector<BenchReport>& rows) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-12s %-10s %6s %10s %12s %12s %12s\n", "algorithm", "source", "bytes",
                "iterations", "mean [us]", "median [us]", "p99 [us]");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %-10s %6zu %10llu %12.4f %12.4f %12.4f\n", r.algorithm.c_str(),
                  r.source.c_str(), r.input_bytes, static_cast<unsigned long long>(r.iterations),
                  r.mean_ns / 1000.0, r.median_ns / 1000.0, r.p99_ns / 1000.0);
    out << buf;
  }
  for (const auto& r : rows) {
    if (r.source == "measured") {
      out << "host: " << r.host << '\n';
      break;
    }
  }
  for (const auto& r : rows) {
    if (r.source == "reference") {
      out << "reference rows: " << r.host << '\n';
      break;
    }
  }
}

void write_bench_json(std::ostream& out, const std::vector<BenchReport>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    j.push_back({{"algorithm", r.algorithm}, {"source", r.source},   {"input_bytes", r.input_bytes},
                 {"iterations", r.iterations}, {"mean_ns", r.mean_ns}, {"median_ns", r.median_ns},
                 {"p99_ns", r.p99_ns},       {"host", r.host}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace toucan::cli
