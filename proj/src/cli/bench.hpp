#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace toucan::cli {

struct BenchOptions {
  std::uint64_t iterations = 100000;
  int chaskey_rounds = 8;
  bool pin_cpu = true;
};

/// One row of the runtime table. Reference rows carry published board
/// figures and are never measured here.
struct BenchReport {
  std::string algorithm;
  std::string source;  // "measured" or "reference"
  std::size_t input_bytes = 8;
  std::uint64_t iterations = 0;
  double mean_ns = 0;
  double median_ns = 0;
  double p99_ns = 0;
  std::string host;
};

/// Times the per-Data-field Chaskey MAC (24-bit truncation) and AES-128-CTR
/// encryption. Throws std::invalid_argument when iterations is 0.
std::vector<BenchReport> run_bench(const BenchOptions& options);

/// STM32F407 board runtimes, 84 MHz: AES-128 on 8 bytes and Chaskey.
std::vector<BenchReport> reference_rows();

std::string host_descriptor(int chaskey_rounds);

inline constexpr const char* kBenchCsvHeader =
    "algorithm,source,input_bytes,iterations,mean_ns,median_ns,p99_ns,host";

void write_bench_csv(std::ostream& out, const std::vector<BenchReport>& rows);
void write_bench_table(std::ostream& out, const std::vector<BenchReport>& rows);
void write_bench_json(std::ostream& out, const std::vector<BenchReport>& rows);

}  // namespace toucan::cli
