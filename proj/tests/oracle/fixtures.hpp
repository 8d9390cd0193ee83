// Reads the comma-separated hex fixture files under tests/fixtures.
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef TOUCAN_FIXTURE_DIR
#error "TOUCAN_FIXTURE_DIR must be defined"
#endif

namespace oracle {

inline std::string fixture_path(const std::string& name) { return std::string(TOUCAN_FIXTURE_DIR) + "/" + name; }

inline std::vector<std::vector<std::string>> read_csv_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace oracle
