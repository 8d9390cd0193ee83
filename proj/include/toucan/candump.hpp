#pragma once

// candump-style capture lines: "(<seconds>.<micros>) <channel> <ID>#<DATA>"
// e.g. "(1436509052.249713) can0 123#DEADBEEF". "ID#R" marks a remote frame.

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "toucan/can_frame.hpp"

namespace toucan {

struct CandumpRecord {
  std::int64_t seconds = 0;
  std::uint32_t micros = 0;
  std::string channel = "can0";
  CanFrame frame;
};

/// Throws ParseError (line number attached when `line_no` is nonzero).
CandumpRecord parse_candump_line(std::string_view line, std::size_t line_no = 0);

std::string format_candump_line(const CandumpRecord& record);

/// Reads every non-blank line. Blank lines and lines starting with '#' are skipped.
std::vector<CandumpRecord> read_candump(std::istream& in);

}  // namespace toucan
