#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace toucan {

/// Lowercase hex encoding.
std::string to_hex(std::span<const std::uint8_t> bytes);

/// Accepts upper or lower case, optional "0x" prefix; throws ParseError on
/// odd length or a non-hex digit.
std::vector<std::uint8_t> from_hex(std::string_view text);

/// Parses an unsigned hex integer (optional "0x" prefix). Throws ParseError.
std::uint64_t parse_hex_u64(std::string_view text);

/// Fills `out` from exactly 2*out.size() hex digits; throws ParseError otherwise.
void from_hex_exact(std::string_view text, std::span<std::uint8_t> out);

}  // namespace toucan
