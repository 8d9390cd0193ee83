#include "toucan/hex.hpp"

#include "toucan/errors.hpp"

namespace toucan {
namespace {

int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string_view strip_prefix(std::string_view text) {
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
  }
  return text;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view text) {
  text = strip_prefix(text);
  if (text.size() % 2 != 0) {
    throw ParseError("odd number of hex digits in '" + std::string(text) + "'");
  }
  std::vector<std::uint8_t> out(text.size() / 2);
  from_hex_exact(text, out);
  return out;
}

void from_hex_exact(std::string_view text, std::span<std::uint8_t> out) {
  text = strip_prefix(text);
  if (text.size() != out.size() * 2) {
    throw ParseError("expected " + std::to_string(out.size() * 2) + " hex digits, got " +
                     std::to_string(text.size()));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(text[2 * i]);
    const int lo = nibble(text[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw ParseError("malformed hex '" + std::string(text) + "'");
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
}

std::uint64_t parse_hex_u64(std::string_view text) {
  text = strip_prefix(text);
  if (text.empty() || text.size() > 16) {
    throw ParseError("bad hex integer '" + std::string(text) + "'");
  }
  std::uint64_t value = 0;
  for (char c : text) {
    const int n = nibble(c);
    if (n < 0) throw ParseError("bad hex integer '" + std::string(text) + "'");
    value = (value << 4) | static_cast<std::uint64_t>(n);
  }
  return value;
}

}  // namespace toucan
