#pragma once

// Chaskey: permutation-based MAC on 32-bit ARX rounds.
//
// Keys and message blocks are read as four little-endian 32-bit words.
// The full tag is the final state serialized little-endian, so a truncated
// tag is a byte prefix of that serialization.

#include <array>
#include <cstdint>
#include <span>

namespace toucan {

using Block128 = std::array<std::uint8_t, 16>;
using Words128 = std::array<std::uint32_t, 4>;

inline constexpr int kChaskeyRounds = 8;
inline constexpr int kChaskey12Rounds = 12;

struct ChaskeyState {
  Words128 v{};

  friend bool operator==(const ChaskeyState&, const ChaskeyState&) = default;
};

struct Subkeys {
  Words128 k1{};
  Words128 k2{};
};

/// Master key with both subkeys; immutable once built.
class ChaskeyKey {
 public:
  ChaskeyKey() : ChaskeyKey(Block128{}) {}
  explicit ChaskeyKey(const Block128& key);
  explicit ChaskeyKey(const Words128& key);

  const Words128& k() const noexcept { return k_; }
  const Words128& k1() const noexcept { return k1_; }
  const Words128& k2() const noexcept { return k2_; }

 private:
  Words128 k_;
  Words128 k1_;
  Words128 k2_;
};

/// Multiplication by x in GF(2^128) mod x^128 + x^7 + x^2 + x + 1, word 3 most significant.
Words128 gf128_double(const Words128& in) noexcept;

Subkeys derive_subkeys(const Words128& k) noexcept;

/// Applies `rounds` Chaskey rounds. Throws ConfigError unless rounds is 8 or 12.
ChaskeyState permute(ChaskeyState state, int rounds);

struct Tag {
  Block128 bytes{};

  friend bool operator==(const Tag&, const Tag&) = default;
};

/// Full 128-bit Chaskey tag over `message` (empty allowed). Throws ConfigError on a bad round count.
Tag chaskey_mac(const ChaskeyKey& key, std::span<const std::uint8_t> message,
                int rounds = kChaskeyRounds);

/// The first ceil(width/8) bytes of a tag; trailing bits of the last byte beyond `width` are zero.
struct TruncatedTag {
  Block128 bytes{};
  unsigned width = 0;

  std::size_t byte_length() const noexcept { return (width + 7) / 8; }
  std::span<const std::uint8_t> view() const noexcept { return {bytes.data(), byte_length()}; }

  /// Big-endian reading of the prefix, right-aligned to `width` bits. Requires width <= 64.
  std::uint64_t value() const;

  friend bool operator==(const TruncatedTag&, const TruncatedTag&) = default;
};

/// Width must be one of 8, 12, 16, 24, 32, 64, 128; RangeError otherwise.
TruncatedTag truncate_tag(const Tag& tag, unsigned width);

bool is_supported_tag_width(unsigned width) noexcept;

}  // namespace toucan
