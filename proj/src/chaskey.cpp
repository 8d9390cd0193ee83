#include "toucan/chaskey.hpp"

#include <bit>
#include <string>

#include "toucan/errors.hpp"

namespace toucan {
namespace {

inline std::uint32_t load_le32(const std::uint8_t* p) noexcept {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void store_le32(std::uint8_t* p, std::uint32_t v) noexcept {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

inline void round(Words128& v) noexcept {
  v[0] += v[1]; v[1] = std::rotl(v[1], 5);  v[1] ^= v[0]; v[0] = std::rotl(v[0], 16);
  v[2] += v[3]; v[3] = std::rotl(v[3], 8);  v[3] ^= v[2];
  v[0] += v[3]; v[3] = std::rotl(v[3], 13); v[3] ^= v[0];
  v[2] += v[1]; v[1] = std::rotl(v[1], 7);  v[1] ^= v[2]; v[2] = std::rotl(v[2], 16);
}

inline void permute_unchecked(Words128& v, int rounds) noexcept {
  for (int r = 0; r < rounds; ++r) round(v);
}

void check_rounds(int rounds) {
  if (rounds != kChaskeyRounds && rounds != kChaskey12Rounds) {
    throw ConfigError("unsupported Chaskey round count " + std::to_string(rounds) +
                      " (expected 8 or 12)");
  }
}

inline void xor_into(Words128& v, const Words128& w) noexcept {
  for (int i = 0; i < 4; ++i) v[i] ^= w[i];
}

}  // namespace

Words128 gf128_double(const Words128& in) noexcept {
  const std::uint32_t carry = in[3] >> 31;
  return {(in[0] << 1) ^ (carry * 0x87u), (in[1] << 1) | (in[0] >> 31),
          (in[2] << 1) | (in[1] >> 31), (in[3] << 1) | (in[2] >> 31)};
}

Subkeys derive_subkeys(const Words128& k) noexcept {
  Subkeys s;
  s.k1 = gf128_double(k);
  s.k2 = gf128_double(s.k1);
  return s;
}

ChaskeyKey::ChaskeyKey(const Words128& key) : k_(key) {
  const auto s = derive_subkeys(k_);
  k1_ = s.k1;
  k2_ = s.k2;
}

ChaskeyKey::ChaskeyKey(const Block128& key)
    : ChaskeyKey(Words128{load_le32(&key[0]), load_le32(&key[4]), load_le32(&key[8]),
                          load_le32(&key[12])}) {}

ChaskeyState permute(ChaskeyState state, int rounds) {
  check_rounds(rounds);
  permute_unchecked(state.v, rounds);
  return state;
}

Tag chaskey_mac(const ChaskeyKey& key, std::span<const std::uint8_t> message, int rounds) {
  check_rounds(rounds);
  Words128 v = key.k();
  const std::uint8_t* p = message.data();
  std::size_t remaining = message.size();

  // Every block except the last goes through the plain absorb path.
  while (remaining > 16) {
    Words128 m{load_le32(p), load_le32(p + 4), load_le32(p + 8), load_le32(p + 12)};
    xor_into(v, m);
    permute_unchecked(v, rounds);
    p += 16;
    remaining -= 16;
  }

  std::uint8_t last[16] = {};
  const Words128* subkey = nullptr;
  if (remaining == 16) {
    for (int i = 0; i < 16; ++i) last[i] = p[i];
    subkey = &key.k1();
  } else {
    for (std::size_t i = 0; i < remaining; ++i) last[i] = p[i];
    last[remaining] = 0x01;
    subkey = &key.k2();
  }
  xor_into(v, Words128{load_le32(last), load_le32(last + 4), load_le32(last + 8),
                       load_le32(last + 12)});
  xor_into(v, *subkey);
  permute_unchecked(v, rounds);
  xor_into(v, *subkey);

  Tag tag;
  for (int i = 0; i < 4; ++i) store_le32(&tag.bytes[4 * i], v[i]);
  return tag;
}

bool is_supported_tag_width(unsigned width) noexcept {
  switch (width) {
    case 8: case 12: case 16: case 24: case 32: case 64: case 128:
      return true;
    default:
      return false;
  }
}

TruncatedTag truncate_tag(const Tag& tag, unsigned width) {
  if (!is_supported_tag_width(width)) {
    throw RangeError("unsupported tag width " + std::to_string(width));
  }
  TruncatedTag out;
  out.width = width;
  const std::size_t n = out.byte_length();
  for (std::size_t i = 0; i < n; ++i) out.bytes[i] = tag.bytes[i];
  if (const unsigned spare = static_cast<unsigned>(n * 8 - width); spare != 0) {
    out.bytes[n - 1] &= static_cast<std::uint8_t>(0xFFu << spare);
  }
  return out;
}

std::uint64_t TruncatedTag::value() const {
  if (width > 64) throw RangeError("tag wider than 64 bits has no integer value");
  std::uint64_t acc = 0;
  const std::size_t n = byte_length();
  for (std::size_t i = 0; i < n; ++i) acc = (acc << 8) | bytes[i];
  return acc >> (n * 8 - width);
}

}  // namespace toucan
