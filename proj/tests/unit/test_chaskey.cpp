#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "oracle/chaskey_ref.h"
#include "oracle/fixtures.hpp"
#include "toucan/chaskey.hpp"
#include "toucan/errors.hpp"
#include "toucan/hex.hpp"

using namespace toucan;

namespace {

Block128 block_from_hex(const std::string& hex) {
  Block128 b{};
  from_hex_exact(hex, b);
  return b;
}

Words128 words_le(const Block128& b) {
  Words128 w{};
  for (int i = 0; i < 4; ++i) {
    w[i] = std::uint32_t(b[4 * i]) | std::uint32_t(b[4 * i + 1]) << 8 | std::uint32_t(b[4 * i + 2]) << 16 |
           std::uint32_t(b[4 * i + 3]) << 24;
  }
  return w;
}

// Big-integer doubling on unsigned __int128; word 3 is the top.
Words128 double_u128(const Words128& w) {
  unsigned __int128 x = 0;
  for (int i = 3; i >= 0; --i) x = (x << 32) | w[i];
  const bool carry = (x >> 127) != 0;
  x <<= 1;
  if (carry) x ^= 0x87;
  Words128 out{};
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint32_t>(x >> (32 * i));
  return out;
}

ChaskeyState inverse_permute(ChaskeyState s, int rounds) {
  auto rotr = [](std::uint32_t x, int b) { return (x >> b) | (x << (32 - b)); };
  auto& v = s.v;
  for (int r = 0; r < rounds; ++r) {
    v[2] = rotr(v[2], 16);
    v[1] ^= v[2]; v[1] = rotr(v[1], 7); v[2] -= v[1];
    v[3] ^= v[0]; v[3] = rotr(v[3], 13); v[0] -= v[3];
    v[3] ^= v[2]; v[3] = rotr(v[3], 8); v[2] -= v[3];
    v[0] = rotr(v[0], 16);
    v[1] ^= v[0]; v[1] = rotr(v[1], 5); v[0] -= v[1];
  }
  return s;
}

void check_vector_file(const std::string& name, int rounds) {
  const auto rows = oracle::read_csv_fixture(name);
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 3u);
    const ChaskeyKey key(block_from_hex(row[0]));
    const auto msg = from_hex(row[1]);
    const Tag tag = chaskey_mac(key, msg, rounds);
    EXPECT_EQ(to_hex(tag.bytes), row[2]) << "msg=" << row[1];
  }
}

}  // namespace

TEST(Chaskey, FrozenVectorsEightRounds) { check_vector_file("chaskey_vectors.txt", 8); }

TEST(Chaskey, FrozenVectorsTwelveRounds) { check_vector_file("chaskey12_vectors.txt", 12); }

TEST(Chaskey, SubkeyFixture) {
  for (const auto& row : oracle::read_csv_fixture("subkey_vectors.txt")) {
    const ChaskeyKey key(block_from_hex(row[0]));
    EXPECT_EQ(key.k1(), words_le(block_from_hex(row[1])));
    EXPECT_EQ(key.k2(), words_le(block_from_hex(row[2])));
  }
}

TEST(Chaskey, AllOnesSubkeys) {
  const ChaskeyKey key(Words128{~0u, ~0u, ~0u, ~0u});
  EXPECT_EQ(key.k1(), (Words128{0xFFFFFF79u, ~0u, ~0u, ~0u}));
  EXPECT_EQ(key.k2(), (Words128{0xFFFFFE75u, ~0u, ~0u, ~0u}));
}

TEST(Chaskey, SubkeysMatchBigIntegerDoubling) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    Words128 k{};
    for (auto& w : k) w = static_cast<std::uint32_t>(rng());
    const Subkeys s = derive_subkeys(k);
    EXPECT_EQ(s.k1, double_u128(k));
    EXPECT_EQ(s.k2, double_u128(double_u128(k)));
  }
}

TEST(Chaskey, ZeroKeyHasZeroSubkeys) {
  const Subkeys s = derive_subkeys(Words128{});
  EXPECT_EQ(s.k1, Words128{});
  EXPECT_EQ(s.k2, Words128{});
}

TEST(Chaskey, PermuteIsInvertible) {
  std::mt19937_64 rng(3);
  for (int rounds : {8, 12}) {
    for (int i = 0; i < 200; ++i) {
      ChaskeyState s;
      for (auto& w : s.v) w = static_cast<std::uint32_t>(rng());
      EXPECT_EQ(inverse_permute(permute(s, rounds), rounds), s);
    }
  }
}

TEST(Chaskey, PermuteOfZeroIsZero) {
  // Pure ARX without constants fixes the all-zero state.
  EXPECT_EQ(permute(ChaskeyState{}, 8), ChaskeyState{});
}

TEST(Chaskey, PermuteNonzeroState) {
  ChaskeyState s;
  s.v = {1, 0, 0, 0};
  EXPECT_NE(permute(s, 8), s);
}

TEST(Chaskey, RejectsOtherRoundCounts) {
  for (int r : {0, 1, 7, 9, 16}) EXPECT_THROW(permute(ChaskeyState{}, r), ConfigError);
  EXPECT_THROW(chaskey_mac(ChaskeyKey{}, {}, 10), ConfigError);
}

TEST(Chaskey, MatchesCReferenceOnRandomInputs) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    Block128 key{};
    for (auto& b : key) b = static_cast<std::uint8_t>(rng());
    std::vector<std::uint8_t> msg(rng() % 65);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    const int rounds = (i % 4 == 0) ? 12 : 8;
    std::uint8_t expect[16];
    oracle::ref_chaskey(expect, msg.data(), msg.size(), key.data(), rounds);
    const Tag t = chaskey_mac(ChaskeyKey(key), msg, rounds);
    ASSERT_EQ(0, std::memcmp(expect, t.bytes.data(), 16)) << "len=" << msg.size();
  }
}

TEST(Chaskey, PaddedAndFullBlocksDiffer) {
  // 16 bytes end on a full block; 15 bytes plus the 0x01 pad would otherwise collide.
  ChaskeyKey key(block_from_hex("33343d839f389f004fe6982339cf7a41"));
  std::vector<std::uint8_t> full(16, 0);
  full[15] = 0x01;
  std::vector<std::uint8_t> padded(15, 0);
  EXPECT_NE(chaskey_mac(key, full), chaskey_mac(key, padded));
}

TEST(Chaskey, KeyBitFlipChangesTag) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    Block128 key{};
    for (auto& b : key) b = static_cast<std::uint8_t>(rng());
    std::array<std::uint8_t, 5> msg{};
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    Block128 other = key;
    const auto bit = rng() % 128;
    other[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_NE(chaskey_mac(ChaskeyKey(key), msg), chaskey_mac(ChaskeyKey(other), msg));
  }
}

TEST(TruncatedTag, PrefixAndMask) {
  Tag t;
  for (int i = 0; i < 16; ++i) t.bytes[i] = static_cast<std::uint8_t>(0xA0 + i);
  const auto t24 = truncate_tag(t, 24);
  EXPECT_EQ(t24.byte_length(), 3u);
  EXPECT_EQ(t24.value(), 0xA0A1A2u);
  EXPECT_EQ(to_hex(t24.view()), "a0a1a2");

  const auto t12 = truncate_tag(t, 12);
  EXPECT_EQ(t12.byte_length(), 2u);
  EXPECT_EQ(t12.bytes[1], 0xA0);  // low nibble of 0xA1 masked away
  EXPECT_EQ(t12.value(), 0xA0Au);

  const auto t64 = truncate_tag(t, 64);
  EXPECT_EQ(t64.value(), 0xA0A1A2A3A4A5A6A7ull);

  const auto t128 = truncate_tag(t, 128);
  EXPECT_EQ(t128.bytes, t.bytes);
  EXPECT_THROW((void)t128.value(), RangeError);
}

TEST(TruncatedTag, RejectsUnsupportedWidths) {
  for (unsigned w : {0u, 1u, 7u, 20u, 48u, 129u}) {
    EXPECT_FALSE(is_supported_tag_width(w));
    EXPECT_THROW(truncate_tag(Tag{}, w), RangeError);
  }
  for (unsigned w : {8u, 12u, 16u, 24u, 32u, 64u, 128u}) EXPECT_TRUE(is_supported_tag_width(w));
}
