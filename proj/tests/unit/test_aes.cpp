#include <gtest/gtest.h>

#include <random>

#include "oracle/fixtures.hpp"
#include "oracle/openssl_oracle.hpp"
#include "toucan/aes128.hpp"
#include "toucan/cmac.hpp"
#include "toucan/hex.hpp"

using namespace toucan;

namespace {

Block128 b16(const std::string& hex) {
  Block128 b{};
  from_hex_exact(hex, b);
  return b;
}

Block128 random_block(std::mt19937_64& rng) {
  Block128 b{};
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

}  // namespace

TEST(Aes128, Fips197AppendixC) {
  const Aes128Key key(b16("000102030405060708090a0b0c0d0e0f"));
  const auto ct = aes128_encrypt_block(key, b16("00112233445566778899aabbccddeeff"));
  EXPECT_EQ(to_hex(ct), "69c4e0d86a7b0430d8cdb78070b4c55a");
}

TEST(Aes128, Fips197AppendixB) {
  const Aes128Key key(b16("2b7e151628aed2a6abf7158809cf4f3c"));
  const auto ct = aes128_encrypt_block(key, b16("3243f6a8885a308d313198a2e0370734"));
  EXPECT_EQ(to_hex(ct), "3925841d02dc09fbdc118597196a0b32");
}

TEST(Aes128, KeyExpansionLastWord) {
  // FIPS-197 Appendix A.1: w[43] for key 2b7e1516...
  const Aes128Key key(b16("2b7e151628aed2a6abf7158809cf4f3c"));
  EXPECT_EQ(key.schedule()[43], 0xb6630ca6u);
  EXPECT_EQ(to_hex(key.round_key(0)), "2b7e151628aed2a6abf7158809cf4f3c");
}

TEST(Aes128, MatchesOpenSslAndInverts) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Block128 k = random_block(rng);
    const Block128 pt = random_block(rng);
    const Block128 ct = aes128_encrypt_block(Aes128Key(k), pt);
    EXPECT_EQ(ct, oracle::aes_ecb(k, pt, true));
    EXPECT_EQ(oracle::aes_ecb(k, ct, false), pt);
  }
}

TEST(Aes128, FrozenKeystreamFixture) {
  const auto rows = oracle::read_csv_fixture("aes_vectors.txt");
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    EXPECT_EQ(to_hex(aes128_encrypt_block(Aes128Key(b16(row[0])), b16(row[1]))), row[2]);
  }
}

TEST(AesCtr, CounterBlockLayout) {
  const CtrContext ctx{0x0123456789ABCDEFull, 2};
  EXPECT_EQ(to_hex(ctx.counter_block()), "0123456789abcdef0000000000000002");
  const auto plain = CtrContext::for_identifier(0x123);
  EXPECT_EQ(plain.nonce, 0x123u);
  EXPECT_EQ(plain.counter, 0u);
  const auto session = CtrContext::for_identifier(0x123, 0xFFFF0000FFFF0000ull);
  EXPECT_EQ(session.nonce, 0xFFFF0000FFFF0123ull);
}

TEST(AesCtr, MatchesOpenSslCtr) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Block128 k = random_block(rng);
    const CtrContext ctx{rng(), rng()};
    const std::uint64_t field = rng();
    std::vector<std::uint8_t> pt(8);
    for (int b = 0; b < 8; ++b) pt[b] = static_cast<std::uint8_t>(field >> (56 - 8 * b));
    const auto expect = oracle::aes_ctr(k, ctx.counter_block(), pt);
    std::uint64_t want = 0;
    for (auto b : expect) want = want << 8 | b;

    const Aes128Key key(k);
    EXPECT_EQ(encrypt_data_field(key, ctx, field), want);
    EXPECT_EQ(decrypt_data_field(key, ctx, want), field);
  }
}

TEST(AesCtr, BitFlipIsMalleable) {
  const Aes128Key key(b16("000102030405060708090a0b0c0d0e0f"));
  const auto ctx = CtrContext::for_identifier(0x42);
  const std::uint64_t field = 0x1122334455667788ull;
  const std::uint64_t ct = encrypt_data_field(key, ctx, field);
  for (int bit = 0; bit < 64; ++bit) {
    EXPECT_EQ(decrypt_data_field(key, ctx, ct ^ (1ull << bit)), field ^ (1ull << bit));
  }
}

TEST(AesCmac, Rfc4493Vectors) {
  const Aes128Key key(b16("2b7e151628aed2a6abf7158809cf4f3c"));
  EXPECT_EQ(to_hex(aes_cmac(key, {})), "bb1d6929e95937287fa37d129b756746");
  EXPECT_EQ(to_hex(aes_cmac(key, from_hex("6bc1bee22e409f96e93d7e117393172a"))),
            "070a16b46b4d4144f79bdd9dd04a287c");
  EXPECT_EQ(to_hex(aes_cmac(key, from_hex("6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
                                          "30c81c46a35ce411"))),
            "dfa66747de9ae63030ca32611497c827");
}

TEST(AesCmac, MatchesOpenSsl) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    const Block128 k = random_block(rng);
    std::vector<std::uint8_t> msg(rng() % 70);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(aes_cmac(Aes128Key(k), msg), oracle::aes_cmac(k, msg)) << "len=" << msg.size();
  }
}
