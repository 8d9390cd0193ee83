#include "toucan/cmac.hpp"

namespace toucan {
namespace {

// CMAC doubles big-endian, unlike the little-endian word order Chaskey uses.
Block128 dbl(const Block128& in) noexcept {
  Block128 out;
  const std::uint8_t carry = in[0] >> 7;
  for (int i = 0; i < 15; ++i) out[i] = static_cast<std::uint8_t>((in[i] << 1) | (in[i + 1] >> 7));
  out[15] = static_cast<std::uint8_t>((in[15] << 1) ^ (carry ? 0x87 : 0x00));
  return out;
}

}  // namespace

Block128 aes_cmac(const Aes128Key& key, std::span<const std::uint8_t> message) noexcept {
  const Block128 l = aes128_encrypt_block(key, Block128{});
  const Block128 k1 = dbl(l);
  const Block128 k2 = dbl(k1);

  const std::size_t n = message.size();
  const std::size_t blocks = n == 0 ? 1 : (n + 15) / 16;
  const bool complete = n != 0 && n % 16 == 0;

  Block128 x{};
  for (std::size_t b = 0; b + 1 < blocks; ++b) {
    for (int i = 0; i < 16; ++i) x[i] ^= message[16 * b + i];
    x = aes128_encrypt_block(key, x);
  }
  Block128 last{};
  const std::size_t offset = 16 * (blocks - 1);
  if (complete) {
    for (int i = 0; i < 16; ++i) last[i] = message[offset + i] ^ k1[i];
  } else {
    const std::size_t rem = n - offset;
    for (std::size_t i = 0; i < rem; ++i) last[i] = message[offset + i];
    last[rem] = 0x80;
    for (int i = 0; i < 16; ++i) last[i] ^= k2[i];
  }
  for (int i = 0; i < 16; ++i) x[i] ^= last[i];
  return aes128_encrypt_block(key, x);
}

}  // namespace toucan
