#pragma once

// AES-128 block encryption and the counter-mode keystream used for the
// 64-bit secured Data field.

#include <array>
#include <cstdint>
#include <optional>

#include "toucan/chaskey.hpp"  // Block128

namespace toucan {

/// Expanded AES-128 key: 44 big-endian words, 11 round keys.
class Aes128Key {
 public:
  Aes128Key() : Aes128Key(Block128{}) {}
  explicit Aes128Key(const Block128& key);

  const std::array<std::uint32_t, 44>& schedule() const noexcept { return w_; }
  Block128 round_key(int round) const;

 private:
  std::array<std::uint32_t, 44> w_;
};

Block128 aes128_encrypt_block(const Aes128Key& key, const Block128& block) noexcept;

/// Counter block = 64-bit nonce (high half) || 64-bit big-endian block index (low half).
struct CtrContext {
  std::uint64_t nonce = 0;
  std::uint64_t counter = 0;

  Block128 counter_block() const noexcept;

  /// Default construction: the identifier itself is the nonce, counter 0.
  /// With a session nonce the high half is session_nonce XOR identifier.
  static CtrContext for_identifier(std::uint16_t identifier,
                                   std::optional<std::uint64_t> session_nonce = std::nullopt) noexcept;
};

/// First 64 keystream bits of the context's counter block, big-endian.
std::uint64_t keystream64(const Aes128Key& key, const CtrContext& ctx) noexcept;

std::uint64_t encrypt_data_field(const Aes128Key& key, const CtrContext& ctx,
                                 std::uint64_t field) noexcept;
std::uint64_t decrypt_data_field(const Aes128Key& key, const CtrContext& ctx,
                                 std::uint64_t cipher) noexcept;

}  // namespace toucan
