#pragma once

// Secured Data field: a 64-bit CAN Data field holding a payload in the
// high-order bits and a truncated MAC of that payload in the low-order bits,
// then encrypted as a whole with AES-128 in counter mode (MAC-then-encrypt).
//
//   cleartext  = payload (40 bits) || tag (24 bits)      [default profile]
//   wire data  = cleartext XOR AES-128(enc_key, nonce(id) || 0)[0..8)
//
// The default profile carries no freshness value, so the same payload under
// the same identifier and keys always produces the same wire bits. Replays are
// therefore accepted; see the replay scenario under scenarios/.

#include <cstdint>
#include <string>
#include <vector>

#include "toucan/can_frame.hpp"
#include "toucan/chaskey.hpp"
#include "toucan/keystore.hpp"

namespace toucan {

enum class MacAlgorithm { chaskey, aes_cmac };

struct SecOcProfile {
  MacAlgorithm algorithm = MacAlgorithm::chaskey;
  unsigned freshness_len = 0;     // SecOCFreshnessValueLength
  unsigned freshness_tx_len = 0;  // SecOCFreshnessValueTXLength
  unsigned mac_tx_len = 24;       // SecOCAuthInfoTXLength
  int chaskey_rounds = kChaskeyRounds;
  /// Prepend the identifier (2 bytes, big-endian) to the MAC input.
  bool bind_id = false;

  unsigned payload_bits() const noexcept { return 64 - mac_tx_len - freshness_tx_len; }
  std::size_t payload_bytes() const noexcept { return (payload_bits() + 7) / 8; }
  std::string algorithm_label() const;

  /// Throws ConfigError for unsupported widths, non-zero freshness or a bad round count.
  void validate() const;

  /// 0-bit freshness, 0-bit transmitted freshness, 24-bit truncated MAC.
  static SecOcProfile standard() { return {}; }

  friend bool operator==(const SecOcProfile&, const SecOcProfile&) = default;
};

/// Parses "chaskey", "chaskey12" or "cmac". Throws ConfigError.
MacAlgorithm parse_mac_algorithm(std::string_view name, int* rounds = nullptr);

struct DataField {
  std::uint64_t payload = 0;
  std::uint64_t tag = 0;

  friend bool operator==(const DataField&, const DataField&) = default;
};

/// field = payload << tag_bits | tag. Throws RangeError if either part is too wide.
std::uint64_t pack_data_field(std::uint64_t payload, std::uint64_t tag, unsigned tag_bits = 24);
DataField unpack_data_field(std::uint64_t field, unsigned tag_bits = 24) noexcept;

/// The MAC input bytes for a payload: optional identifier prefix, then the
/// payload big-endian in payload_bytes() bytes.
std::vector<std::uint8_t> mac_input(std::uint64_t payload, std::uint16_t id, const SecOcProfile& profile);

/// Truncated tag of `payload` under the record's MAC key.
TruncatedTag compute_tag(const KeyRecord& keys, std::uint16_t id, std::uint64_t payload,
                         const SecOcProfile& profile);

/// Exactly one 8-byte data frame per payload. Throws RangeError when the payload
/// does not fit profile.payload_bits() or the identifier exceeds 11 bits.
CanFrame secure_send(std::uint64_t payload, std::uint16_t id, const KeyRecord& keys,
                     const SecOcProfile& profile = SecOcProfile::standard());
/// Throws MissingKey when no record covers `id`.
CanFrame secure_send(std::uint64_t payload, std::uint16_t id, const KeyStore& store,
                     const SecOcProfile& profile = SecOcProfile::standard());

enum class RejectReason { bad_dlc, bad_tag, no_key };
const char* to_string(RejectReason reason) noexcept;

struct Verdict {
  bool accepted = false;
  std::uint64_t payload = 0;  // valid only when accepted
  RejectReason reason = RejectReason::bad_tag;

  static Verdict accept(std::uint64_t payload) { return {true, payload, RejectReason::bad_tag}; }
  static Verdict reject(RejectReason why) { return {false, 0, why}; }

  friend bool operator==(const Verdict& a, const Verdict& b) {
    return a.accepted == b.accepted && (a.accepted ? a.payload == b.payload : a.reason == b.reason);
  }
};

/// Decrypts, recomputes the tag and compares it in constant time.
Verdict secure_receive(const CanFrame& frame, const KeyRecord& keys,
                       const SecOcProfile& profile = SecOcProfile::standard());
Verdict secure_receive(const CanFrame& frame, const KeyStore& store,
                       const SecOcProfile& profile = SecOcProfile::standard());

/// Equal-length byte comparison whose running time does not depend on where they differ.
bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) noexcept;

/// 2^-mac_tx_len: chance that one random tag guess verifies. Range 1..128.
double forgery_probability(unsigned mac_tx_len);

/// floor(2^(mac_tx_len/2)): tags computable before a collision is expected. Range 1..128.
double collision_bound(unsigned mac_tx_len);

}  // namespace toucan
