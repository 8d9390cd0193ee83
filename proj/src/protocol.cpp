#include "toucan/protocol.hpp"

#include <cmath>

#include "toucan/aes128.hpp"
#include "toucan/cmac.hpp"
#include "toucan/errors.hpp"

namespace toucan {

std::string SecOcProfile::algorithm_label() const {
  switch (algorithm) {
    case MacAlgorithm::chaskey:
      return chaskey_rounds == kChaskey12Rounds ? "Chaskey-12 + AES-128-CTR" : "Chaskey + AES-128-CTR";
    case MacAlgorithm::aes_cmac:
      return "CMAC/AES-128";
  }
  return "unknown";
}

void SecOcProfile::validate() const {
  if (freshness_tx_len > freshness_len) {
    throw ConfigError("transmitted freshness length exceeds freshness length");
  }
  if (freshness_len != 0) {
    throw ConfigError("freshness values are not supported (profile requires 0 bits)");
  }
  switch (mac_tx_len) {
    case 8: case 12: case 16: case 24: case 32:
      break;
    default:
      throw ConfigError("truncated MAC length must be 8, 12, 16, 24 or 32 bits, got " +
                        std::to_string(mac_tx_len));
  }
  if (chaskey_rounds != kChaskeyRounds && chaskey_rounds != kChaskey12Rounds) {
    throw ConfigError("Chaskey rounds must be 8 or 12");
  }
}

MacAlgorithm parse_mac_algorithm(std::string_view name, int* rounds) {
  if (name == "chaskey" || name == "chaskey8") {
    if (rounds) *rounds = kChaskeyRounds;
    return MacAlgorithm::chaskey;
  }
  if (name == "chaskey12") {
    if (rounds) *rounds = kChaskey12Rounds;
    return MacAlgorithm::chaskey;
  }
  if (name == "cmac") return MacAlgorithm::aes_cmac;
  throw ConfigError("unknown MAC algorithm '" + std::string(name) + "' (chaskey, chaskey12, cmac)");
}

std::uint64_t pack_data_field(std::uint64_t payload, std::uint64_t tag, unsigned tag_bits) {
  if (tag_bits == 0 || tag_bits >= 64) throw RangeError("tag width must be within 1..63 bits");
  const unsigned payload_bits = 64 - tag_bits;
  if (payload >> payload_bits != 0) {
    throw RangeError("payload exceeds " + std::to_string(payload_bits) + " bits");
  }
  if (tag >> tag_bits != 0) throw RangeError("tag exceeds " + std::to_string(tag_bits) + " bits");
  return (payload << tag_bits) | tag;
}

DataField unpack_data_field(std::uint64_t field, unsigned tag_bits) noexcept {
  const std::uint64_t mask = (std::uint64_t{1} << tag_bits) - 1;
  return {field >> tag_bits, field & mask};
}

namespace {

// Payload is at most 56 bits plus a 2-byte identifier.
using MacInputBuffer = std::array<std::uint8_t, 10>;

std::size_t write_mac_input(MacInputBuffer& msg, std::uint64_t payload, std::uint16_t id,
                            const SecOcProfile& profile) noexcept {
  std::size_t len = 0;
  if (profile.bind_id) {
    msg[len++] = static_cast<std::uint8_t>(id >> 8);
    msg[len++] = static_cast<std::uint8_t>(id);
  }
  const std::size_t n = profile.payload_bytes();
  for (std::size_t i = 0; i < n; ++i) msg[len++] = static_cast<std::uint8_t>(payload >> (8 * (n - 1 - i)));
  return len;
}

}  // namespace

std::vector<std::uint8_t> mac_input(std::uint64_t payload, std::uint16_t id, const SecOcProfile& profile) {
  MacInputBuffer msg;
  const std::size_t len = write_mac_input(msg, payload, id, profile);
  return {msg.begin(), msg.begin() + static_cast<std::ptrdiff_t>(len)};
}

TruncatedTag compute_tag(const KeyRecord& keys, std::uint16_t id, std::uint64_t payload,
                         const SecOcProfile& profile) {
  MacInputBuffer msg;
  const std::span<const std::uint8_t> input{msg.data(), write_mac_input(msg, payload, id, profile)};
  Tag full;
  if (profile.algorithm == MacAlgorithm::aes_cmac) {
    full.bytes = aes_cmac(keys.mac_aes(), input);
  } else {
    full = chaskey_mac(keys.chaskey(), input, profile.chaskey_rounds);
  }
  return truncate_tag(full, profile.mac_tx_len);
}

CanFrame secure_send(std::uint64_t payload, std::uint16_t id, const KeyRecord& keys,
                     const SecOcProfile& profile) {
  profile.validate();
  if (id > kMaxStandardId) throw RangeError("identifier exceeds 11 bits");
  if (payload >> profile.payload_bits() != 0) {
    throw RangeError("payload exceeds " + std::to_string(profile.payload_bits()) + " bits");
  }
  const auto tag = compute_tag(keys, id, payload, profile);
  const std::uint64_t field = pack_data_field(payload, tag.value(), profile.mac_tx_len);
  const std::uint64_t wire = encrypt_data_field(keys.cipher(), keys.ctr_for(id), field);
  return CanFrame::data_frame_u64(id, wire);
}

CanFrame secure_send(std::uint64_t payload, std::uint16_t id, const KeyStore& store,
                     const SecOcProfile& profile) {
  const KeyRecord* keys = store.lookup(id);
  if (!keys) throw MissingKey("no key record covers identifier " + std::to_string(id));
  return secure_send(payload, id, *keys, profile);
}

const char* to_string(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::bad_dlc: return "bad_dlc";
    case RejectReason::bad_tag: return "bad_tag";
    case RejectReason::no_key: return "no_key";
  }
  return "unknown";
}

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) noexcept {
  if (a.size() != b.size()) return false;
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<std::uint8_t>(a[i] ^ b[i]);
  return diff == 0;
}

Verdict secure_receive(const CanFrame& frame, const KeyRecord& keys, const SecOcProfile& profile) {
  profile.validate();
  if (frame.rtr || frame.dlc != 8) return Verdict::reject(RejectReason::bad_dlc);

  const std::uint64_t field = decrypt_data_field(keys.cipher(), keys.ctr_for(frame.id), frame.data_u64());
  const DataField parts = unpack_data_field(field, profile.mac_tx_len);
  const TruncatedTag expected = compute_tag(keys, frame.id, parts.payload, profile);

  // Left-align the received tag into bytes the same way truncate_tag lays them out.
  TruncatedTag received;
  received.width = profile.mac_tx_len;
  const std::size_t n = received.byte_length();
  const std::uint64_t aligned = parts.tag << (n * 8 - received.width);
  for (std::size_t i = 0; i < n; ++i) received.bytes[i] = static_cast<std::uint8_t>(aligned >> (8 * (n - 1 - i)));

  if (!constant_time_equal(expected.view(), received.view())) return Verdict::reject(RejectReason::bad_tag);
  return Verdict::accept(parts.payload);
}

Verdict secure_receive(const CanFrame& frame, const KeyStore& store, const SecOcProfile& profile) {
  if (frame.rtr || frame.dlc != 8) return Verdict::reject(RejectReason::bad_dlc);
  const KeyRecord* keys = store.lookup(frame.id);
  if (!keys) return Verdict::reject(RejectReason::no_key);
  return secure_receive(frame, *keys, profile);
}

double forgery_probability(unsigned mac_tx_len) {
  if (mac_tx_len == 0 || mac_tx_len > 128) throw RangeError("tag length must be within 1..128");
  return std::ldexp(1.0, -static_cast<int>(mac_tx_len));
}

double collision_bound(unsigned mac_tx_len) {
  if (mac_tx_len == 0 || mac_tx_len > 128) throw RangeError("tag length must be within 1..128");
  if (mac_tx_len % 2 == 0) return std::ldexp(1.0, static_cast<int>(mac_tx_len / 2));
  return std::floor(std::exp2(mac_tx_len / 2.0));
}

}  // namespace toucan
