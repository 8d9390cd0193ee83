#pragma once

// Pre-shared key material, one record per inclusive identifier range.
//
// File format, one record per line, '#' starts a comment:
//   ID_LO-ID_HI MACKEYHEX ENCKEYHEX [NONCEHEX]
// Identifiers are hex (0x prefix optional); a single identifier may stand
// alone. Keys are 32 hex digits, the optional session nonce 16.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <vector>

#include "toucan/aes128.hpp"
#include "toucan/chaskey.hpp"

namespace toucan {

class KeyRecord {
 public:
  KeyRecord(std::uint16_t id_lo, std::uint16_t id_hi, const Block128& mac_key, const Block128& enc_key,
            std::optional<std::uint64_t> session_nonce = std::nullopt);

  std::uint16_t id_lo() const noexcept { return id_lo_; }
  std::uint16_t id_hi() const noexcept { return id_hi_; }
  bool covers(std::uint16_t id) const noexcept { return id >= id_lo_ && id <= id_hi_; }

  const Block128& mac_key() const noexcept { return mac_key_; }
  const Block128& enc_key() const noexcept { return enc_key_; }
  const std::optional<std::uint64_t>& session_nonce() const noexcept { return session_nonce_; }

  // Expanded forms, computed once.
  const ChaskeyKey& chaskey() const noexcept { return chaskey_; }
  const Aes128Key& mac_aes() const noexcept { return mac_aes_; }
  const Aes128Key& cipher() const noexcept { return cipher_; }

  CtrContext ctr_for(std::uint16_t id) const noexcept {
    return CtrContext::for_identifier(id, session_nonce_);
  }

  std::size_t source_line = 0;

 private:
  std::uint16_t id_lo_;
  std::uint16_t id_hi_;
  Block128 mac_key_;
  Block128 enc_key_;
  std::optional<std::uint64_t> session_nonce_;
  ChaskeyKey chaskey_;
  Aes128Key mac_aes_;
  Aes128Key cipher_;
};

class KeyStore {
 public:
  KeyStore() = default;
  /// Throws ParseError if two ranges overlap.
  explicit KeyStore(std::vector<KeyRecord> records);

  /// The record covering `id`, or nullptr.
  const KeyRecord* lookup(std::uint16_t id) const noexcept;

  const std::vector<KeyRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

 private:
  std::vector<KeyRecord> records_;  // sorted by id_lo, disjoint
};

KeyStore parse_keystore(std::istream& in);
/// Throws ParseError (with line) or std::runtime_error if the file cannot be opened.
KeyStore load_keystore(const std::filesystem::path& path);

/// Parses one record line without the comment handling.
KeyRecord parse_key_record(std::string_view line, std::size_t line_no = 0);

}  // namespace toucan
