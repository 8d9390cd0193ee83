#include "toucan/keystore.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "toucan/can_frame.hpp"
#include "toucan/errors.hpp"
#include "toucan/hex.hpp"

namespace toucan {

KeyRecord::KeyRecord(std::uint16_t id_lo, std::uint16_t id_hi, const Block128& mac_key,
                     const Block128& enc_key, std::optional<std::uint64_t> session_nonce)
    : id_lo_(id_lo),
      id_hi_(id_hi),
      mac_key_(mac_key),
      enc_key_(enc_key),
      session_nonce_(session_nonce),
      chaskey_(mac_key),
      mac_aes_(mac_key),
      cipher_(enc_key) {
  if (id_lo > id_hi) throw RangeError("key range start exceeds range end");
  if (id_hi > kMaxStandardId) throw RangeError("key range exceeds 11-bit identifiers");
}

KeyStore::KeyStore(std::vector<KeyRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const KeyRecord& a, const KeyRecord& b) { return a.id_lo() < b.id_lo(); });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    const auto& prev = records_[i - 1];
    const auto& cur = records_[i];
    if (cur.id_lo() <= prev.id_hi()) {
      const auto [first, second] = std::minmax(prev.source_line, cur.source_line);
      throw ParseError("key ranges overlap (lines " + std::to_string(first) + " and " +
                           std::to_string(second) + ")",
                       second);
    }
  }
}

const KeyRecord* KeyStore::lookup(std::uint16_t id) const noexcept {
  auto it = std::upper_bound(records_.begin(), records_.end(), id,
                             [](std::uint16_t v, const KeyRecord& r) { return v < r.id_lo(); });
  if (it == records_.begin()) return nullptr;
  --it;
  return it->covers(id) ? &*it : nullptr;
}

KeyRecord parse_key_record(std::string_view line, std::size_t line_no) {
  std::istringstream ss{std::string(line)};
  std::string range, mac_hex, enc_hex, nonce_hex, extra;
  ss >> range >> mac_hex >> enc_hex >> nonce_hex >> extra;
  if (range.empty() || mac_hex.empty() || enc_hex.empty()) {
    throw ParseError("expected 'ID_LO-ID_HI MACKEY ENCKEY [NONCE]'", line_no);
  }
  if (!extra.empty()) throw ParseError("unexpected trailing field '" + extra + "'", line_no);

  try {
    const auto dash = range.find('-');
    const std::uint64_t lo = parse_hex_u64(range.substr(0, dash));
    const std::uint64_t hi = dash == std::string::npos ? lo : parse_hex_u64(range.substr(dash + 1));
    if (hi > kMaxStandardId || lo > hi) throw ParseError("bad identifier range '" + range + "'");

    Block128 mac{}, enc{};
    from_hex_exact(mac_hex, mac);
    from_hex_exact(enc_hex, enc);
    std::optional<std::uint64_t> nonce;
    if (!nonce_hex.empty()) {
      std::array<std::uint8_t, 8> nb{};
      from_hex_exact(nonce_hex, nb);
      std::uint64_t v = 0;
      for (auto b : nb) v = (v << 8) | b;
      nonce = v;
    }
    KeyRecord rec(static_cast<std::uint16_t>(lo), static_cast<std::uint16_t>(hi), mac, enc, nonce);
    rec.source_line = line_no;
    return rec;
  } catch (const ParseError& e) {
    if (e.line() != 0 || line_no == 0) throw;
    throw ParseError(e.what(), line_no);
  }
}

KeyStore parse_keystore(std::istream& in) {
  std::vector<KeyRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(parse_key_record(line, line_no));
  }
  return KeyStore(std::move(records));
}

KeyStore load_keystore(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open key file '" + path.string() + "'");
  return parse_keystore(in);
}

}  // namespace toucan
