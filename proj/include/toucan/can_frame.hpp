#pragma once

// CAN 2.0A (11-bit identifier) data model and bit-level codec.
//
// Bit layout on the wire:
//   SOF | ID[10..0] | RTR | IDE | r0 | DLC[3..0] | DATA | CRC[14..0] | CRC-del | ACK | ACK-del | EOF x7
// Stuffing covers SOF through the last CRC bit. Dominant is 0, recessive is 1.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace toucan {

inline constexpr std::uint16_t kMaxStandardId = 0x7FF;
inline constexpr std::uint8_t kDominant = 0;
inline constexpr std::uint8_t kRecessive = 1;

struct CanFrame {
  std::uint16_t id = 0;
  bool rtr = false;
  bool ide = false;
  bool r0 = false;
  std::uint8_t dlc = 0;
  std::array<std::uint8_t, 8> data{};  // bytes past data_length() stay zero

  /// Bytes actually carried in the Data field; remote frames carry none.
  std::size_t data_length() const noexcept { return rtr ? 0 : dlc; }
  std::span<const std::uint8_t> payload() const noexcept { return {data.data(), data_length()}; }

  /// Big-endian view of an 8-byte Data field.
  std::uint64_t data_u64() const noexcept;

  static CanFrame data_frame(std::uint16_t id, std::span<const std::uint8_t> bytes);
  static CanFrame data_frame_u64(std::uint16_t id, std::uint64_t field);
  static CanFrame remote_frame(std::uint16_t id, std::uint8_t dlc);

  /// Throws FrameError{invalid_frame} if any field is out of range.
  void validate() const;

  friend bool operator==(const CanFrame&, const CanFrame&) = default;
};

/// Sequence of bus levels, one byte per bit (0 dominant, 1 recessive).
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
  /// Parses a string of '0'/'1' characters.
  static BitString from_string(const std::string& text);

  void push_back(bool recessive) { bits_.push_back(recessive ? kRecessive : kDominant); }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::uint8_t& operator[](std::size_t i) { return bits_[i]; }
  void flip(std::size_t i) { bits_.at(i) ^= 1; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class FrameErrorKind { invalid_frame, unsupported, stuff_violation, crc_mismatch, truncated, form };

const char* to_string(FrameErrorKind kind) noexcept;

class FrameError : public std::runtime_error {
 public:
  FrameError(FrameErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  FrameErrorKind kind() const noexcept { return kind_; }

 private:
  FrameErrorKind kind_;
};

/// CAN CRC-15 (polynomial 0x4599, initial value 0) over unstuffed bits.
std::uint16_t crc15(std::span<const std::uint8_t> bits) noexcept;
inline std::uint16_t crc15(const BitString& bits) noexcept { return crc15(bits.bits()); }

/// Unstuffed SOF..Data bits of a frame, i.e. the CRC input.
BitString crc_input_bits(const CanFrame& frame);

std::uint16_t frame_crc(const CanFrame& frame);

BitString encode_frame(const CanFrame& frame);

/// Throws FrameError with kind stuff_violation, crc_mismatch, truncated, form or unsupported.
CanFrame decode_frame(const BitString& bits);

/// Index of the ACK slot in an encoded frame.
std::size_t ack_slot_index(const BitString& encoded);

/// Length of the stuffed region (SOF through CRC, including stuff bits) of an encoded frame.
std::size_t stuffed_region_length(const BitString& encoded);

/// Longest run of identical levels within [begin, end).
std::size_t longest_run(const BitString& bits, std::size_t begin, std::size_t end);

/// Lower identifier wins. Throws ProtocolError when a == b.
std::uint16_t wins_arbitration(std::uint16_t a, std::uint16_t b);

}  // namespace toucan
