#include "toucan/can_frame.hpp"

#include <algorithm>

#include "toucan/errors.hpp"

namespace toucan {
namespace {

constexpr std::uint16_t kCrcPoly = 0x4599;
constexpr std::size_t kTrailerBits = 1 + 1 + 1 + 7;  // CRC-del, ACK, ACK-del, EOF

// Appends bits to a BitString with stuffing and tracks where the stuffed region ends.
class StuffingWriter {
 public:
  explicit StuffingWriter(BitString& out) : out_(out) {}

  void put(bool bit) {
    out_.push_back(bit);
    if (run_ > 0 && bit == last_) {
      ++run_;
    } else {
      last_ = bit;
      run_ = 1;
    }
    if (run_ == 5) {
      out_.push_back(!bit);
      last_ = !bit;
      run_ = 1;
    }
  }

  void put_field(std::uint32_t value, int width) {
    for (int i = width - 1; i >= 0; --i) put(((value >> i) & 1u) != 0);
  }

 private:
  BitString& out_;
  bool last_ = false;
  int run_ = 0;
};

class DestuffingReader {
 public:
  explicit DestuffingReader(const BitString& in) : in_(in) {}

  bool get() {
    if (pos_ >= in_.size()) throw FrameError(FrameErrorKind::truncated, "frame ended inside stuffed region");
    const bool bit = in_[pos_++] != 0;
    if (run_ > 0 && bit == last_) {
      ++run_;
    } else {
      last_ = bit;
      run_ = 1;
    }
    if (run_ == 5) {
      if (pos_ >= in_.size()) throw FrameError(FrameErrorKind::truncated, "missing stuff bit");
      const bool stuff = in_[pos_] != 0;
      if (stuff == bit) {
        throw FrameError(FrameErrorKind::stuff_violation,
                         "six identical bits ending at position " + std::to_string(pos_));
      }
      ++pos_;
      last_ = stuff;
      run_ = 1;
    }
    return bit;
  }

  std::uint32_t get_field(int width) {
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (get() ? 1u : 0u);
    return v;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  const BitString& in_;
  std::size_t pos_ = 0;
  bool last_ = false;
  int run_ = 0;
};

void append_unstuffed_header(const CanFrame& f, BitString& out) {
  auto field = [&](std::uint32_t value, int width) {
    for (int i = width - 1; i >= 0; --i) out.push_back(((value >> i) & 1u) != 0);
  };
  out.push_back(false);  // SOF
  field(f.id, 11);
  out.push_back(f.rtr);
  out.push_back(f.ide);
  out.push_back(f.r0);
  field(f.dlc, 4);
  for (auto b : f.payload()) field(b, 8);
}

}  // namespace

const char* to_string(FrameErrorKind kind) noexcept {
  switch (kind) {
    case FrameErrorKind::invalid_frame: return "invalid_frame";
    case FrameErrorKind::unsupported: return "unsupported";
    case FrameErrorKind::stuff_violation: return "stuff_violation";
    case FrameErrorKind::crc_mismatch: return "crc_mismatch";
    case FrameErrorKind::truncated: return "truncated";
    case FrameErrorKind::form: return "form";
  }
  return "unknown";
}

std::uint64_t CanFrame::data_u64() const noexcept {
  std::uint64_t v = 0;
  for (auto b : data) v = (v << 8) | b;
  return v;
}

CanFrame CanFrame::data_frame(std::uint16_t id, std::span<const std::uint8_t> bytes) {
  if (bytes.size() > 8) throw FrameError(FrameErrorKind::invalid_frame, "more than 8 data bytes");
  CanFrame f;
  f.id = id;
  f.dlc = static_cast<std::uint8_t>(bytes.size());
  std::copy(bytes.begin(), bytes.end(), f.data.begin());
  f.validate();
  return f;
}

CanFrame CanFrame::data_frame_u64(std::uint16_t id, std::uint64_t field) {
  CanFrame f;
  f.id = id;
  f.dlc = 8;
  for (int i = 0; i < 8; ++i) f.data[i] = static_cast<std::uint8_t>(field >> (56 - 8 * i));
  f.validate();
  return f;
}

CanFrame CanFrame::remote_frame(std::uint16_t id, std::uint8_t dlc) {
  CanFrame f;
  f.id = id;
  f.rtr = true;
  f.dlc = dlc;
  f.validate();
  return f;
}

void CanFrame::validate() const {
  if (id > kMaxStandardId) {
    throw FrameError(FrameErrorKind::invalid_frame, "identifier exceeds 11 bits");
  }
  if (ide) throw FrameError(FrameErrorKind::unsupported, "extended (IDE=1) frames are not supported");
  if (dlc > 8) throw FrameError(FrameErrorKind::invalid_frame, "dlc greater than 8");
  for (std::size_t i = data_length(); i < data.size(); ++i) {
    if (data[i] != 0) throw FrameError(FrameErrorKind::invalid_frame, "data beyond dlc must be zero");
  }
}

BitString BitString::from_string(const std::string& text) {
  BitString out;
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(c == '1');
    } else if (c != ' ' && c != '_') {
      throw ParseError(std::string("bad bit character '") + c + "'");
    }
  }
  return out;
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::uint16_t crc15(std::span<const std::uint8_t> bits) noexcept {
  std::uint16_t crc = 0;
  for (auto b : bits) {
    const bool next = ((b != 0) ^ ((crc >> 14) & 1u)) != 0;
    crc = static_cast<std::uint16_t>((crc << 1) & 0x7FFF);
    if (next) crc ^= kCrcPoly;
  }
  return crc;
}

BitString crc_input_bits(const CanFrame& frame) {
  frame.validate();
  BitString out;
  append_unstuffed_header(frame, out);
  return out;
}

std::uint16_t frame_crc(const CanFrame& frame) { return crc15(crc_input_bits(frame)); }

BitString encode_frame(const CanFrame& frame) {
  const BitString plain = crc_input_bits(frame);
  const std::uint16_t crc = crc15(plain);

  BitString out;
  StuffingWriter w(out);
  for (std::size_t i = 0; i < plain.size(); ++i) w.put(plain[i] != 0);
  w.put_field(crc, 15);
  out.push_back(true);  // CRC delimiter
  out.push_back(true);  // ACK slot, recessive until a receiver acknowledges
  out.push_back(true);  // ACK delimiter
  for (int i = 0; i < 7; ++i) out.push_back(true);  // EOF
  return out;
}

CanFrame decode_frame(const BitString& bits) {
  if (bits.empty()) throw FrameError(FrameErrorKind::truncated, "empty bit string");
  DestuffingReader r(bits);
  if (r.get()) throw FrameError(FrameErrorKind::form, "SOF must be dominant");

  CanFrame f;
  f.id = static_cast<std::uint16_t>(r.get_field(11));
  f.rtr = r.get();
  f.ide = r.get();
  if (f.ide) throw FrameError(FrameErrorKind::unsupported, "extended (IDE=1) frames are not supported");
  f.r0 = r.get();
  f.dlc = static_cast<std::uint8_t>(r.get_field(4));
  if (f.dlc > 8) throw FrameError(FrameErrorKind::form, "dlc greater than 8");
  for (std::size_t i = 0; i < f.data_length(); ++i) f.data[i] = static_cast<std::uint8_t>(r.get_field(8));
  const auto received_crc = static_cast<std::uint16_t>(r.get_field(15));

  std::size_t pos = r.position();
  if (bits.size() < pos + kTrailerBits) {
    throw FrameError(FrameErrorKind::truncated, "frame ended before end-of-frame");
  }
  if (bits[pos] != kRecessive) throw FrameError(FrameErrorKind::form, "CRC delimiter must be recessive");
  if (bits[pos + 2] != kRecessive) throw FrameError(FrameErrorKind::form, "ACK delimiter must be recessive");
  for (std::size_t i = pos + 3; i < pos + kTrailerBits; ++i) {
    if (bits[i] != kRecessive) throw FrameError(FrameErrorKind::form, "EOF bits must be recessive");
  }
  if (bits.size() != pos + kTrailerBits) {
    throw FrameError(FrameErrorKind::form, "trailing bits after end-of-frame");
  }

  if (const auto computed = frame_crc(f); computed != received_crc) {
    throw FrameError(FrameErrorKind::crc_mismatch, "received CRC does not match computed CRC");
  }
  return f;
}

std::size_t ack_slot_index(const BitString& encoded) {
  if (encoded.size() < kTrailerBits) throw FrameError(FrameErrorKind::truncated, "too short for a frame");
  return encoded.size() - 9;
}

std::size_t stuffed_region_length(const BitString& encoded) {
  if (encoded.size() < kTrailerBits) throw FrameError(FrameErrorKind::truncated, "too short for a frame");
  return encoded.size() - kTrailerBits;
}

std::size_t longest_run(const BitString& bits, std::size_t begin, std::size_t end) {
  end = std::min(end, bits.size());
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = begin; i < end; ++i) {
    run = (i > begin && bits[i] == bits[i - 1]) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

std::uint16_t wins_arbitration(std::uint16_t a, std::uint16_t b) {
  if (a == b) {
    throw ProtocolError("identifier " + std::to_string(a) + " contended by two nodes");
  }
  return std::min(a, b);
}

}  // namespace toucan
