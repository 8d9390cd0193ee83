#include "toucan/candump.hpp"

#include <cctype>
#include <cstdio>

#include "toucan/errors.hpp"
#include "toucan/hex.hpp"

namespace toucan {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

CandumpRecord parse_candump_line(std::string_view line, std::size_t line_no) {
  line = trim(line);
  auto fail = [&](const std::string& what) -> ParseError { return ParseError(what, line_no); };

  if (line.empty() || line.front() != '(') throw fail("expected '(' timestamp");
  const auto close = line.find(')');
  if (close == std::string_view::npos) throw fail("unterminated timestamp");
  const std::string_view stamp = line.substr(1, close - 1);
  const auto dot = stamp.find('.');
  if (dot == std::string_view::npos) throw fail("timestamp must be <seconds>.<micros>");
  const auto sec_text = stamp.substr(0, dot);
  const auto micro_text = stamp.substr(dot + 1);
  if (!all_digits(sec_text) || !all_digits(micro_text) || micro_text.size() > 6) {
    throw fail("malformed timestamp '" + std::string(stamp) + "'");
  }

  CandumpRecord rec;
  rec.seconds = std::stoll(std::string(sec_text));
  rec.micros = static_cast<std::uint32_t>(std::stoul(std::string(micro_text)));
  for (std::size_t i = micro_text.size(); i < 6; ++i) rec.micros *= 10;

  std::string_view rest = trim(line.substr(close + 1));
  const auto space = rest.find_first_of(" \t");
  if (space == std::string_view::npos) throw fail("missing channel or frame");
  rec.channel = std::string(rest.substr(0, space));
  const std::string_view frame_text = trim(rest.substr(space));

  const auto hash = frame_text.find('#');
  if (hash == std::string_view::npos) throw fail("frame must be <ID>#<DATA>");
  const auto id_text = frame_text.substr(0, hash);
  const auto data_text = frame_text.substr(hash + 1);
  if (id_text.empty() || id_text.size() > 3) {
    throw fail(id_text.size() == 8 ? "extended identifiers are not supported"
                                   : "identifier must be 1-3 hex digits");
  }
  std::uint64_t id = 0;
  try {
    id = parse_hex_u64(id_text);
  } catch (const ParseError& e) {
    throw fail(e.what());
  }
  if (id > kMaxStandardId) throw fail("identifier exceeds 0x7FF");

  try {
    if (!data_text.empty() && (data_text.front() == 'R' || data_text.front() == 'r')) {
      std::uint8_t dlc = 0;
      if (data_text.size() > 1) {
        const auto dlc_text = data_text.substr(1);
        if (dlc_text.size() != 1 || !std::isdigit(static_cast<unsigned char>(dlc_text[0]))) {
          throw fail("malformed remote frame length");
        }
        dlc = static_cast<std::uint8_t>(dlc_text[0] - '0');
      }
      rec.frame = CanFrame::remote_frame(static_cast<std::uint16_t>(id), dlc);
    } else {
      const auto bytes = from_hex(data_text);
      if (bytes.size() > 8) throw fail("more than 8 data bytes");
      rec.frame = CanFrame::data_frame(static_cast<std::uint16_t>(id), bytes);
    }
  } catch (const ParseError& e) {
    if (e.line() != 0) throw;
    throw fail(e.what());
  } catch (const FrameError& e) {
    throw fail(e.what());
  }
  return rec;
}

std::string format_candump_line(const CandumpRecord& record) {
  char head[64];
  std::snprintf(head, sizeof head, "(%lld.%06u) ", static_cast<long long>(record.seconds),
                static_cast<unsigned>(record.micros));
  char id[8];
  std::snprintf(id, sizeof id, "%03X", static_cast<unsigned>(record.frame.id));
  std::string out = head + record.channel + " " + id + "#";
  if (record.frame.rtr) {
    out += "R";
    if (record.frame.dlc != 0) out += std::to_string(record.frame.dlc);
  } else {
    std::string data = to_hex(record.frame.payload());
    for (auto& c : data) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    out += data;
  }
  return out;
}

std::vector<CandumpRecord> read_candump(std::istream& in) {
  std::vector<CandumpRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(parse_candump_line(t, line_no));
  }
  return out;
}

}  // namespace toucan
