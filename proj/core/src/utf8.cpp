#include "subtok/utf8.hpp"

namespace subtok::utf8 {

namespace {

bool is_cont(std::uint8_t b) { return (b & 0xC0) == 0x80; }

// Second-byte range per the Unicode well-formedness table; plain
// continuation range for every other lead.
bool second_byte_ok(std::uint8_t lead, std::uint8_t b1) {
  switch (lead) {
    case 0xE0: return b1 >= 0xA0 && b1 <= 0xBF;  // excludes overlong
    case 0xED: return b1 >= 0x80 && b1 <= 0x9F;  // excludes surrogates
    case 0xF0: return b1 >= 0x90 && b1 <= 0xBF;  // excludes overlong
    case 0xF4: return b1 >= 0x80 && b1 <= 0x8F;  // excludes > U+10FFFF
    default: return is_cont(b1);
  }
}

// Length of the maximal subpart of an ill-formed sequence at pos: the lead
// plus however many continuation bytes were still consistent with it.
std::size_t subpart_length(std::span<const std::uint8_t> bytes, std::size_t pos) {
  const std::size_t n = bytes.size();
  const std::uint8_t lead = bytes[pos];
  const std::size_t want = sequence_length(lead);
  if (want <= 1) return 1;
  if (pos + 1 >= n || !second_byte_ok(lead, bytes[pos + 1])) return 1;
  std::size_t k = 2;
  while (k < want && pos + k < n && is_cont(bytes[pos + k])) ++k;
  return k;
}

}  // namespace

std::size_t sequence_length(std::uint8_t lead) {
  if (lead < 0x80) return 1;
  if (lead < 0xC2) return 0;  // continuation or overlong C0/C1 lead
  if (lead < 0xE0) return 2;
  if (lead < 0xF0) return 3;
  if (lead < 0xF5) return 4;
  return 0;
}

void append(std::string& out, char32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::size_t valid_sequence_length(std::span<const std::uint8_t> bytes, std::size_t pos) {
  const std::size_t n = bytes.size();
  if (pos >= n) return 0;
  const std::uint8_t lead = bytes[pos];
  const std::size_t len = sequence_length(lead);
  if (len == 0 || pos + len > n) return 0;
  if (len == 1) return 1;
  if (!second_byte_ok(lead, bytes[pos + 1])) return 0;
  for (std::size_t k = 2; k < len; ++k) {
    if (!is_cont(bytes[pos + k])) return 0;
  }
  return len;
}

ReplacingDecodeResult decode_replacing(std::span<const std::uint8_t> bytes) {
  ReplacingDecodeResult res;
  res.text.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    if (const std::size_t len = valid_sequence_length(bytes, i); len > 0) {
      res.text.append(reinterpret_cast<const char*>(bytes.data()) + i, len);
      i += len;
    } else {
      append(res.text, 0xFFFD);
      ++res.invalid_spans;
      i += subpart_length(bytes, i);
    }
  }
  return res;
}

}  // namespace subtok::utf8
