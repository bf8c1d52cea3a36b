#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace subtok::utf8 {

// Expected sequence length from the lead byte; 0 for a byte that cannot
// start a sequence (stray continuation or invalid lead).
std::size_t sequence_length(std::uint8_t lead);

void append(std::string& out, char32_t cp);

// Length of the valid UTF-8 sequence starting at bytes[pos], or 0 if the
// bytes there do not form one (truncated, overlong, surrogate, > U+10FFFF).
std::size_t valid_sequence_length(std::span<const std::uint8_t> bytes, std::size_t pos);

struct ReplacingDecodeResult {
  std::string text;
  std::size_t invalid_spans = 0;  // one per replacement character emitted
};

// Decodes bytes as UTF-8; each maximal invalid subpart becomes U+FFFD.
ReplacingDecodeResult decode_replacing(std::span<const std::uint8_t> bytes);

}  // namespace subtok::utf8
