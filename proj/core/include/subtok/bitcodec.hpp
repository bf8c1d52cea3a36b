#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace subtok {

// Lead bytes 0xE4-0xEF of 3-byte UTF-8 characters collapse onto three 6-bit
// prefixes once the two low bits are pushed down into the payload:
//   P1 = 0b111001 (0x39) for E4-E7, P2 = 0x3A for E8-EB, P3 = 0x3B for EC-EF.
enum class PrefixClass : std::uint8_t { P1 = 0, P2 = 1, P3 = 2 };

inline constexpr std::uint8_t kPrefixBits6Base = 0x39;  // 0xE4 >> 2

constexpr std::uint8_t prefix_bits6(PrefixClass c) {
  return static_cast<std::uint8_t>(kPrefixBits6Base + static_cast<std::uint8_t>(c));
}

constexpr std::optional<PrefixClass> prefix_from_bits6(std::uint8_t bits6) {
  if (bits6 < 0x39 || bits6 > 0x3B) return std::nullopt;
  return static_cast<PrefixClass>(bits6 - kPrefixBits6Base);
}

// Total on all byte values: absent outside [0xE4, 0xEF].
constexpr std::optional<PrefixClass> classify_lead_byte(std::uint8_t b) {
  if (b < 0xE4 || b > 0xEF) return std::nullopt;
  return static_cast<PrefixClass>((b >> 2) - kPrefixBits6Base);
}

constexpr bool is_continuation_byte(std::uint8_t b) { return (b & 0xC0) == 0x80; }

// One eligible character repacked on 6 + 9 + 9 bit boundaries. The triple
// (bits6, hi, lo) carries exactly the 24 input bits, so repacking is a
// bijection with (b1, b2, b3).
struct PackedChar {
  PrefixClass prefix;
  std::uint16_t hi;  // 9-bit payload: low two bits of b1, top seven of b2
  std::uint16_t lo;  // 9-bit payload: last bit of b2, all of b3

  friend constexpr bool operator==(const PackedChar&, const PackedChar&) = default;
};

// Rejects ineligible characters (lead outside E4-EF, or b2/b3 not a UTF-8
// continuation byte); the caller passes those through raw.
constexpr std::optional<PackedChar> pack_char(std::uint8_t b1, std::uint8_t b2,
                                              std::uint8_t b3) {
  const auto cls = classify_lead_byte(b1);
  if (!cls || !is_continuation_byte(b2) || !is_continuation_byte(b3)) return std::nullopt;
  const auto hi = static_cast<std::uint16_t>(((b1 & 0x03u) << 7) | ((b2 & 0xFEu) >> 1));
  const auto lo = static_cast<std::uint16_t>(((b2 & 0x01u) << 8) | b3);
  return PackedChar{*cls, hi, lo};
}

// Re-aligns the 6/9/9 split back to three 8-bit bytes. Total for any payload
// values (taken mod 2^9), so it also realigns arbitrary model output.
constexpr std::array<std::uint8_t, 3> unpack_char(const PackedChar& p) {
  const std::uint32_t hi = p.hi & 0x1FFu;
  const std::uint32_t lo = p.lo & 0x1FFu;
  const auto b1 = static_cast<std::uint8_t>((prefix_bits6(p.prefix) << 2) | (hi >> 7));
  const auto b2 = static_cast<std::uint8_t>(((hi & 0x7Fu) << 1) | (lo >> 8));
  const auto b3 = static_cast<std::uint8_t>(lo & 0xFFu);
  return {b1, b2, b3};
}

}  // namespace subtok
