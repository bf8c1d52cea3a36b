#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "subtok/bitcodec.hpp"

namespace subtok {

enum class TokenKind : std::uint8_t { Subword, Byte, ExtByte, Prefix };

// Alphabet element of a token stream. Byte and ExtByte together cover the
// 9-bit payload space: a payload value v < 256 rides on the ordinary byte
// token Byte(v), v >= 256 on ExtByte(v).
struct SemanticToken {
  TokenKind kind = TokenKind::Subword;
  std::uint32_t value = 0;  // Subword: vocab id; Byte: [0,255]; ExtByte: [256,511]; Prefix: class index

  static constexpr SemanticToken subword(std::uint32_t id) {
    return {TokenKind::Subword, id};
  }
  static constexpr SemanticToken byte(std::uint8_t v) {
    return {TokenKind::Byte, v};
  }
  static constexpr SemanticToken payload(std::uint16_t v) {
    return v < 256 ? SemanticToken{TokenKind::Byte, v}
                   : SemanticToken{TokenKind::ExtByte, v};
  }
  static constexpr SemanticToken prefix(PrefixClass c) {
    return {TokenKind::Prefix, static_cast<std::uint32_t>(c)};
  }

  constexpr PrefixClass prefix_class() const { return static_cast<PrefixClass>(value); }
  constexpr bool is_byte_class() const { return kind != TokenKind::Subword; }

  friend constexpr bool operator==(const SemanticToken&, const SemanticToken&) = default;
};

std::string to_string(const SemanticToken& t);

// Binding between a concrete tokenizer's integer ids and semantic tokens.
// byte_ids covers all 256 byte values, ext_ids the 256 extended payload
// values, prefix_ids the three prefix tokens; every remaining id is a
// subword. All 515 mapped ids must be pairwise distinct.
class VocabMap {
 public:
  // byte v -> v, ext v -> v, prefixes -> 512..514; subwords from 515 up.
  static VocabMap identity();
  static VocabMap create(const std::array<std::uint32_t, 256>& byte_ids,
                         const std::array<std::uint32_t, 256>& ext_ids,
                         const std::array<std::uint32_t, 3>& prefix_ids,
                         std::optional<std::uint32_t> vocab_size = std::nullopt);

  std::uint32_t byte_id(std::uint8_t v) const { return byte_ids_[v]; }
  std::uint32_t ext_id(std::uint16_t v) const { return ext_ids_[v - 256]; }
  std::uint32_t prefix_id(PrefixClass c) const {
    return prefix_ids_[static_cast<std::size_t>(c)];
  }

  const std::array<std::uint32_t, 256>& byte_ids() const { return byte_ids_; }
  const std::array<std::uint32_t, 256>& ext_ids() const { return ext_ids_; }
  const std::array<std::uint32_t, 3>& prefix_ids() const { return prefix_ids_; }
  std::optional<std::uint32_t> vocab_size() const { return vocab_size_; }

  std::uint32_t id_of(const SemanticToken& t) const;  // throws VocabMismatchError
  SemanticToken token_of(std::uint32_t id) const;     // throws VocabMismatchError

  // Byte/ExtByte/Prefix id, as opposed to a subword id.
  bool is_byte_class_id(std::uint32_t id) const { return reverse_.contains(id); }

 private:
  VocabMap() = default;

  std::array<std::uint32_t, 256> byte_ids_{};
  std::array<std::uint32_t, 256> ext_ids_{};
  std::array<std::uint32_t, 3> prefix_ids_{};
  std::optional<std::uint32_t> vocab_size_;
  std::unordered_map<std::uint32_t, SemanticToken> reverse_;
};

// First id available for subword entries under VocabMap::identity().
inline constexpr std::uint32_t kReservedIdCount = 515;  // 256 + 256 + 3

// One maximal contiguous span of Byte tokens. bytes[0, raw_len) is the raw
// residue; the rest parses as back-to-back eligible 3-byte characters.
struct ByteRun {
  std::size_t offset = 0;  // token index of the first byte in the source stream
  std::vector<std::uint8_t> bytes;
  std::size_t raw_len = 0;

  std::size_t char_count() const { return (bytes.size() - raw_len) / 3; }
};

// Requires baseline form (Subword and Byte only); throws std::invalid_argument
// otherwise. Malformed UTF-8 content lands in raw residue, never rejected.
std::vector<ByteRun> segment_byte_runs(std::span<const SemanticToken> stream);

struct EncodeReport {
  std::size_t input_len = 0;
  std::size_t output_len = 0;
  double reduction = 0.0;  // (input_len - output_len) / input_len
  std::size_t prefix_switches = 0;  // prefix tokens emitted
  std::size_t compressed_chars = 0;
  std::size_t raw_bytes_passed = 0;
};

struct EncodeResult {
  std::vector<SemanticToken> tokens;
  EncodeReport report;
};

// Baseline -> compressed form. Each eligible character becomes its two 9-bit
// payload tokens; a prefix token is emitted at the start of each compressed
// segment and on every class change. decode_stream inverts this exactly.
EncodeResult encode_stream(std::span<const SemanticToken> stream);

enum class DecodeMode { Strict, Lenient };

struct DecodeReport {
  std::vector<SemanticToken> tokens;  // baseline form
  std::size_t decode_errors = 0;
  std::vector<std::size_t> error_positions;
};

// Stateful scan over arbitrary (possibly model-emitted) compressed streams.
// After a prefix token, payloads are consumed in (hi, lo) pairs until a
// subword, another prefix, or end of stream; subwords clear the prefix state;
// bytes seen with no active prefix pass through raw.
//
// Strict mode throws DecodeError on an ExtByte with no active prefix or on a
// segment ending mid-pair; lenient mode skips the offending token, counts it,
// and records its offset.
DecodeReport decode_stream(std::span<const SemanticToken> stream, DecodeMode mode);

std::vector<std::uint32_t> to_ids(std::span<const SemanticToken> stream, const VocabMap& vm);
std::vector<SemanticToken> from_ids(std::span<const std::uint32_t> ids, const VocabMap& vm);

}  // namespace subtok
