#include "subtok/tokenstream.hpp"

#include <cassert>
#include <stdexcept>

#include "subtok/errors.hpp"

namespace subtok {

namespace {

const char* kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Subword: return "sw";
    case TokenKind::Byte: return "b";
    case TokenKind::ExtByte: return "xb";
    case TokenKind::Prefix: return "p";
  }
  return "?";
}

bool eligible_triple(std::uint8_t b1, std::uint8_t b2, std::uint8_t b3) {
  return classify_lead_byte(b1).has_value() && is_continuation_byte(b2) &&
         is_continuation_byte(b3);
}

}  // namespace

std::string to_string(const SemanticToken& t) {
  if (t.kind == TokenKind::Prefix) {
    return "p" + std::to_string(t.value + 1);
  }
  return std::string(kind_name(t.kind)) + std::to_string(t.value);
}

VocabMap VocabMap::identity() {
  std::array<std::uint32_t, 256> bytes{};
  std::array<std::uint32_t, 256> exts{};
  for (std::uint32_t v = 0; v < 256; ++v) {
    bytes[v] = v;
    exts[v] = 256 + v;
  }
  return create(bytes, exts, {512, 513, 514});
}

VocabMap VocabMap::create(const std::array<std::uint32_t, 256>& byte_ids,
                          const std::array<std::uint32_t, 256>& ext_ids,
                          const std::array<std::uint32_t, 3>& prefix_ids,
                          std::optional<std::uint32_t> vocab_size) {
  VocabMap vm;
  vm.byte_ids_ = byte_ids;
  vm.ext_ids_ = ext_ids;
  vm.prefix_ids_ = prefix_ids;
  vm.vocab_size_ = vocab_size;
  vm.reverse_.reserve(kReservedIdCount);

  auto bind = [&](std::uint32_t id, SemanticToken t) {
    if (vocab_size && id >= *vocab_size) {
      throw VocabMismatchError("vocab map id " + std::to_string(id) +
                               " exceeds declared vocab size " + std::to_string(*vocab_size));
    }
    if (!vm.reverse_.emplace(id, t).second) {
      throw VocabMismatchError("vocab map id " + std::to_string(id) +
                               " bound twice (" + to_string(t) + ")");
    }
  };

  for (std::uint32_t v = 0; v < 256; ++v) {
    bind(byte_ids[v], SemanticToken::byte(static_cast<std::uint8_t>(v)));
  }
  for (std::uint32_t v = 0; v < 256; ++v) {
    bind(ext_ids[v], SemanticToken::payload(static_cast<std::uint16_t>(256 + v)));
  }
  for (std::uint32_t c = 0; c < 3; ++c) {
    bind(prefix_ids[c], SemanticToken::prefix(static_cast<PrefixClass>(c)));
  }
  return vm;
}

std::uint32_t VocabMap::id_of(const SemanticToken& t) const {
  switch (t.kind) {
    case TokenKind::Byte: return byte_ids_[t.value];
    case TokenKind::ExtByte: return ext_ids_[t.value - 256];
    case TokenKind::Prefix: return prefix_ids_[t.value];
    case TokenKind::Subword:
      // A subword id that collides with a reserved id cannot survive a
      // round trip through from_ids, so the stream does not fit this map.
      if (reverse_.contains(t.value)) {
        throw VocabMismatchError("subword id " + std::to_string(t.value) +
                                 " collides with a reserved byte/prefix id");
      }
      if (vocab_size_ && t.value >= *vocab_size_) {
        throw VocabMismatchError("subword id " + std::to_string(t.value) +
                                 " outside vocab of size " + std::to_string(*vocab_size_));
      }
      return t.value;
  }
  throw VocabMismatchError("corrupt semantic token");
}

SemanticToken VocabMap::token_of(std::uint32_t id) const {
  if (auto it = reverse_.find(id); it != reverse_.end()) return it->second;
  if (vocab_size_ && id >= *vocab_size_) {
    throw VocabMismatchError("unknown id " + std::to_string(id) +
                             " outside vocab of size " + std::to_string(*vocab_size_));
  }
  return SemanticToken::subword(id);
}

std::vector<ByteRun> segment_byte_runs(std::span<const SemanticToken> stream) {
  std::vector<ByteRun> runs;
  std::size_t i = 0;
  const std::size_t n = stream.size();
  while (i < n) {
    const auto& t = stream[i];
    if (t.kind == TokenKind::ExtByte || t.kind == TokenKind::Prefix) {
      throw std::invalid_argument("stream is not in baseline form (token " +
                                  to_string(t) + " at offset " + std::to_string(i) + ")");
    }
    if (t.kind != TokenKind::Byte) {
      ++i;
      continue;
    }
    ByteRun run;
    run.offset = i;
    while (i < n && stream[i].kind == TokenKind::Byte) {
      run.bytes.push_back(static_cast<std::uint8_t>(stream[i].value));
      ++i;
    }
    // Compress only the maximal eligible suffix: the decoder treats every
    // payload after a prefix as part of a 9-bit pair until the next subword
    // or prefix, so raw bytes may precede a compressed segment but never
    // follow it within one run.
    std::size_t suffix_start = run.bytes.size();
    while (suffix_start >= 3 && eligible_triple(run.bytes[suffix_start - 3],
                                                run.bytes[suffix_start - 2],
                                                run.bytes[suffix_start - 1])) {
      suffix_start -= 3;
    }
    run.raw_len = suffix_start;
    runs.push_back(std::move(run));
  }
  return runs;
}

EncodeResult encode_stream(std::span<const SemanticToken> stream) {
  const auto runs = segment_byte_runs(stream);  // also validates baseline form

  EncodeResult res;
  res.tokens.reserve(stream.size());
  EncodeReport& rep = res.report;
  rep.input_len = stream.size();

  std::size_t next = 0;
  for (const auto& run : runs) {
    for (std::size_t i = next; i < run.offset; ++i) res.tokens.push_back(stream[i]);

    for (std::size_t i = 0; i < run.raw_len; ++i) {
      res.tokens.push_back(SemanticToken::byte(run.bytes[i]));
    }
    rep.raw_bytes_passed += run.raw_len;

    std::optional<PrefixClass> active;
    for (std::size_t i = run.raw_len; i + 3 <= run.bytes.size(); i += 3) {
      const auto packed = pack_char(run.bytes[i], run.bytes[i + 1], run.bytes[i + 2]);
      assert(packed.has_value());
      if (active != packed->prefix) {
        res.tokens.push_back(SemanticToken::prefix(packed->prefix));
        active = packed->prefix;
        ++rep.prefix_switches;
      }
      res.tokens.push_back(SemanticToken::payload(packed->hi));
      res.tokens.push_back(SemanticToken::payload(packed->lo));
      ++rep.compressed_chars;
    }
    next = run.offset + run.bytes.size();
  }
  for (std::size_t i = next; i < stream.size(); ++i) res.tokens.push_back(stream[i]);

  rep.output_len = res.tokens.size();
  rep.reduction = rep.input_len > 0
                      ? static_cast<double>(rep.input_len - rep.output_len) /
                            static_cast<double>(rep.input_len)
                      : 0.0;
  return res;
}

DecodeReport decode_stream(std::span<const SemanticToken> stream, DecodeMode mode) {
  DecodeReport rep;
  rep.tokens.reserve(stream.size());

  std::optional<PrefixClass> active;
  bool has_pending = false;
  std::uint16_t pending_value = 0;
  std::size_t pending_offset = 0;

  auto fail = [&](std::size_t pos, const char* what) {
    if (mode == DecodeMode::Strict) throw DecodeError(pos, what);
    ++rep.decode_errors;
    rep.error_positions.push_back(pos);
  };

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& t = stream[i];
    switch (t.kind) {
      case TokenKind::Subword:
        if (has_pending) {
          fail(pending_offset, "payload pair cut short by subword");
          has_pending = false;
        }
        active.reset();
        rep.tokens.push_back(t);
        break;

      case TokenKind::Prefix:
        if (has_pending) {
          fail(pending_offset, "payload pair cut short by prefix switch");
          has_pending = false;
        }
        active = t.prefix_class();
        break;

      case TokenKind::Byte:
        if (!active) {
          rep.tokens.push_back(t);  // raw passthrough
          break;
        }
        [[fallthrough]];

      case TokenKind::ExtByte: {
        if (!active) {
          // A 9-bit payload without a governing prefix is undecodable.
          fail(i, "extended payload with no active prefix");
          break;
        }
        if (!has_pending) {
          has_pending = true;
          pending_value = static_cast<std::uint16_t>(t.value);
          pending_offset = i;
          break;
        }
        const auto bytes = unpack_char(
            {*active, pending_value, static_cast<std::uint16_t>(t.value)});
        for (auto b : bytes) rep.tokens.push_back(SemanticToken::byte(b));
        has_pending = false;
        break;
      }
    }
  }
  if (has_pending) fail(pending_offset, "stream ended mid-pair");
  return rep;
}

std::vector<std::uint32_t> to_ids(std::span<const SemanticToken> stream, const VocabMap& vm) {
  std::vector<std::uint32_t> ids;
  ids.reserve(stream.size());
  for (const auto& t : stream) ids.push_back(vm.id_of(t));
  return ids;
}

std::vector<SemanticToken> from_ids(std::span<const std::uint32_t> ids, const VocabMap& vm) {
  std::vector<SemanticToken> stream;
  stream.reserve(ids.size());
  for (auto id : ids) stream.push_back(vm.token_of(id));
  return stream;
}

}  // namespace subtok
