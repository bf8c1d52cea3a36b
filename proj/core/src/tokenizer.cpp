#include "subtok/tokenizer.hpp"

#include <algorithm>

#include "subtok/errors.hpp"
#include "subtok/utf8.hpp"

namespace subtok {

std::uint32_t SubwordVocab::add(std::string surface) {
  if (surface.empty()) throw ParseError("empty subword surface");
  const auto id = static_cast<std::uint32_t>(first_id_ + surfaces_.size());
  if (!ids_.emplace(surface, id).second) {
    throw ParseError("duplicate subword surface: " + surface);
  }
  max_surface_len_ = std::max(max_surface_len_, surface.size());
  surfaces_.push_back(std::move(surface));
  return id;
}

std::optional<std::uint32_t> SubwordVocab::lookup(std::string_view surface) const {
  if (auto it = ids_.find(surface); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string* SubwordVocab::surface_of(std::uint32_t id) const {
  if (id < first_id_) return nullptr;
  const std::size_t idx = id - first_id_;
  return idx < surfaces_.size() ? &surfaces_[idx] : nullptr;
}

std::vector<SemanticToken> tokenize(std::string_view text, const SubwordVocab& vocab) {
  std::vector<SemanticToken> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const std::size_t n = text.size();

  std::size_t i = 0;
  while (i < n) {
    bool matched = false;
    const std::size_t cap = std::min(vocab.max_surface_len(), n - i);
    for (std::size_t len = cap; len >= 1; --len) {
      if (auto id = vocab.lookup(text.substr(i, len))) {
        out.push_back(SemanticToken::subword(*id));
        i += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;

    // Byte fallback: one Unicode scalar per step. Clamp to the bytes that
    // are actually present so malformed input degrades to single bytes.
    std::size_t len = utf8::sequence_length(bytes[i]);
    if (len == 0 || i + len > n) len = 1;
    for (std::size_t k = 0; k < len; ++k) {
      out.push_back(SemanticToken::byte(bytes[i + k]));
    }
    i += len;
  }
  return out;
}

DetokenizeResult detokenize(std::span<const SemanticToken> stream, const SubwordVocab& vocab) {
  DetokenizeResult res;
  std::vector<std::uint8_t> pending_bytes;

  auto flush_bytes = [&] {
    if (pending_bytes.empty()) return;
    auto decoded = utf8::decode_replacing(pending_bytes);
    res.text += decoded.text;
    res.invalid_spans += decoded.invalid_spans;
    pending_bytes.clear();
  };

  for (const auto& t : stream) {
    switch (t.kind) {
      case TokenKind::Byte:
        pending_bytes.push_back(static_cast<std::uint8_t>(t.value));
        break;
      case TokenKind::Subword: {
        flush_bytes();
        const std::string* surface = vocab.surface_of(t.value);
        if (surface == nullptr) {
          throw VocabMismatchError("unknown subword id " + std::to_string(t.value));
        }
        res.text += *surface;
        break;
      }
      case TokenKind::ExtByte:
      case TokenKind::Prefix:
        throw std::invalid_argument("stream is not in baseline form (token " +
                                    to_string(t) + ")");
    }
  }
  flush_bytes();
  return res;
}

}  // namespace subtok
