#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subtok/tokenstream.hpp"

namespace subtok {

// Greedy longest-match subword vocabulary with UTF-8 byte fallback for
// anything it does not cover. Stands in for a trained BPE vocabulary: the
// codec sits downstream of any byte-fallback tokenizer, so merge-order
// fidelity does not matter here, realistic byte runs do.
class SubwordVocab {
 public:
  explicit SubwordVocab(std::uint32_t first_id = kReservedIdCount) : first_id_(first_id) {}

  // Assigns the next free id; throws ParseError on empty or duplicate surface.
  std::uint32_t add(std::string surface);

  std::optional<std::uint32_t> lookup(std::string_view surface) const;
  const std::string* surface_of(std::uint32_t id) const;

  std::size_t size() const { return surfaces_.size(); }
  bool empty() const { return surfaces_.empty(); }
  std::uint32_t first_id() const { return first_id_; }
  std::size_t max_surface_len() const { return max_surface_len_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view sv) const {
      return std::hash<std::string_view>{}(sv);
    }
    std::size_t operator()(const std::string& s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::uint32_t first_id_;
  std::size_t max_surface_len_ = 0;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ids_;
  std::vector<std::string> surfaces_;  // index = id - first_id_
};

// Greedy longest match at each position; a position with no match consumes
// exactly one Unicode scalar and emits its bytes as Byte tokens. Output is
// always baseline form (Subword and Byte only).
std::vector<SemanticToken> tokenize(std::string_view text, const SubwordVocab& vocab);

struct DetokenizeResult {
  std::string text;
  std::size_t invalid_spans = 0;  // U+FFFD substitutions in byte content
};

// Inverse of tokenize on valid input; invalid byte spans are replaced, not
// fatal. Throws VocabMismatchError for a subword id the vocab does not hold.
DetokenizeResult detokenize(std::span<const SemanticToken> stream, const SubwordVocab& vocab);

}  // namespace subtok
