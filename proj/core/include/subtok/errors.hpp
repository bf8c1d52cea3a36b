#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subtok {

// Failed to open/read/write a file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data (bad id text, bad JSON, bad vocab file).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An id or surface that the active vocabulary does not know about.
struct VocabMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict-mode decode failure; position is the offset of the offending token
// in the compressed stream.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t position, const std::string& what)
      : std::runtime_error("decode error at offset " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace subtok
