#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subtok/metrics.hpp"
#include "subtok/tokenizer.hpp"
#include "subtok/tokenstream.hpp"

namespace subtok {

// Token-stream files hold one sequence per line: either space-separated
// unsigned decimal ids ("ids") or a JSON array of ids ("json").
enum class StreamFormat { Ids, Json };

std::vector<std::vector<std::uint32_t>> read_id_lines(std::istream& in, StreamFormat fmt);
void write_id_lines(std::ostream& out, const std::vector<std::vector<std::uint32_t>>& lines,
                    StreamFormat fmt);

// Lines split on '\n' with any trailing '\r' stripped (universal newlines).
std::vector<std::string> read_text_lines(std::istream& in);

// Whole-file helpers; throw IoError when the file cannot be opened.
std::vector<std::vector<std::uint32_t>> read_id_file(const std::string& path, StreamFormat fmt);
std::vector<std::string> read_text_file_lines(const std::string& path);

// VocabMap JSON document: byte_ids (256 ids indexed by byte value), ext_ids
// (256 ids indexed by value - 256), prefix_ids (3 ids ordered P1, P2, P3),
// optional vocab_size bounding the id space.
VocabMap load_vocab_map(std::istream& in);
VocabMap load_vocab_map_file(const std::string& path);
std::string vocab_map_json(const VocabMap& vm);

// Subword vocabulary file: UTF-8 text, one surface per line; the id is the
// line number offset by first_id.
SubwordVocab load_subword_vocab(std::istream& in, std::uint32_t first_id = kReservedIdCount);
SubwordVocab load_subword_vocab_file(const std::string& path,
                                     std::uint32_t first_id = kReservedIdCount);

// Report rendering. JSON field order mirrors the structs; output carries no
// timestamps, so identical inputs produce identical bytes.
std::string encode_report_json(const EncodeReport& rep);
std::string decode_report_json(const DecodeReport& rep, std::size_t sequences_with_errors,
                               std::size_t invalid_utf8_spans);
std::string length_report_json(const LengthReport& rep, bool with_bits = false);
std::string length_report_csv(const LengthReport& rep);
std::string throughput_report_json(const ThroughputReport& rep);

struct CompareReport {
  std::uint64_t control_tokens = 0;
  std::uint64_t experimental_tokens = 0;
  double relative_gain = 0.0;
};
std::string compare_report_json(const CompareReport& rep);

// token_id,count,rank rows sorted by count (descending, id ascending for
// ties); reproduces frequency-distribution plots.
std::string histogram_csv(const FreqHistogram& h);
// Same, with a leading "form" column for several histograms side by side.
std::string histogram_csv(const std::vector<std::pair<std::string, const FreqHistogram*>>& hists);

}  // namespace subtok
