#include "subtok/stream_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "subtok/errors.hpp"

namespace subtok {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::uint32_t> parse_id_line(const std::string& line, std::size_t line_no) {
  std::vector<std::uint32_t> ids;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    std::uint32_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t')) {
      throw ParseError("line " + std::to_string(line_no) + ": expected unsigned id near '" +
                       std::string(p, std::min<std::size_t>(end - p, 16)) + "'");
    }
    ids.push_back(value);
    p = next;
  }
  return ids;
}

std::vector<std::uint32_t> parse_json_line(const std::string& line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!j.is_array()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected a JSON array of ids");
  }
  std::vector<std::uint32_t> ids;
  ids.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) {
      throw ParseError("line " + std::to_string(line_no) + ": ids must be unsigned integers");
    }
    const auto u = v.get<std::uint64_t>();
    if (u > 0xFFFFFFFFull) {
      throw ParseError("line " + std::to_string(line_no) + ": id out of range");
    }
    ids.push_back(static_cast<std::uint32_t>(u));
  }
  return ids;
}

}  // namespace

std::vector<std::string> read_text_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::vector<std::uint32_t>> read_id_lines(std::istream& in, StreamFormat fmt) {
  std::vector<std::vector<std::uint32_t>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(fmt == StreamFormat::Ids ? parse_id_line(line, line_no)
                                           : parse_json_line(line.empty() ? "[]" : line, line_no));
  }
  return out;
}

void write_id_lines(std::ostream& out, const std::vector<std::vector<std::uint32_t>>& lines,
                    StreamFormat fmt) {
  for (const auto& ids : lines) {
    if (fmt == StreamFormat::Ids) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out << ' ';
        out << ids[i];
      }
    } else {
      nlohmann::json j = ids;
      out << j.dump();
    }
    out << '\n';
  }
}

std::vector<std::vector<std::uint32_t>> read_id_file(const std::string& path, StreamFormat fmt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_id_lines(in, fmt);
}

std::vector<std::string> read_text_file_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_text_lines(in);
}

VocabMap load_vocab_map(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("vocab map: ") + e.what());
  }

  auto read_ids = [&](const char* key, auto& out) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != out.size()) {
      throw ParseError("vocab map: '" + std::string(key) + "' must be an array of " +
                       std::to_string(out.size()) + " ids");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& v = j[key][i];
      if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 0xFFFFFFFFull) {
        throw ParseError("vocab map: '" + std::string(key) + "[" + std::to_string(i) +
                         "]' must be an unsigned 32-bit id");
      }
      out[i] = static_cast<std::uint32_t>(v.get<std::uint64_t>());
    }
  };

  std::array<std::uint32_t, 256> byte_ids{};
  std::array<std::uint32_t, 256> ext_ids{};
  std::array<std::uint32_t, 3> prefix_ids{};
  read_ids("byte_ids", byte_ids);
  read_ids("ext_ids", ext_ids);
  read_ids("prefix_ids", prefix_ids);

  std::optional<std::uint32_t> vocab_size;
  if (j.contains("vocab_size")) {
    if (!j["vocab_size"].is_number_unsigned()) {
      throw ParseError("vocab map: 'vocab_size' must be an unsigned integer");
    }
    vocab_size = j["vocab_size"].get<std::uint32_t>();
  }
  return VocabMap::create(byte_ids, ext_ids, prefix_ids, vocab_size);
}

VocabMap load_vocab_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return load_vocab_map(in);
}

std::string vocab_map_json(const VocabMap& vm) {
  ordered_json j;
  j["byte_ids"] = vm.byte_ids();
  j["ext_ids"] = vm.ext_ids();
  j["prefix_ids"] = vm.prefix_ids();
  if (vm.vocab_size()) j["vocab_size"] = *vm.vocab_size();
  return j.dump();
}

SubwordVocab load_subword_vocab(std::istream& in, std::uint32_t first_id) {
  SubwordVocab vocab(first_id);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      throw ParseError("subword vocab line " + std::to_string(line_no) + " is empty");
    }
    try {
      vocab.add(line);
    } catch (const ParseError& e) {
      throw ParseError("subword vocab line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return vocab;
}

SubwordVocab load_subword_vocab_file(const std::string& path, std::uint32_t first_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return load_subword_vocab(in, first_id);
}

std::string encode_report_json(const EncodeReport& rep) {
  ordered_json j;
  j["input_len"] = rep.input_len;
  j["output_len"] = rep.output_len;
  j["reduction"] = rep.reduction;
  j["prefix_switches"] = rep.prefix_switches;
  j["compressed_chars"] = rep.compressed_chars;
  j["raw_bytes_passed"] = rep.raw_bytes_passed;
  return j.dump();
}

std::string decode_report_json(const DecodeReport& rep, std::size_t sequences_with_errors,
                               std::size_t invalid_utf8_spans) {
  ordered_json j;
  j["output_len"] = rep.tokens.size();
  j["decode_errors"] = rep.decode_errors;
  j["error_positions"] = rep.error_positions;
  j["sequences_with_errors"] = sequences_with_errors;
  j["invalid_utf8_spans"] = invalid_utf8_spans;
  return j.dump();
}

std::string length_report_json(const LengthReport& rep, bool with_bits) {
  ordered_json j;
  j["corpus"] = rep.corpus;
  j["alpha"] = rep.alpha;
  j["rows"] = ordered_json::array();
  for (const auto& row : rep.rows) {
    ordered_json r;
    r["scope"] = row.scope;
    r["baseline_len"] = row.baseline_len;
    r["ours_len"] = row.ours_len;
    r["diff"] = row.diff;
    r["baseline_entropy_nats"] = row.baseline_entropy;
    r["ours_entropy_nats"] = row.ours_entropy;
    if (with_bits) {
      r["baseline_entropy_bits"] = row.baseline_entropy / kNatsPerBit;
      r["ours_entropy_bits"] = row.ours_entropy / kNatsPerBit;
    }
    r["baseline_eff"] = row.baseline_eff;
    r["ours_eff"] = row.ours_eff;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2);
}

std::string length_report_csv(const LengthReport& rep) {
  std::ostringstream out;
  out << "corpus,scope,form,tokens,entropy_nats,efficiency\n";
  for (const auto& row : rep.rows) {
    out << rep.corpus << ',' << row.scope << ",baseline," << row.baseline_len << ','
        << row.baseline_entropy << ',' << row.baseline_eff << '\n';
    out << rep.corpus << ',' << row.scope << ",ours," << row.ours_len << ','
        << row.ours_entropy << ',' << row.ours_eff << '\n';
  }
  return out.str();
}

std::string throughput_report_json(const ThroughputReport& rep) {
  ordered_json j;
  j["tokens_out"] = rep.tokens_out;
  j["total_time"] = rep.total_time;
  j["tps"] = rep.tps;
  j["reference_tokens_control"] = rep.reference_tokens_control;
  j["reference_tokens_experimental"] = rep.reference_tokens_experimental;
  j["relative_gain"] = rep.relative_gain;
  j["perceived_tps"] = rep.perceived_tps;
  return j.dump(2);
}

std::string compare_report_json(const CompareReport& rep) {
  ordered_json j;
  j["control_tokens"] = rep.control_tokens;
  j["experimental_tokens"] = rep.experimental_tokens;
  j["relative_gain"] = rep.relative_gain;
  return j.dump();
}

namespace {

void append_histogram_rows(std::ostringstream& out, const std::string& form,
                           const FreqHistogram& h, bool with_form) {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> rows(h.counts.begin(), h.counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::size_t rank = 1;
  for (const auto& [token, count] : rows) {
    if (with_form) out << form << ',';
    out << token << ',' << count << ',' << rank++ << '\n';
  }
}

}  // namespace

std::string histogram_csv(const FreqHistogram& h) {
  std::ostringstream out;
  out << "token_id,count,rank\n";
  append_histogram_rows(out, "", h, false);
  return out.str();
}

std::string histogram_csv(const std::vector<std::pair<std::string, const FreqHistogram*>>& hists) {
  std::ostringstream out;
  out << "form,token_id,count,rank\n";
  for (const auto& [form, h] : hists) {
    append_histogram_rows(out, form, *h, true);
  }
  return out.str();
}

}  // namespace subtok
