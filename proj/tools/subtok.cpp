// subtok: sub-byte compression of UTF-8 byte-fallback token streams, plus
// sequence-length / entropy / throughput analysis over corpora.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subtok/errors.hpp"
#include "subtok/metrics.hpp"
#include "subtok/stream_io.hpp"
#include "subtok/tokenizer.hpp"
#include "subtok/tokenstream.hpp"

namespace {

using namespace subtok;
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;   // I/O failures and malformed input data
constexpr int kExitVocab = 3;  // vocabulary mismatch
constexpr int kExitDecode = 4; // strict-mode decode failure

struct Options {
  std::string input;
  std::string input2;
  std::vector<std::string> inputs;
  std::string out_path;
  std::string vocab_map_path;
  std::string subword_vocab_path;
  std::string format = "ids";
  std::string mode = "strict";
  std::string report_format = "json";
  std::string corpus_name = "corpus";
  std::string hist_out_path;
  bool bits = false;
  double alpha = 2.5;
  std::optional<double> tps;
  std::optional<std::uint64_t> tokens_out;
  std::optional<double> time_s;
  std::vector<std::string> hex_bytes;
};

VocabMap load_map(const Options& opt) {
  return opt.vocab_map_path.empty() ? VocabMap::identity()
                                    : load_vocab_map_file(opt.vocab_map_path);
}

// Subword ids start right above the highest reserved id so they can never
// collide with the byte/ext/prefix bindings.
std::uint32_t subword_base(const VocabMap& vm) {
  std::uint32_t top = 0;
  for (auto id : vm.byte_ids()) top = std::max(top, id);
  for (auto id : vm.ext_ids()) top = std::max(top, id);
  for (auto id : vm.prefix_ids()) top = std::max(top, id);
  return top + 1;
}

SubwordVocab load_vocab(const Options& opt, const VocabMap& vm) {
  const std::uint32_t base = subword_base(vm);
  return opt.subword_vocab_path.empty() ? SubwordVocab(base)
                                        : load_subword_vocab_file(opt.subword_vocab_path, base);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write to " + path + " failed");
}

// Stream data goes to --out (or stdout); the side report goes to stdout when
// the stream went to a file, to stderr when the stream occupies stdout.
void write_report(const Options& opt, const std::string& report) {
  if (opt.out_path.empty()) {
    std::cerr << report << '\n';
  } else {
    std::cout << report << '\n';
  }
}

StreamFormat stream_format(const Options& opt) {
  return opt.format == "json" ? StreamFormat::Json : StreamFormat::Ids;
}

int cmd_encode(const Options& opt) {
  const VocabMap vm = load_map(opt);
  const SubwordVocab vocab = load_vocab(opt, vm);

  std::vector<std::vector<std::uint32_t>> sequences;
  if (opt.format == "text") {
    for (const auto& line : read_text_file_lines(opt.input)) {
      sequences.push_back(to_ids(tokenize(line, vocab), vm));
    }
  } else {
    sequences = read_id_file(opt.input, stream_format(opt));
  }

  EncodeReport total;
  std::vector<std::vector<std::uint32_t>> out_lines;
  out_lines.reserve(sequences.size());
  for (const auto& ids : sequences) {
    const auto stream = from_ids(ids, vm);
    auto res = encode_stream(stream);
    total.input_len += res.report.input_len;
    total.output_len += res.report.output_len;
    total.prefix_switches += res.report.prefix_switches;
    total.compressed_chars += res.report.compressed_chars;
    total.raw_bytes_passed += res.report.raw_bytes_passed;
    out_lines.push_back(to_ids(res.tokens, vm));
  }
  total.reduction = total.input_len > 0
                        ? static_cast<double>(total.input_len - total.output_len) /
                              static_cast<double>(total.input_len)
                        : 0.0;

  std::ostringstream body;
  write_id_lines(body, out_lines, stream_format(opt));
  write_output(opt.out_path, body.str());
  write_report(opt, encode_report_json(total));
  return kExitOk;
}

int cmd_decode(const Options& opt) {
  const VocabMap vm = load_map(opt);
  const SubwordVocab vocab = load_vocab(opt, vm);
  const DecodeMode mode = opt.mode == "lenient" ? DecodeMode::Lenient : DecodeMode::Strict;
  const StreamFormat in_fmt =
      opt.format == "json" ? StreamFormat::Json : StreamFormat::Ids;

  const auto sequences = read_id_file(opt.input, in_fmt);

  std::size_t total_errors = 0;
  std::size_t sequences_with_errors = 0;
  std::size_t invalid_spans = 0;
  std::size_t output_len = 0;
  ordered_json errors = ordered_json::array();

  std::ostringstream body;
  std::vector<std::vector<std::uint32_t>> out_lines;
  for (std::size_t line_no = 0; line_no < sequences.size(); ++line_no) {
    const auto stream = from_ids(sequences[line_no], vm);
    DecodeReport rep;
    try {
      rep = decode_stream(stream, mode);
    } catch (const DecodeError& e) {
      std::cerr << "subtok: line " << line_no + 1 << ": " << e.what() << '\n';
      return kExitDecode;
    }
    if (rep.decode_errors > 0) {
      ++sequences_with_errors;
      total_errors += rep.decode_errors;
      ordered_json entry;
      entry["line"] = line_no + 1;
      entry["positions"] = rep.error_positions;
      errors.push_back(std::move(entry));
    }
    output_len += rep.tokens.size();
    if (opt.format == "text") {
      auto detok = detokenize(rep.tokens, vocab);
      invalid_spans += detok.invalid_spans;
      body << detok.text << '\n';
    } else {
      out_lines.push_back(to_ids(rep.tokens, vm));
    }
  }
  if (opt.format != "text") write_id_lines(body, out_lines, in_fmt);

  write_output(opt.out_path, body.str());

  ordered_json j;
  j["sequences"] = sequences.size();
  j["output_len"] = output_len;
  j["decode_errors"] = total_errors;
  j["sequences_with_errors"] = sequences_with_errors;
  j["invalid_utf8_spans"] = invalid_spans;
  j["errors"] = std::move(errors);
  write_report(opt, j.dump());
  return kExitOk;
}

std::vector<std::string> collect_corpus_files(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& input : inputs) {
    fs::path p(input);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(p)) {
        if (entry.is_regular_file()) files.push_back(entry.path().string());
      }
    } else if (fs::is_regular_file(p, ec)) {
      files.push_back(input);
    } else {
      throw IoError("no such file or directory: " + input);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_analyze(const Options& opt) {
  const VocabMap vm = load_map(opt);
  const SubwordVocab vocab = load_vocab(opt, vm);

  // All documents are read up front: an unreadable file aborts the run
  // before any report is written (no partial aggregation).
  std::vector<std::string> documents;
  for (const auto& file : collect_corpus_files(opt.inputs)) {
    for (auto& line : read_text_file_lines(file)) {
      documents.push_back(std::move(line));
    }
  }

  LengthAnalyzer analyzer(vocab, vm);
  for (const auto& doc : documents) analyzer.add_document(doc);
  const LengthReport rep = analyzer.report(opt.alpha, opt.corpus_name);

  if (!opt.hist_out_path.empty()) {
    const auto baseline_byte = byte_portion(analyzer.baseline_histogram(), vm, TokenForm::Baseline);
    const auto ours_byte = byte_portion(analyzer.ours_histogram(), vm, TokenForm::Compressed);
    write_output(opt.hist_out_path,
                 histogram_csv({{"baseline_total", &analyzer.baseline_histogram()},
                                {"ours_total", &analyzer.ours_histogram()},
                                {"baseline_byte_portion", &baseline_byte},
                                {"ours_byte_portion", &ours_byte}}));
  }

  write_output(opt.out_path, opt.report_format == "csv" ? length_report_csv(rep)
                                                        : length_report_json(rep, opt.bits) + "\n");
  return kExitOk;
}

std::uint64_t count_tokens(const std::string& path, StreamFormat fmt) {
  std::uint64_t n = 0;
  for (const auto& ids : read_id_file(path, fmt)) n += ids.size();
  return n;
}

int cmd_compare(const Options& opt) {
  CompareReport rep;
  rep.control_tokens = count_tokens(opt.input, stream_format(opt));
  rep.experimental_tokens = count_tokens(opt.input2, stream_format(opt));
  rep.relative_gain = relative_gain(rep.control_tokens, rep.experimental_tokens);
  write_output(opt.out_path, compare_report_json(rep) + "\n");
  return kExitOk;
}

int cmd_tps(const Options& opt) {
  const std::uint64_t control = count_tokens(opt.input, stream_format(opt));
  const std::uint64_t experimental = count_tokens(opt.input2, stream_format(opt));

  std::uint64_t tokens_out = 0;
  double total_time = 0.0;
  double tps = 0.0;
  if (opt.tps) {
    tps = *opt.tps;
  } else {
    tokens_out = *opt.tokens_out;
    total_time = *opt.time_s;
    if (total_time <= 0.0) throw std::invalid_argument("--time-s must be positive");
    tps = static_cast<double>(tokens_out) / total_time;
  }

  const auto rep = make_throughput_report(tokens_out, total_time, tps, control, experimental);
  write_output(opt.out_path, throughput_report_json(rep) + "\n");
  return kExitOk;
}

std::uint8_t parse_hex_byte(const std::string& text) {
  std::string s = text;
  if (s.size() > 2 && (s[0] == '0') && (s[1] == 'x' || s[1] == 'X')) s = s.substr(2);
  if (s.empty() || s.size() > 2 ||
      s.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw ParseError("not a hex byte: " + text);
  }
  return static_cast<std::uint8_t>(std::stoul(s, nullptr, 16));
}

int cmd_pack(const Options& opt) {
  const std::uint8_t b1 = parse_hex_byte(opt.hex_bytes[0]);
  const std::uint8_t b2 = parse_hex_byte(opt.hex_bytes[1]);
  const std::uint8_t b3 = parse_hex_byte(opt.hex_bytes[2]);

  auto hex = [](unsigned v, int width) {
    std::ostringstream s;
    s << std::hex << std::uppercase << v;
    std::string body = s.str();
    while (static_cast<int>(body.size()) < width) body.insert(body.begin(), '0');
    return "0x" + body;
  };

  std::ostringstream out;
  out << "bytes    " << hex(b1, 2) << ' ' << hex(b2, 2) << ' ' << hex(b3, 2) << '\n';
  const auto packed = pack_char(b1, b2, b3);
  if (!packed) {
    std::string reason = classify_lead_byte(b1)
                             ? "b2/b3 are not continuation bytes (0x80-0xBF)"
                             : "lead byte outside 0xE4-0xEF";
    std::cerr << out.str() << "ineligible: " << reason << "; character passes through raw\n";
    return kExitData;
  }
  out << "prefix   p" << static_cast<int>(packed->prefix) + 1 << "  bits6="
      << hex(prefix_bits6(packed->prefix), 2) << "  (= b1 >> 2)\n";
  out << "hi       " << hex(packed->hi, 3) << "  (= (b1 & 3) << 7 | (b2 & 0xFE) >> 1)\n";
  out << "lo       " << hex(packed->lo, 3) << "  (= (b2 & 1) << 8 | b3)\n";
  out << "tokens   p" << static_cast<int>(packed->prefix) + 1 << ' ' << hex(packed->hi, 2)
      << ' ' << hex(packed->lo, 2) << '\n';
  const auto bytes = unpack_char(*packed);
  out << "unpacked " << hex(bytes[0], 2) << ' ' << hex(bytes[1], 2) << ' ' << hex(bytes[2], 2)
      << '\n';
  write_output(opt.out_path, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-byte codec and analysis toolkit for UTF-8 byte-fallback token streams"};
  app.require_subcommand(1);

  Options opt;

  auto add_vocab_flags = [&](CLI::App* cmd) {
    cmd->add_option("--vocab-map", opt.vocab_map_path, "vocab map JSON (default: identity)");
    cmd->add_option("--subword-vocab", opt.subword_vocab_path,
                    "subword vocabulary, one surface per line (default: none)");
  };

  auto* encode = app.add_subcommand("encode", "compress a baseline token stream");
  encode->add_option("input", opt.input, "input file")->required();
  encode->add_option("--format", opt.format, "input format: text|ids|json")
      ->check(CLI::IsMember({"text", "ids", "json"}));
  encode->add_option("--out", opt.out_path, "output stream path (default: stdout)");
  add_vocab_flags(encode);

  auto* decode = app.add_subcommand("decode", "decompress back to baseline form");
  decode->add_option("input", opt.input, "compressed stream file")->required();
  decode->add_option("--format", opt.format, "output format: text|ids|json")
      ->check(CLI::IsMember({"text", "ids", "json"}));
  decode->add_option("--mode", opt.mode, "strict|lenient (default: strict)")
      ->check(CLI::IsMember({"strict", "lenient"}));
  decode->add_option("--out", opt.out_path, "output path (default: stdout)");
  add_vocab_flags(decode);

  auto* analyze = app.add_subcommand("analyze", "sequence-length and entropy report for a corpus");
  analyze->add_option("inputs", opt.inputs, "corpus files or directories")->required();
  analyze->add_option("--alpha", opt.alpha, "Renyi alpha (default: 2.5)")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--report", opt.report_format, "report format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze->add_flag("--bits", opt.bits, "also report entropy in bits");
  analyze->add_option("--corpus", opt.corpus_name, "corpus label in the report");
  analyze->add_option("--hist-out", opt.hist_out_path, "write token histograms as CSV");
  analyze->add_option("--out", opt.out_path, "report path (default: stdout)");
  add_vocab_flags(analyze);

  auto* compare = app.add_subcommand("compare", "relative gain between two reference tokenizations");
  compare->add_option("control", opt.input, "control tokenization file")->required();
  compare->add_option("experimental", opt.input2, "experimental tokenization file")->required();
  compare->add_option("--format", opt.format, "stream format: ids|json")
      ->check(CLI::IsMember({"ids", "json"}));
  compare->add_option("--out", opt.out_path, "report path (default: stdout)");

  auto* tps = app.add_subcommand("tps", "perceived TPS from measured throughput and references");
  tps->add_option("control", opt.input, "control tokenization file")->required();
  tps->add_option("experimental", opt.input2, "experimental tokenization file")->required();
  auto* tps_opt = tps->add_option("--tps", opt.tps, "measured tokens per second");
  auto* toks_opt = tps->add_option("--tokens-out", opt.tokens_out, "total tokens emitted");
  auto* time_opt = tps->add_option("--time-s", opt.time_s, "total wall time in seconds");
  tps->add_option("--format", opt.format, "stream format: ids|json")
      ->check(CLI::IsMember({"ids", "json"}));
  tps->add_option("--out", opt.out_path, "report path (default: stdout)");

  auto* pack = app.add_subcommand("pack", "repack one character given as three hex bytes");
  pack->add_option("bytes", opt.hex_bytes, "three hex bytes, e.g. E4 BC 97")
      ->expected(3);
  pack->add_option("--out", opt.out_path, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (tps->parsed()) {
    const bool have_tps = tps_opt->count() > 0;
    const bool have_pair = toks_opt->count() > 0 && time_opt->count() > 0;
    if (have_tps == have_pair) {
      std::cerr << "tps: pass either --tps or both --tokens-out and --time-s\n";
      return kExitUsage;
    }
  }

  try {
    if (encode->parsed()) return cmd_encode(opt);
    if (decode->parsed()) return cmd_decode(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (tps->parsed()) return cmd_tps(opt);
    if (pack->parsed()) return cmd_pack(opt);
  } catch (const DecodeError& e) {
    std::cerr << "subtok: " << e.what() << '\n';
    return kExitDecode;
  } catch (const VocabMismatchError& e) {
    std::cerr << "subtok: " << e.what() << '\n';
    return kExitVocab;
  } catch (const IoError& e) {
    std::cerr << "subtok: " << e.what() << '\n';
    return kExitData;
  } catch (const ParseError& e) {
    std::cerr << "subtok: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "subtok: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "subtok: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
