#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subtok/tokenizer.hpp"
#include "subtok/tokenstream.hpp"

namespace subtok {

// Empirical token frequency distribution over a vocabulary of |V| ids.
// Merging is associative and commutative, so accumulation can be sharded
// across documents and combined in any order.
struct FreqHistogram {
  std::unordered_map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t vocab_size = 0;

  void add(std::uint32_t token, std::uint64_t n = 1) {
    if (n == 0) return;
    counts[token] += n;
    total += n;
  }

  void add_all(std::span<const std::uint32_t> tokens) {
    for (auto t : tokens) add(t);
  }

  void merge(const FreqHistogram& other);
};

// Renyi entropy of the empirical distribution, in nats. alpha = 1 is the
// Shannon limit. Throws std::invalid_argument on an empty histogram or
// nonpositive alpha.
double renyi_entropy(const FreqHistogram& h, double alpha);

// Entropy scaled by log |V|; a pure ratio, identical under any log base.
// Requires vocab_size >= 2.
double renyi_efficiency(const FreqHistogram& h, double alpha);

inline constexpr double kNatsPerBit = 0.6931471805599453;  // ln 2

enum class TokenForm { Baseline, Compressed };

// Restriction to ids classified Byte/ExtByte/Prefix under vm. vocab_size
// becomes the byte-class vocabulary: 256 for the baseline form, 515 for the
// compressed form's extended scheme.
FreqHistogram byte_portion(const FreqHistogram& h, const VocabMap& vm, TokenForm form);

// |T_control| / |T_experimental| of the same reference text: a TPS
// multiplier for the experimental tokenizer's expressive power.
double relative_gain(std::uint64_t control_len, std::uint64_t experimental_len);

// Measured TPS scaled by the relative gain: throughput normalized for
// tokenizer verbosity.
double perceived_tps(double tps, double gain);

struct ThroughputReport {
  std::uint64_t tokens_out = 0;
  double total_time = 0.0;  // seconds
  double tps = 0.0;
  std::uint64_t reference_tokens_control = 0;
  std::uint64_t reference_tokens_experimental = 0;
  double relative_gain = 0.0;
  double perceived_tps = 0.0;
};

ThroughputReport make_throughput_report(std::uint64_t tokens_out, double total_time,
                                        double tps, std::uint64_t reference_control,
                                        std::uint64_t reference_experimental);

struct LengthReportRow {
  std::string scope;  // "total" or "byte_portion"
  std::uint64_t baseline_len = 0;
  std::uint64_t ours_len = 0;
  double diff = 0.0;  // (baseline - ours) / baseline
  double baseline_entropy = 0.0;  // nats
  double ours_entropy = 0.0;
  double baseline_eff = 0.0;
  double ours_eff = 0.0;
};

struct LengthReport {
  std::string corpus;
  double alpha = 0.0;
  std::vector<LengthReportRow> rows;
};

// Tokenizes and encodes documents, accumulating full-vocabulary id
// histograms for the baseline and compressed forms. The vocabulary size for
// the total scope is 256 + |subwords| for the baseline tokenizer and
// 515 + |subwords| for the extended one (identical subword expansion).
class LengthAnalyzer {
 public:
  LengthAnalyzer(const SubwordVocab& vocab, const VocabMap& vm);

  void add_document(std::string_view text);
  void merge(const LengthAnalyzer& other);

  LengthReport report(double alpha, std::string corpus_name = "corpus") const;

  const FreqHistogram& baseline_histogram() const { return baseline_; }
  const FreqHistogram& ours_histogram() const { return ours_; }
  const VocabMap& vocab_map() const { return *vm_; }

 private:
  const SubwordVocab* vocab_;
  const VocabMap* vm_;
  FreqHistogram baseline_;
  FreqHistogram ours_;
};

LengthReport length_reduction_report(std::span<const std::string> documents,
                                     const SubwordVocab& vocab, const VocabMap& vm,
                                     double alpha, std::string corpus_name = "corpus");

}  // namespace subtok
