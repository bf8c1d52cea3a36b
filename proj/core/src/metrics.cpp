#include "subtok/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace subtok {

void FreqHistogram::merge(const FreqHistogram& other) {
  if (vocab_size == 0) {
    vocab_size = other.vocab_size;
  } else if (other.vocab_size != 0 && other.vocab_size != vocab_size) {
    throw std::invalid_argument("merging histograms over different vocabularies");
  }
  for (const auto& [token, count] : other.counts) {
    counts[token] += count;
  }
  total += other.total;
}

double renyi_entropy(const FreqHistogram& h, double alpha) {
  if (h.total == 0) throw std::invalid_argument("entropy of an empty histogram");
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");

  const double total = static_cast<double>(h.total);
  if (alpha == 1.0) {
    double acc = 0.0;
    for (const auto& [token, count] : h.counts) {
      if (count == 0) continue;
      const double p = static_cast<double>(count) / total;
      acc -= p * std::log(p);
    }
    return acc;
  }
  double acc = 0.0;
  for (const auto& [token, count] : h.counts) {
    if (count == 0) continue;
    acc += std::pow(static_cast<double>(count) / total, alpha);
  }
  return std::log(acc) / (1.0 - alpha);
}

double renyi_efficiency(const FreqHistogram& h, double alpha) {
  if (h.vocab_size < 2) throw std::invalid_argument("efficiency needs vocab_size >= 2");
  return renyi_entropy(h, alpha) / std::log(static_cast<double>(h.vocab_size));
}

FreqHistogram byte_portion(const FreqHistogram& h, const VocabMap& vm, TokenForm form) {
  FreqHistogram out;
  out.vocab_size = form == TokenForm::Baseline ? 256 : kReservedIdCount;
  for (const auto& [token, count] : h.counts) {
    if (vm.is_byte_class_id(token)) out.add(token, count);
  }
  return out;
}

double relative_gain(std::uint64_t control_len, std::uint64_t experimental_len) {
  if (experimental_len == 0) {
    throw std::invalid_argument("relative gain needs a nonempty experimental tokenization");
  }
  return static_cast<double>(control_len) / static_cast<double>(experimental_len);
}

double perceived_tps(double tps, double gain) {
  if (tps < 0.0) throw std::invalid_argument("tps must be nonnegative");
  if (gain <= 0.0) throw std::invalid_argument("gain must be positive");
  return tps * gain;
}

ThroughputReport make_throughput_report(std::uint64_t tokens_out, double total_time,
                                        double tps, std::uint64_t reference_control,
                                        std::uint64_t reference_experimental) {
  ThroughputReport r;
  r.tokens_out = tokens_out;
  r.total_time = total_time;
  r.tps = tps;
  r.reference_tokens_control = reference_control;
  r.reference_tokens_experimental = reference_experimental;
  r.relative_gain = relative_gain(reference_control, reference_experimental);
  r.perceived_tps = perceived_tps(tps, r.relative_gain);
  return r;
}

LengthAnalyzer::LengthAnalyzer(const SubwordVocab& vocab, const VocabMap& vm)
    : vocab_(&vocab), vm_(&vm) {
  baseline_.vocab_size = 256 + vocab.size();
  ours_.vocab_size = kReservedIdCount + vocab.size();
}

void LengthAnalyzer::add_document(std::string_view text) {
  const auto baseline = tokenize(text, *vocab_);
  baseline_.add_all(to_ids(baseline, *vm_));
  const auto encoded = encode_stream(baseline);
  ours_.add_all(to_ids(encoded.tokens, *vm_));
}

void LengthAnalyzer::merge(const LengthAnalyzer& other) {
  baseline_.merge(other.baseline_);
  ours_.merge(other.ours_);
}

namespace {

LengthReportRow make_row(std::string scope, const FreqHistogram& baseline,
                         const FreqHistogram& ours, double alpha) {
  LengthReportRow row;
  row.scope = std::move(scope);
  row.baseline_len = baseline.total;
  row.ours_len = ours.total;
  if (baseline.total > 0) {
    row.diff = (static_cast<double>(baseline.total) - static_cast<double>(ours.total)) /
               static_cast<double>(baseline.total);
    row.baseline_entropy = renyi_entropy(baseline, alpha);
    row.baseline_eff = renyi_efficiency(baseline, alpha);
  }
  if (ours.total > 0) {
    row.ours_entropy = renyi_entropy(ours, alpha);
    row.ours_eff = renyi_efficiency(ours, alpha);
  }
  return row;
}

}  // namespace

LengthReport LengthAnalyzer::report(double alpha, std::string corpus_name) const {
  LengthReport rep;
  rep.corpus = std::move(corpus_name);
  rep.alpha = alpha;
  rep.rows.push_back(make_row("total", baseline_, ours_, alpha));
  rep.rows.push_back(make_row("byte_portion",
                              byte_portion(baseline_, *vm_, TokenForm::Baseline),
                              byte_portion(ours_, *vm_, TokenForm::Compressed), alpha));
  return rep;
}

LengthReport length_reduction_report(std::span<const std::string> documents,
                                     const SubwordVocab& vocab, const VocabMap& vm,
                                     double alpha, std::string corpus_name) {
  LengthAnalyzer analyzer(vocab, vm);
  for (const auto& doc : documents) analyzer.add_document(doc);
  return analyzer.report(alpha, std::move(corpus_name));
}

}  // namespace subtok
