#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "subtok/bitcodec.hpp"
#include "subtok/metrics.hpp"
#include "subtok/tokenizer.hpp"
#include "subtok/tokenstream.hpp"
#include "subtok/utf8.hpp"

using namespace subtok;

namespace {

std::vector<std::array<std::uint8_t, 3>> random_triples(std::size_t n) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> lead(0xE4, 0xEF);
  std::uniform_int_distribution<int> cont(0x80, 0xBF);
  std::vector<std::array<std::uint8_t, 3>> triples(n);
  for (auto& t : triples) {
    t = {static_cast<std::uint8_t>(lead(rng)), static_cast<std::uint8_t>(cont(rng)),
         static_cast<std::uint8_t>(cont(rng))};
  }
  return triples;
}

std::string cjk_text(std::size_t chars) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> which(0, 1);
  std::uniform_int_distribution<std::uint32_t> hangul(0xAC00, 0xD7A3);
  std::uniform_int_distribution<std::uint32_t> ideo(0x4E00, 0x9FFF);
  std::string text;
  text.reserve(chars * 3);
  for (std::size_t i = 0; i < chars; ++i) {
    utf8::append(text, which(rng) ? hangul(rng) : ideo(rng));
  }
  return text;
}

std::vector<SemanticToken> baseline_stream(std::size_t chars) {
  const SubwordVocab vocab;
  return tokenize(cjk_text(chars), vocab);
}

}  // namespace

static void BM_PackChar(benchmark::State& state) {
  const auto triples = random_triples(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t = triples[i++ & 4095];
    benchmark::DoNotOptimize(pack_char(t[0], t[1], t[2]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PackChar);

static void BM_UnpackChar(benchmark::State& state) {
  const auto triples = random_triples(4096);
  std::vector<PackedChar> packed;
  packed.reserve(triples.size());
  for (const auto& t : triples) packed.push_back(*pack_char(t[0], t[1], t[2]));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(unpack_char(packed[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_UnpackChar);

static void BM_EncodeStream(benchmark::State& state) {
  const auto stream = baseline_stream(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_stream(stream));
  }
  state.SetItemsProcessed(state.iterations() * stream.size());
}
BENCHMARK(BM_EncodeStream)->Range(1 << 10, 1 << 16);

static void BM_DecodeStream(benchmark::State& state) {
  const auto stream = baseline_stream(static_cast<std::size_t>(state.range(0)));
  const auto encoded = encode_stream(stream).tokens;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_stream(encoded, DecodeMode::Strict));
  }
  state.SetItemsProcessed(state.iterations() * encoded.size());
}
BENCHMARK(BM_DecodeStream)->Range(1 << 10, 1 << 16);

static void BM_Tokenize(benchmark::State& state) {
  SubwordVocab vocab;
  vocab.add("the ");
  vocab.add(" and ");
  const auto text = "the " + cjk_text(static_cast<std::size_t>(state.range(0))) + " and the";
  for (auto _ : state) {
    benchmark::DoNotOptimize(tokenize(text, vocab));
  }
  state.SetBytesProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_Tokenize)->Range(1 << 10, 1 << 15);

static void BM_RenyiEntropy(benchmark::State& state) {
  const auto stream = baseline_stream(1 << 15);
  const auto vm = VocabMap::identity();
  FreqHistogram h;
  h.vocab_size = 256;
  h.add_all(to_ids(stream, vm));
  for (auto _ : state) {
    benchmark::DoNotOptimize(renyi_entropy(h, 2.5));
  }
  state.SetItemsProcessed(state.iterations() * h.counts.size());
}
BENCHMARK(BM_RenyiEntropy);

BENCHMARK_MAIN();
