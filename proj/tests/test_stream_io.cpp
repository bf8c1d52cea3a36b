#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "subtok/errors.hpp"
#include "subtok/stream_io.hpp"

using namespace subtok;

TEST_CASE("id lines round-trip in both formats") {
  std::mt19937 rng(1);
  std::uniform_int_distribution<std::uint32_t> id(0, 1 << 20);
  std::uniform_int_distribution<int> len(0, 40);

  std::vector<std::vector<std::uint32_t>> lines;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::uint32_t> seq;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) seq.push_back(id(rng));
    lines.push_back(std::move(seq));
  }

  for (auto fmt : {StreamFormat::Ids, StreamFormat::Json}) {
    std::ostringstream out;
    write_id_lines(out, lines, fmt);
    std::istringstream in(out.str());
    CHECK(read_id_lines(in, fmt) == lines);
  }
}

TEST_CASE("id line parsing details") {
  std::istringstream in("1 2 3\n\n  7   8 \n4294967295\n");
  const auto lines = read_id_lines(in, StreamFormat::Ids);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(lines[1].empty());
  CHECK(lines[2] == std::vector<std::uint32_t>{7, 8});
  CHECK(lines[3] == std::vector<std::uint32_t>{4294967295u});
}

TEST_CASE("id line parse errors") {
  std::istringstream bad("1 x 3\n");
  CHECK_THROWS_AS(read_id_lines(bad, StreamFormat::Ids), ParseError);
  std::istringstream negative("-4\n");
  CHECK_THROWS_AS(read_id_lines(negative, StreamFormat::Ids), ParseError);
  std::istringstream overflow("99999999999\n");
  CHECK_THROWS_AS(read_id_lines(overflow, StreamFormat::Ids), ParseError);
  std::istringstream not_array("{\"a\": 1}\n");
  CHECK_THROWS_AS(read_id_lines(not_array, StreamFormat::Json), ParseError);
  std::istringstream bad_json("[1, 2\n");
  CHECK_THROWS_AS(read_id_lines(bad_json, StreamFormat::Json), ParseError);
  std::istringstream signed_json("[-1]\n");
  CHECK_THROWS_AS(read_id_lines(signed_json, StreamFormat::Json), ParseError);
}

TEST_CASE("CRLF line endings are handled") {
  std::istringstream in("1 2\r\n3\r\n");
  const auto lines = read_id_lines(in, StreamFormat::Ids);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == std::vector<std::uint32_t>{1, 2});
  CHECK(lines[1] == std::vector<std::uint32_t>{3});

  std::istringstream text("abc\r\ndef\n");
  const auto tl = read_text_lines(text);
  REQUIRE(tl.size() == 2);
  CHECK(tl[0] == "abc");
  CHECK(tl[1] == "def");
}

TEST_CASE("vocab map JSON round-trips") {
  const auto vm = VocabMap::identity();
  const auto json = vocab_map_json(vm);
  std::istringstream in(json);
  const auto loaded = load_vocab_map(in);
  CHECK(loaded.byte_ids() == vm.byte_ids());
  CHECK(loaded.ext_ids() == vm.ext_ids());
  CHECK(loaded.prefix_ids() == vm.prefix_ids());
  CHECK(loaded.vocab_size() == vm.vocab_size());
}

TEST_CASE("vocab map validation") {
  SUBCASE("wrong array size") {
    std::istringstream in(R"({"byte_ids": [1, 2], "ext_ids": [], "prefix_ids": []})");
    CHECK_THROWS_AS(load_vocab_map(in), ParseError);
  }
  SUBCASE("missing field") {
    std::istringstream in(R"({"byte_ids": []})");
    CHECK_THROWS_AS(load_vocab_map(in), ParseError);
  }
  SUBCASE("not json") {
    std::istringstream in("byte_ids: 1");
    CHECK_THROWS_AS(load_vocab_map(in), ParseError);
  }
  SUBCASE("duplicate ids across mappings") {
    auto j = nlohmann::json::parse(vocab_map_json(VocabMap::identity()));
    j["prefix_ids"] = {0, 513, 514};  // collides with byte 0
    std::istringstream in(j.dump());
    CHECK_THROWS_AS(load_vocab_map(in), VocabMismatchError);
  }
  SUBCASE("vocab_size below the reserved ids") {
    auto j = nlohmann::json::parse(vocab_map_json(VocabMap::identity()));
    j["vocab_size"] = 100;
    std::istringstream in(j.dump());
    CHECK_THROWS_AS(load_vocab_map(in), VocabMismatchError);
  }
}

TEST_CASE("subword vocab loading assigns line-based ids") {
  std::istringstream in("the\n of\nand\n");
  const auto vocab = load_subword_vocab(in, 515);
  CHECK(vocab.size() == 3);
  CHECK(vocab.lookup("the") == 515);
  CHECK(vocab.lookup(" of") == 516);
  CHECK(vocab.lookup("and") == 517);
}

TEST_CASE("subword vocab rejects empty and duplicate lines") {
  std::istringstream empty_line("the\n\nand\n");
  CHECK_THROWS_AS(load_subword_vocab(empty_line, 515), ParseError);
  std::istringstream dup("the\nthe\n");
  CHECK_THROWS_AS(load_subword_vocab(dup, 515), ParseError);
}

TEST_CASE("missing files raise IoError") {
  CHECK_THROWS_AS(read_id_file("/nonexistent/path.ids", StreamFormat::Ids), IoError);
  CHECK_THROWS_AS(read_text_file_lines("/nonexistent/path.txt"), IoError);
  CHECK_THROWS_AS(load_vocab_map_file("/nonexistent/vm.json"), IoError);
  CHECK_THROWS_AS(load_subword_vocab_file("/nonexistent/v.txt"), IoError);
}

TEST_CASE("report JSON mirrors the report fields") {
  EncodeReport enc;
  enc.input_len = 9;
  enc.output_len = 7;
  enc.reduction = 2.0 / 9.0;
  enc.prefix_switches = 1;
  enc.compressed_chars = 3;
  const auto j = nlohmann::json::parse(encode_report_json(enc));
  CHECK(j["input_len"] == 9);
  CHECK(j["output_len"] == 7);
  CHECK(j["reduction"].get<double>() == doctest::Approx(2.0 / 9.0));
  CHECK(j["prefix_switches"] == 1);
  CHECK(j["compressed_chars"] == 3);
  CHECK(j["raw_bytes_passed"] == 0);

  DecodeReport dec;
  dec.decode_errors = 2;
  dec.error_positions = {3, 9};
  const auto dj = nlohmann::json::parse(decode_report_json(dec, 1, 4));
  CHECK(dj["decode_errors"] == 2);
  CHECK(dj["error_positions"] == std::vector<std::size_t>{3, 9});
  CHECK(dj["sequences_with_errors"] == 1);
  CHECK(dj["invalid_utf8_spans"] == 4);
}

TEST_CASE("length report serialization") {
  LengthReport rep;
  rep.corpus = "demo";
  rep.alpha = 2.5;
  LengthReportRow row;
  row.scope = "total";
  row.baseline_len = 100;
  row.ours_len = 90;
  row.diff = 0.1;
  row.baseline_entropy = 1.0;
  row.ours_entropy = 0.9;
  row.baseline_eff = 0.5;
  row.ours_eff = 0.45;
  rep.rows.push_back(row);

  const auto j = nlohmann::json::parse(length_report_json(rep));
  CHECK(j["corpus"] == "demo");
  CHECK(j["alpha"].get<double>() == doctest::Approx(2.5));
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["scope"] == "total");
  CHECK(j["rows"][0]["diff"].get<double>() == doctest::Approx(0.1));
  CHECK(!j["rows"][0].contains("baseline_entropy_bits"));

  const auto jb = nlohmann::json::parse(length_report_json(rep, true));
  CHECK(jb["rows"][0]["baseline_entropy_bits"].get<double>() ==
        doctest::Approx(1.0 / kNatsPerBit));

  const auto csv = length_report_csv(rep);
  CHECK(csv.find("corpus,scope,form,tokens,entropy_nats,efficiency\n") == 0);
  CHECK(csv.find("demo,total,baseline,100,") != std::string::npos);
  CHECK(csv.find("demo,total,ours,90,") != std::string::npos);
}

TEST_CASE("throughput and compare report serialization") {
  const auto rep = make_throughput_report(5000, 10.0, 500.0, 100000, 95000);
  const auto j = nlohmann::json::parse(throughput_report_json(rep));
  CHECK(j["tokens_out"] == 5000);
  CHECK(j["tps"].get<double>() == doctest::Approx(500.0));
  CHECK(j["relative_gain"].get<double>() == doctest::Approx(100000.0 / 95000.0));
  CHECK(j["perceived_tps"].get<double>() == doctest::Approx(500.0 * 100000.0 / 95000.0));

  CompareReport cmp{291857, 282423, 291857.0 / 282423.0};
  const auto cj = nlohmann::json::parse(compare_report_json(cmp));
  CHECK(cj["control_tokens"] == 291857);
  CHECK(cj["relative_gain"].get<double>() == doctest::Approx(1.0334).epsilon(5e-5));
}

TEST_CASE("histogram CSV is rank-sorted and deterministic") {
  FreqHistogram h;
  h.add(5, 10);
  h.add(2, 30);
  h.add(9, 10);
  h.add(1, 1);
  const auto csv = histogram_csv(h);
  CHECK(csv ==
        "token_id,count,rank\n"
        "2,30,1\n"
        "5,10,2\n"
        "9,10,3\n"
        "1,1,4\n");

  FreqHistogram other;
  other.add(0, 2);
  const auto multi = histogram_csv({{"a", &h}, {"b", &other}});
  CHECK(multi.find("form,token_id,count,rank\n") == 0);
  CHECK(multi.find("a,2,30,1\n") != std::string::npos);
  CHECK(multi.find("b,0,2,1\n") != std::string::npos);
}
