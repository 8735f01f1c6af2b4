#include <cmath>
#include <sstream>

#include "polarkit/random.hpp"
#include "polarkit/vectors.hpp"
#include "test_util.hpp"

using namespace polarkit;

TEST_SUITE("vectors") {
  TEST_CASE("reads the word2vec text format") {
    std::istringstream in("2 3\nmanchi 1 2 3\nchedu -1 0.5 1e-2\n");
    const auto load = read_embeddings(in);
    CHECK(load.table.dim() == 3);
    CHECK(load.table.size() == 2);
    CHECK(*load.table.find("chedu") == std::vector<double>{-1, 0.5, 0.01});
    CHECK(load.warnings.empty());
  }

  TEST_CASE("duplicate tokens keep the last vector and warn") {
    std::istringstream in("2 1\na 1\na 2\n");
    const auto load = read_embeddings(in);
    CHECK(*load.table.find("a") == std::vector<double>{2});
    CHECK(load.warnings.size() == 1);
  }

  TEST_CASE("reader errors") {
    auto fails = [](const std::string& text, Errc code, std::size_t line) {
      std::istringstream in(text);
      try {
        read_embeddings(in);
        FAIL("expected an error");
      } catch (const Error& e) {
        CHECK(e.code() == code);
        CHECK(e.line() == line);
      }
    };
    fails("", Errc::MalformedHeader, 1);
    fails("3\n", Errc::MalformedHeader, 1);
    fails("1 0\n", Errc::MalformedHeader, 1);
    fails("2 2\na 1 2\nb 1\n", Errc::DimensionMismatch, 3);
    fails("1 2\na 1 x\n", Errc::MalformedRow, 2);
    fails("3 1\na 1\n", Errc::MalformedHeader, 1);
  }

  TEST_CASE("write then read is exact") {
    EmbeddingTable t(2);
    t.put("x", {0.1, -1.0 / 3.0});
    t.put("ధోకా", {1e-300, 12345.678});
    std::stringstream buf;
    write_embeddings(t, buf);
    const auto back = read_embeddings(buf).table;
    for (const auto& tok : t.tokens()) CHECK(*back.find(tok) == *t.find(tok));
  }

  TEST_CASE("put enforces the dimension") {
    EmbeddingTable t(2);
    CHECK_ERRC(t.put("a", {1.0}), Errc::DimensionMismatch);
  }

  TEST_CASE("document vector averages in-vocabulary tokens") {
    EmbeddingTable t(2);
    t.put("a", {1, 2});
    t.put("b", {3, 6});
    const auto d = doc_vector({"a", "zz", "b", "a"}, t);
    CHECK(d.oov_count == 1);
    CHECK(d.values[0] == doctest::Approx(5.0 / 3));
    CHECK(d.values[1] == doctest::Approx(10.0 / 3));
    const auto empty = doc_vector({"q", "r"}, t);
    CHECK(empty.values == std::vector<double>{0, 0});
    CHECK(empty.oov_count == 2);
  }

  TEST_CASE("augment appends the four polarity counts") {
    Lexicon uni, bi;
    uni.add({{"manchi"}, PolarityLabel::Positive, Provenance::Manual, {}});
    uni.add({{"DhokA"}, PolarityLabel::Negative, Provenance::Manual, {}});
    uni.add({{"ledu"}, PolarityLabel::Negative, Provenance::Manual, {}});
    bi.add({{"DhokA", "ledu"}, PolarityLabel::Positive, Provenance::Manual, {}});
    const std::vector<std::string> tokens = {"DhokA", "ledu", "manchi", "manchi"};
    const auto fv = augment({0.5, -0.5}, tokens, uni, bi);
    CHECK(fv.values == std::vector<double>{0.5, -0.5, 2, 2, 1, 0});
    CHECK(fv.embedding_dim == 2);
    CHECK(select_features(fv, FeatureSet::Plain) == std::vector<double>{0.5, -0.5});
    CHECK(select_features(fv, FeatureSet::PlusUnigram) == std::vector<double>{0.5, -0.5, 2, 2});
    CHECK(select_features(fv, FeatureSet::PlusBigram) == std::vector<double>{0.5, -0.5, 1, 0});
    CHECK(select_features(fv, FeatureSet::PlusBoth).size() == 6);

    const auto norm = augment({0.5, -0.5}, tokens, uni, bi, AugmentOptions{true});
    CHECK(norm.values[2] == doctest::Approx(0.5));
    CHECK(norm.values[4] == doctest::Approx(0.25));
  }

  TEST_CASE("property: tail counts agree with polling") {
    Rng rng(11);
    Lexicon uni, bi;
    for (int i = 0; i < 6; ++i)
      uni.put({{"w" + std::to_string(i)},
               i % 2 ? PolarityLabel::Negative : PolarityLabel::Positive, Provenance::Manual, {}});
    bi.put({{"w0", "w1"}, PolarityLabel::Negative, Provenance::Manual, {}});
    bi.put({{"w2", "w2"}, PolarityLabel::Positive, Provenance::Manual, {}});
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::string> tokens;
      const auto n = rng.below(30);
      for (std::size_t i = 0; i < n; ++i) tokens.push_back("w" + std::to_string(rng.below(9)));
      const auto fv = augment({}, tokens, uni, bi);
      const auto s = poll_score(tokens, uni, bi, PollingMode::UnigramPlusBigram);
      CHECK(fv.values[0] - fv.values[1] + fv.values[2] - fv.values[3] ==
            static_cast<double>(s.score));
    }
  }

  TEST_CASE("feature matrix TSV header") {
    FeatureVector fv{{0.25, 1, 0, 0, 2}, FeatureVector::Layout::Augmented, 1};
    std::ostringstream out;
    write_feature_matrix({{"r1", "pos", fv}}, out);
    CHECK(out.str() == "id\tlabel\td0\tpos_uni\tneg_uni\tpos_bi\tneg_bi\nr1\tpos\t0.25\t1\t0\t0\t2\n");
  }

  TEST_CASE("feature set names") {
    for (auto fs : kAllFeatureSets) CHECK(parse_feature_set(to_string(fs)) == fs);
  }
}
