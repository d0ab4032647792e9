#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "topsig/error.hpp"
#include "topsig/signature.hpp"

using namespace topsig;
using namespace topsig::testing;

namespace {

FrequencyVector vec(const std::string& name, std::map<std::string, std::uint64_t> counts) {
  FrequencyVector v;
  v.collection = name;
  for (const auto& [t, n] : counts) v.add(t, n);
  return v;
}

DocumentCollection coll(const std::string& label, std::vector<Document> docs) {
  DocumentCollection c(label);
  for (auto& d : docs) c.add(std::move(d));
  return c;
}

TopicSignature sig(std::vector<SignatureEntry> entries) {
  TopicSignature s;
  s.collection = "s";
  s.entries = std::move(entries);
  return s;
}

}  // namespace

TEST(FrequencyVector, SentenceContextExample) {
  const auto c = coll("c", {make_document("d", "", "the old church stood")});
  const auto v = frequency_vector(c, Granularity::sentence, "church");
  EXPECT_EQ(v.counts, (decltype(v.counts){{"old", 1}, {"stand", 1}}));
  EXPECT_EQ(v.total, 2u);
}

TEST(FrequencyVector, EmptyCollection) {
  const auto v = frequency_vector(DocumentCollection("e"), Granularity::document, "church");
  EXPECT_EQ(v.total, 0u);
  EXPECT_TRUE(v.counts.empty());
  EXPECT_EQ(v.collection, "e");
}

TEST(FrequencyVector, SentenceContextUsesOnlyTargetSentences) {
  // target in sentences 2 and 4 of 5
  const auto c = coll("c", {make_document("d", "",
                                          "Apples grow. Bells ring near the church. Cats sleep. "
                                          "Church doors open wide. Dogs bark.")});
  const auto sent = frequency_vector(c, Granularity::sentence, "church");
  EXPECT_EQ(sent.counts, (decltype(sent.counts){{"bell", 1}, {"ring", 1}, {"door", 1}, {"open", 1}, {"wide", 1}}));
  const auto doc = frequency_vector(c, Granularity::document, "church");
  EXPECT_EQ(doc.total, 11u);
  EXPECT_EQ(doc.count("apple"), 1u);
  EXPECT_EQ(doc.count("church"), 0u);
}

TEST(FrequencyVector, SurfaceForm) {
  const auto c = coll("c", {make_document("d", "", "Churches stood tall")});
  const auto v = frequency_vector(c, Granularity::document, "church", TermForm::surface);
  EXPECT_EQ(v.count("stood"), 1u);
  EXPECT_EQ(v.count("stand"), 0u);
}

TEST(Chi2, ExpectedMeanExample) {
  const ContingencyStats stats({vec("a", {{"x", 8}, {"y", 2}}), vec("b", {{"x", 2}, {"y", 8}})});
  EXPECT_DOUBLE_EQ(expected_mean(stats, 0, "x"), 5.0);
  EXPECT_EQ(stats.freq(0, "x"), 8u);
  EXPECT_DOUBLE_EQ(chi2_weight(stats, 0, "x", Chi2Variant::squared), 1.8);
  EXPECT_DOUBLE_EQ(chi2_weight(stats, 0, "x", Chi2Variant::linear), 0.6);
  EXPECT_EQ(chi2_weight(stats, 1, "x"), 0.0);
}

TEST(Chi2, EqualFrequencyIsZero) {
  const ContingencyStats stats({vec("a", {{"x", 5}, {"y", 5}}), vec("b", {{"x", 5}, {"y", 5}})});
  EXPECT_EQ(chi2_weight(stats, 0, "x", Chi2Variant::squared), 0.0);
  EXPECT_EQ(chi2_weight(stats, 0, "x", Chi2Variant::linear), 0.0);
}

TEST(Chi2, SingleCollectionMeanEqualsFrequency) {
  const ContingencyStats stats({vec("a", {{"x", 7}, {"y", 3}})});
  EXPECT_DOUBLE_EQ(expected_mean(stats, 0, "x"), 7.0);
  EXPECT_EQ(chi2_weight(stats, 0, "x"), 0.0);
}

TEST(Chi2, EmptyTableIsAnError) {
  const ContingencyStats stats({vec("a", {}), vec("b", {})});
  EXPECT_THROW(expected_mean(stats, 0, "x"), StatisticsError);
  EXPECT_THROW(chi2_weight(stats, 0, "x"), StatisticsError);
}

TEST(Chi2, RandomTablesMatchNaiveOracle) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 200; ++round) {
    const std::size_t rows = 2 + rng() % 4;
    const std::size_t terms = 1 + rng() % 50;
    NaiveTable oracle;
    std::vector<FrequencyVector> vectors;
    for (std::size_t i = 0; i < rows; ++i) {
      std::map<std::string, std::uint64_t> counts;
      for (std::size_t j = 0; j < terms; ++j) {
        if (rng() % 3 == 0) continue;
        counts["t" + std::to_string(j)] = 1 + rng() % 100;
      }
      oracle.counts.push_back(counts);
      vectors.push_back(vec("r" + std::to_string(i), counts));
    }
    const ContingencyStats stats(vectors);
    if (stats.grand_total() == 0) continue;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < terms; ++j) {
        const std::string t = "t" + std::to_string(j);
        for (bool squared : {true, false}) {
          const double want = oracle.weight(i, t, squared);
          const double got = chi2_weight(stats, i, t, squared ? Chi2Variant::squared : Chi2Variant::linear);
          if (want == 0.0) {
            EXPECT_EQ(got, 0.0);
          } else {
            EXPECT_NEAR(got, want, 1e-9 * std::abs(want));
          }
        }
      }
    }
  }
}

TEST(BuildSignatures, ThreeSensesEachContrasted) {
  std::map<std::string, DocumentCollection> colls;
  colls.emplace("church#1", coll("church#1", {lemma_document("a", {{"faith", "faith", "bishop", "church"}})}));
  colls.emplace("church#2", coll("church#2", {lemma_document("b", {{"stone", "tower", "stone", "church"}})}));
  colls.emplace("church#3", coll("church#3", {lemma_document("c", {{"hymn", "sing", "hymn", "church"}})}));
  const auto sigs = build_signatures(colls, Granularity::document, "church");
  ASSERT_EQ(sigs.size(), 3u);
  EXPECT_EQ(sigs.at("church#1").entries.front().term, "faith");
  EXPECT_EQ(sigs.at("church#2").entries.front().term, "stone");
  EXPECT_EQ(sigs.at("church#3").entries.front().term, "hymn");
  EXPECT_EQ(sigs.at("church#1").weight_of("stone"), 0.0);
  EXPECT_EQ(sigs.at("church#1").weight_of("church"), 0.0);
}

TEST(BuildSignatures, IdenticalCollectionsGiveEmptySignatures) {
  std::map<std::string, DocumentCollection> colls;
  colls.emplace("a", coll("a", {lemma_document("1", {{"x", "y", "y"}})}));
  colls.emplace("b", coll("b", {lemma_document("2", {{"x", "y", "y"}})}));
  const auto sigs = build_signatures(colls, Granularity::document, "t");
  EXPECT_TRUE(sigs.at("a").entries.empty());
  EXPECT_TRUE(sigs.at("b").entries.empty());
}

TEST(BuildSignatures, MatchesBruteForce) {
  std::map<std::string, DocumentCollection> colls;
  colls.emplace("a", coll("a", {lemma_document("1", {{"x", "x", "x", "y", "z"}, {"x", "w"}})}));
  colls.emplace("b", coll("b", {lemma_document("2", {{"y", "y", "z", "w", "w", "w"}})}));
  NaiveTable oracle;
  oracle.counts = {{{"x", 4}, {"y", 1}, {"z", 1}, {"w", 1}}, {{"y", 2}, {"z", 1}, {"w", 3}}};
  for (auto variant : {Chi2Variant::squared, Chi2Variant::linear}) {
    const auto sigs = build_signatures(colls, Granularity::document, "t", variant);
    std::size_t row = 0;
    for (const char* label : {"a", "b"}) {
      const auto& s = sigs.at(label);
      EXPECT_EQ(s.variant, variant);
      for (const char* t : {"x", "y", "z", "w"}) {
        EXPECT_NEAR(s.weight_of(t), oracle.weight(row, t, variant == Chi2Variant::squared), 1e-12) << label << t;
      }
      ++row;
    }
  }
}

TEST(BuildSignatures, EntriesSortedAndPositive) {
  std::map<std::string, DocumentCollection> colls;
  colls.emplace("a", coll("a", {lemma_document("1", {{"b", "b", "a", "a", "c", "c", "c", "d"}})}));
  colls.emplace("b", coll("b", {lemma_document("2", {{"d", "d", "d", "e"}})}));
  const auto s = build_signatures(colls, Granularity::document, "t").at("a");
  ASSERT_EQ(s.entries.size(), 3u);
  EXPECT_EQ(s.entries[0].term, "c");
  EXPECT_EQ(s.entries[1].term, "a");  // tie with b broken alphabetically
  EXPECT_EQ(s.entries[2].term, "b");
  for (const auto& e : s.entries) EXPECT_GT(e.weight, 0.0);
}

TEST(BuildSignatures, ContrastSetNeedsTwo) {
  std::map<std::string, DocumentCollection> one;
  one.emplace("a", coll("a", {lemma_document("1", {{"x"}})}));
  EXPECT_THROW(build_signatures(one, Granularity::document, "t"), ContrastSetError);
  EXPECT_THROW(build_signatures({}, Granularity::document, "t"), ContrastSetError);
}

TEST(WordSignature, TwoDocSplitMatchesOracle) {
  const std::vector<Document> docs = {lemma_document("1", {{"church", "x", "x", "y"}}),
                                      lemma_document("2", {{"y", "z", "z"}})};
  const auto ws = build_word_signature(docs, "church");
  NaiveTable oracle;
  oracle.counts = {{{"x", 2}, {"y", 1}}, {{"y", 1}, {"z", 2}}};
  for (const char* t : {"x", "y", "z"}) EXPECT_NEAR(ws.weight_of(t), oracle.weight(0, t, true), 1e-12) << t;
  EXPECT_EQ(ws.weight_of("z"), 0.0);
  EXPECT_EQ(ws.collection, "church");
}

TEST(WordSignature, DegenerateSplits) {
  const std::vector<Document> all = {lemma_document("1", {{"church", "x"}}), lemma_document("2", {{"church"}})};
  EXPECT_THROW(build_word_signature(all, "church"), DegenerateSplitError);
  EXPECT_THROW(build_word_signature(all, "mosque"), DegenerateSplitError);
}

TEST(WordSignature, NonTargetOnlyTermsNeverAppear) {
  const auto docs = load_corpus_documents(data_dir() / "reference");
  const auto ws = build_word_signature(docs, "church");
  for (const char* t : {"market", "team", "recipe", "river"}) EXPECT_EQ(ws.weight_of(t), 0.0) << t;
  EXPECT_GT(ws.weight_of("bishop"), kDefaultCutoff);
}

TEST(Filter, IdentityAtZeroCutoff) {
  const auto s = sig({{"a", 3.0}, {"b", 1.0}});
  const auto ws = sig({{"a", 0.5}, {"b", 9.0}, {"c", 1.0}});
  EXPECT_EQ(filter_by_word_signature(s, ws, 0.0), s);
}

TEST(Filter, EmptyAtInfiniteCutoff) {
  const auto s = sig({{"a", 3.0}, {"b", 1.0}});
  EXPECT_TRUE(filter_by_word_signature(s, s, std::numeric_limits<double>::infinity()).entries.empty());
}

TEST(Filter, StraddlingCutoffOnComputedWordSignature) {
  // word-signature weights from a 2x5 table; 3 of the 5 terms end above 4.64
  const std::vector<Document> docs = {
      lemma_document("1", {{"church", "p", "p", "p", "p", "p", "p", "p", "p", "p", "p", "p", "p", "q", "q", "q", "q",
                            "q", "q", "q", "q", "q", "q", "q", "q", "r", "r", "r", "r", "r", "r", "r", "r", "r", "r",
                            "s", "s", "s", "t"}}),
      lemma_document("2", {{"s", "s", "s", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t",
                            "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t", "t",
                            "t", "t", "t", "t"}})};
  const auto ws = build_word_signature(docs, "church");
  NaiveTable oracle;
  oracle.counts = {{{"p", 12}, {"q", 12}, {"r", 10}, {"s", 3}, {"t", 1}}, {{"s", 3}, {"t", 37}}};
  std::vector<std::string> expected;
  for (const char* t : {"p", "q", "r", "s", "t"}) {
    if (oracle.weight(0, t, true) > kDefaultCutoff) expected.push_back(t);
  }
  ASSERT_EQ(expected.size(), 3u);
  const auto s = sig({{"p", 9.0}, {"q", 8.0}, {"r", 7.0}, {"s", 6.0}, {"t", 5.0}});
  const auto f = filter_by_word_signature(s, ws);
  std::vector<std::string> got;
  for (const auto& e : f.entries) got.push_back(e.term);
  EXPECT_EQ(got, expected);
  EXPECT_EQ(f.entries[0].weight, 9.0);
}

TEST(Filter, SubsetAndIdempotent) {
  const auto s = sig({{"a", 3.0}, {"b", 2.0}, {"c", 1.0}});
  const auto ws = sig({{"a", 6.1}, {"b", 4.64}, {"c", 5.0}});
  const auto once = filter_by_word_signature(s, ws, 4.64);
  EXPECT_EQ(once.entries, (std::vector<SignatureEntry>{{"a", 3.0}, {"c", 1.0}}));
  EXPECT_EQ(filter_by_word_signature(once, ws, 4.64), once);
}

TEST(SignatureFile, RoundTrip) {
  TopicSignature s;
  s.collection = "church#1";
  s.variant = Chi2Variant::linear;
  s.context = Granularity::sentence;
  s.entries = {{"catholic", 59.03}, {"spirit", 43.97}, {"mr.", 13.59}};
  const auto text = serialize_signature(s);
  EXPECT_EQ(text, "# signature church#1 variant=linear context=sentence\ncatholic\t59.03\nspirit\t43.97\nmr.\t13.59\n");
  std::istringstream in(text);
  const auto back = parse_signature(in);
  EXPECT_EQ(back, s);
  EXPECT_EQ(serialize_signature(back), text);
}

TEST(SignatureFile, Errors) {
  std::istringstream bad_header("# sig x\n");
  EXPECT_THROW(parse_signature(bad_header), ParseError);
  std::istringstream bad_row("# signature x variant=squared context=document\nterm 1.0\n");
  EXPECT_THROW(parse_signature(bad_row), ParseError);
  std::istringstream bad_weight("# signature x variant=squared context=document\nterm\tabc\n");
  EXPECT_THROW(parse_signature(bad_weight), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(parse_signature(empty), ParseError);
}

TEST(SignatureFile, TwoDecimalFormatting) {
  EXPECT_EQ(format_weight(1.0 / 3.0), "0.33");
  EXPECT_EQ(format_weight(0.125), "0.12");
  EXPECT_EQ(format_weight(4.64), "4.64");
  EXPECT_EQ(parse_variant("squared"), Chi2Variant::squared);
  EXPECT_THROW(parse_variant("cubic"), ConfigError);
}
