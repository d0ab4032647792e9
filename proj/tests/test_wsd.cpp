#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"
#include "topsig/wsd.hpp"

using namespace topsig;
using namespace topsig::testing;

namespace {

std::vector<TaggedDocument> parse_tagged(const std::string& text, const Lexicon& lex) {
  std::istringstream in(text);
  return parse_sense_tagged(in, &lex, "test.corpus");
}

WordSense ws(const std::string& lemma, int n) { return WordSense{lemma, lemma + std::to_string(n), n}; }

Scorer fixed(SenseScores scores) {
  return [scores](const Occurrence&) { return scores; };
}

TopicSignature sig_of(std::vector<SignatureEntry> entries, Granularity context = Granularity::document) {
  TopicSignature s;
  s.entries = std::move(entries);
  s.context = context;
  return s;
}

/// "DOC d" followed by the given words, church tagged with sense n at index `at`.
std::string doc_with_target(const std::vector<std::string>& words, std::size_t at, int n) {
  std::string out = "DOC d\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i == at) out += "church|church|" + std::to_string(n) + "\n";
    out += words[i] + "\n";
  }
  if (at >= words.size()) out += "church|church|" + std::to_string(n) + "\n";
  return out;
}

}  // namespace

TEST(Occurrences, FoundInDocumentOrder) {
  const auto lex = load_lexicon(data_dir() / "church.lex");
  const auto docs = load_sense_tagged(data_dir() / "semcor_like.txt", lex);
  const auto occ = find_occurrences(docs, "church");
  EXPECT_EQ(occ.size(), 19u);
  EXPECT_EQ(occ[0].document->id, "br-a01");
  EXPECT_EQ(occ[0].position, 1u);
  EXPECT_EQ(occ[0].gold.label(), "church#1");
  EXPECT_EQ(find_occurrences(docs, "waiter").size(), 10u);
  EXPECT_TRUE(find_occurrences(docs, "mosque").empty());
}

TEST(Context, DocumentStartBorrowsFromRight) {
  const auto lex = church_lexicon();
  std::vector<std::string> words;
  for (int i = 0; i < 150; ++i) words.push_back("w" + std::to_string(i) + "x");
  const auto docs = parse_tagged(doc_with_target(words, 0, 1), lex);
  const auto occ = find_occurrences(docs, "church");
  ASSERT_EQ(occ.size(), 1u);
  const auto ctx = context_window(occ[0], ContextMode::window(100));
  ASSERT_EQ(ctx.size(), 100u);
  EXPECT_EQ(ctx.front(), "w0x");
  EXPECT_EQ(ctx.back(), "w99x");
}

TEST(Context, SplitsEvenlyInTheMiddle) {
  const auto lex = church_lexicon();
  std::vector<std::string> words;
  for (int i = 0; i < 20; ++i) words.push_back("w" + std::to_string(i) + "x");
  const auto docs = parse_tagged(doc_with_target(words, 10, 1), lex);
  const auto ctx = context_window(find_occurrences(docs, "church")[0], ContextMode::window(4));
  EXPECT_EQ(ctx, (Context{"w8x", "w9x", "w10x", "w11x"}));
  // near the end the left side borrows
  const auto end_docs = parse_tagged(doc_with_target(words, 19, 1), lex);
  const auto end_ctx = context_window(find_occurrences(end_docs, "church")[0], ContextMode::window(4));
  EXPECT_EQ(end_ctx, (Context{"w16x", "w17x", "w18x", "w19x"}));
}

TEST(Context, WindowSkipsClosedClassAndTarget) {
  const auto lex = church_lexicon();
  const auto docs = parse_tagged("DOC d\nthe\nold\nchurch|church|2\nand\nthe\nchurch|church|1\nstood\n", lex);
  const auto occ = find_occurrences(docs, "church");
  ASSERT_EQ(occ.size(), 2u);
  EXPECT_EQ(context_window(occ[0], ContextMode::window(100)), (Context{"old", "stand"}));
}

TEST(Context, SentenceMode) {
  const auto lex = church_lexicon();
  // 6 tokens: 3 closed-class, the target and 2 open-class words
  const auto docs = parse_tagged("DOC d\nfar\naway\n.\nthe\nold\nchurch|church|2\nstood\nby\nthe\n.\nnext\n", lex);
  const auto occ = find_occurrences(docs, "church");
  ASSERT_EQ(occ.size(), 1u);
  EXPECT_EQ(occ[0].sentence_index, 1u);
  EXPECT_EQ(context_window(occ[0], ContextMode::sentence()), (Context{"old", "stand"}));
}

TEST(Context, DefaultWindow) {
  EXPECT_EQ(ContextMode::window().size, 100u);
  EXPECT_EQ(kDefaultWindow, 100u);
}

TEST(SignatureScore, EmptyContext) {
  std::map<WordSense, TopicSignature> sigs{{ws("c", 1), sig_of({{"a", 2.0}})}, {ws("c", 2), sig_of({{"b", 1.0}})}};
  const auto scores = score_by_signature({}, sigs);
  ASSERT_EQ(scores.size(), 2u);
  for (const auto& [s, v] : scores) EXPECT_EQ(v, 0.0);
}

TEST(SignatureScore, Multiplicity) {
  std::map<WordSense, TopicSignature> sigs{{ws("c", 1), sig_of({{"a", 2.5}})}};
  EXPECT_DOUBLE_EQ(score_by_signature({"a", "x", "a"}, sigs).at(ws("c", 1)), 5.0);
}

TEST(SignatureScore, MatchesLinearScanOracle) {
  std::map<WordSense, TopicSignature> sigs{
      {ws("church", 1), sig_of({{"catholic", 59.03}, {"spirit", 43.97}, {"community", 27.61}})},
      {ws("church", 2), sig_of({{"door", 10.90}, {"window", 8.92}, {"house", 8.54}})},
      {ws("church", 3), sig_of({{"sunday", 20.5}, {"attend", 12.6}, {"house", 6.3}})}};
  const Context ctx{"catholic", "house", "door", "sunday", "house", "walk", "spirit", "attend"};
  const auto scores = score_by_signature(ctx, sigs);
  for (const auto& [sense, sig] : sigs) {
    double want = 0;
    for (const auto& w : ctx) {
      for (const auto& e : sig.entries) {
        if (e.term == w) want += e.weight;
      }
    }
    EXPECT_DOUBLE_EQ(scores.at(sense), want) << sense.label();
  }
}

TEST(WordlistScore, CountsHits) {
  std::map<WordSense, std::set<std::string>> lists{{ws("c", 1), {"faith", "doctrine"}}, {ws("c", 2), {"tower"}}};
  const auto scores = score_by_wordlist({"faith", "faith", "doctrine", "stone"}, lists);
  EXPECT_EQ(scores.at(ws("c", 1)), 3.0);
  EXPECT_EQ(scores.at(ws("c", 2)), 0.0);
}

TEST(WordlistScore, EmptyLists) {
  std::map<WordSense, std::set<std::string>> lists{{ws("c", 1), {}}, {ws("c", 2), {}}};
  for (const auto& [s, v] : score_by_wordlist({"faith"}, lists)) EXPECT_EQ(v, 0.0);
}

TEST(WordlistScore, MultiwordContiguous) {
  std::map<WordSense, std::set<std::string>> lists{{ws("church", 1), {"Christian church"}}};
  // target lemma is never in a context, so "church" here stands for a contiguous phrase part
  EXPECT_EQ(score_by_wordlist({"christian", "church", "faith", "christian", "church"}, lists).at(ws("church", 1)), 2.0);
  EXPECT_EQ(score_by_wordlist({"christian", "faith", "church"}, lists).at(ws("church", 1)), 0.0);
  EXPECT_EQ(score_by_wordlist({"christian", "churches"}, lists).at(ws("church", 1)), 0.0);
}

TEST(Disambiguate, UniqueArgmax) {
  const std::vector<WordSense> cands{ws("c", 1), ws("c", 2)};
  Occurrence occ;
  occ.gold = ws("c", 1);
  const auto d = disambiguate(occ, fixed({{ws("c", 1), 3.0}, {ws("c", 2), 1.0}}), cands);
  EXPECT_EQ(d.chosen, (std::vector<WordSense>{ws("c", 1)}));
  EXPECT_EQ(d.credit, 1.0);
  occ.gold = ws("c", 2);
  EXPECT_EQ(disambiguate(occ, fixed({{ws("c", 1), 3.0}, {ws("c", 2), 1.0}}), cands).credit, 0.0);
}

TEST(Disambiguate, TwoWayTie) {
  const std::vector<WordSense> cands{ws("c", 1), ws("c", 2), ws("c", 3)};
  Occurrence occ;
  occ.gold = ws("c", 2);
  const auto d = disambiguate(occ, fixed({{ws("c", 1), 2.0}, {ws("c", 2), 2.0}, {ws("c", 3), 1.0}}), cands);
  EXPECT_EQ(d.chosen.size(), 2u);
  EXPECT_EQ(d.credit, 0.5);
}

TEST(Disambiguate, AllZeroIsFullTie) {
  const std::vector<WordSense> cands{ws("c", 1), ws("c", 2), ws("c", 3), ws("c", 4)};
  Occurrence occ;
  occ.gold = ws("c", 4);
  const auto d = disambiguate(occ, fixed({}), cands);
  EXPECT_EQ(d.chosen.size(), 4u);
  EXPECT_EQ(d.credit, 0.25);
  // scores for non-candidates are ignored
  const auto d2 = disambiguate(occ, fixed({{ws("c", 9), 5.0}}), cands);
  EXPECT_EQ(d2.credit, 0.25);
}

TEST(RandomBaseline, Values) {
  EXPECT_EQ(random_baseline(4), 0.25);
  EXPECT_DOUBLE_EQ(random_baseline(3), 1.0 / 3.0);
  EXPECT_EQ(random_baseline(1), 1.0);
}

TEST(Evaluate, RecallArithmetic) {
  // 10 occurrences: 7 right, 1 two-way tie, 2 wrong
  const auto lex = church_lexicon();
  std::string text;
  for (int i = 0; i < 10; ++i) text += "DOC d" + std::to_string(i) + "\nchurch|church|" + (i < 8 ? "1" : "2") + "\n";
  const auto docs = parse_tagged(text, lex);
  const auto occ = find_occurrences(docs, "church");
  WsdMethod m;
  m.name = "M";
  m.covers = [](std::string_view) { return true; };
  m.score = [](const Occurrence& o) {
    const auto& id = o.document->id;
    if (id == "d7") return SenseScores{{o.gold, 1.0}, {WordSense{"church", "", 2}, 1.0}};
    if (id == "d8" || id == "d9") return SenseScores{{WordSense{"church", "", 1}, 1.0}};
    return SenseScores{{o.gold, 1.0}};
  };
  const std::vector<WsdMethod> methods{m};
  const auto report = evaluate(occ, methods);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].senses, 2u);
  EXPECT_EQ(report.rows[0].occurrences, 10u);
  EXPECT_DOUBLE_EQ(*report.rows[0].recall[0], 0.75);
}

TEST(Evaluate, TotalsWeightedByOccurrences) {
  const auto lex = load_lexicon(data_dir() / "church.lex");
  std::string text;
  for (int i = 0; i < 27; ++i) text += "DOC a" + std::to_string(i) + "\nchurch|church|1\n";
  for (int i = 0; i < 104; ++i) text += "DOC b" + std::to_string(i) + "\nwaiter|waiter|" + (i % 2 ? "1" : "2") + "\n";
  const auto docs = parse_tagged(text, lex);
  auto occ = find_occurrences(docs, "church");
  const auto w = find_occurrences(docs, "waiter");
  occ.insert(occ.end(), w.begin(), w.end());
  const std::vector<WsdMethod> methods{random_method()};
  const auto report = evaluate(occ, methods);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(*report.rows[0].recall[0], 1.0);
  EXPECT_EQ(*report.rows[1].recall[0], 0.5);
  EXPECT_DOUBLE_EQ(*report.total.recall[0], (27 * 1.0 + 104 * 0.5) / 131);
  EXPECT_EQ(report.total.occurrences, 131u);
}

TEST(Evaluate, ColumnsAndSubsetRow) {
  const auto lex = load_lexicon(data_dir() / "church.lex");
  const auto docs = load_sense_tagged(data_dir() / "semcor_like.txt", lex);
  auto occ = find_occurrences(docs, "church");
  const auto w = find_occurrences(docs, "waiter");
  occ.insert(occ.end(), w.begin(), w.end());
  std::vector<WsdMethod> methods{random_method(), wordlist_method(lex, BaselineLevel::syn),
                                 wordlist_method(lex, BaselineLevel::syn_def),
                                 wordlist_method(lex, BaselineLevel::syn_all)};
  std::map<WordSense, TopicSignature> sigs{{lex.sense("church", 1), sig_of({{"faith", 1.0}})}};
  methods.push_back(signature_method("Doc", sigs));
  const auto report = evaluate(occ, methods, "wsj");
  EXPECT_EQ(report.methods, (std::vector<std::string>{"Ran", "Syn", "S+def", "S+all", "Doc"}));
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].word, "church");
  EXPECT_EQ(report.rows[0].senses, 3u);
  EXPECT_DOUBLE_EQ(*report.rows[0].recall[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*report.rows[1].recall[0], 0.5);
  EXPECT_FALSE(report.rows[1].recall[4].has_value());  // no waiter signatures
  EXPECT_FALSE(report.total.recall[4].has_value());
  ASSERT_TRUE(report.subset_total.has_value());
  EXPECT_EQ(report.subset_total->word, "Total wsj");
  EXPECT_EQ(report.subset_total->occurrences, 4u);

  const auto tsv = report.to_tsv();
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "word\t#s\t#occ\tRan\tSyn\tS+def\tS+all\tDoc");
  EXPECT_NE(tsv.find("\nchurch\t3\t19\t0.33\t"), std::string::npos) << tsv;
  EXPECT_NE(tsv.find("\nTotal\t\t29\t"), std::string::npos) << tsv;
  EXPECT_NE(report.to_text().find("Total wsj"), std::string::npos);
}

TEST(Evaluate, SignatureMethodUsesSignatureContext) {
  const auto lex = church_lexicon();
  // sentence signatures only see the containing sentence
  const auto docs = parse_tagged("DOC d\nfaith\n.\nold\nchurch|church|2\n", lex);
  const auto occ = find_occurrences(docs, "church");
  std::map<WordSense, TopicSignature> doc_sigs{{lex.sense("church", 1), sig_of({{"faith", 5.0}})},
                                               {lex.sense("church", 2), sig_of({{"old", 1.0}})}};
  std::map<WordSense, TopicSignature> sent_sigs;
  for (const auto& [s, g] : doc_sigs) sent_sigs.emplace(s, sig_of(g.entries, Granularity::sentence));
  const auto by_doc = signature_method("Doc", doc_sigs).score(occ[0]);
  const auto by_sent = signature_method("Sent", sent_sigs).score(occ[0]);
  EXPECT_EQ(by_doc.at(lex.sense("church", 1)), 5.0);
  EXPECT_EQ(by_sent.at(lex.sense("church", 1)), 0.0);
  EXPECT_EQ(by_sent.at(lex.sense("church", 2)), 1.0);
}

TEST(Evaluate, CandidatesAreAttestedSenses) {
  const auto lex = church_lexicon();
  const auto docs = parse_tagged("DOC a\nchurch|church|1\nDOC b\nchurch|church|3\n", lex);
  const auto occ = find_occurrences(docs, "church");
  const auto decisions = decide_all(occ, random_method());
  ASSERT_EQ(decisions.size(), 2u);
  EXPECT_EQ(decisions[0].chosen.size(), 2u);
  EXPECT_EQ(decisions[0].credit, 0.5);
}
