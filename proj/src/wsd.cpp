#include "topsig/wsd.hpp"

#include <algorithm>
#include <iomanip>
#include <memory>
#include <sstream>
#include <unordered_map>

namespace topsig {

namespace {

using LemmaSequence = std::vector<std::string>;
using CompiledLists = std::map<WordSense, std::vector<LemmaSequence>>;

// Open-class lemma sequences, filtered the same way as contexts.
CompiledLists compile_lists(const std::map<WordSense, std::set<std::string>>& lists,
                            const Lemmatizer& lemmatizer) {
  CompiledLists out;
  for (const auto& [sense, entries] : lists) {
    auto& compiled = out[sense];
    for (const auto& entry : entries) {
      LemmaSequence seq;
      for (const auto& sentence : tokenize(entry, lemmatizer)) {
        for (const auto& t : sentence) {
          if (t.open_class) seq.push_back(t.lemma);
        }
      }
      if (!seq.empty()) compiled.push_back(std::move(seq));
    }
  }
  return out;
}

SenseScores score_compiled(const Context& context, const CompiledLists& lists) {
  SenseScores scores;
  for (const auto& [sense, entries] : lists) {
    double score = 0.0;
    for (const auto& seq : entries) {
      if (seq.size() > context.size()) continue;
      for (std::size_t i = 0; i + seq.size() <= context.size(); ++i) {
        if (std::equal(seq.begin(), seq.end(), context.begin() + static_cast<std::ptrdiff_t>(i))) {
          score += 1.0;
        }
      }
    }
    scores[sense] = score;
  }
  return scores;
}

using WeightMaps = std::map<WordSense, std::unordered_map<std::string, double>>;

SenseScores score_weights(const Context& context, const WeightMaps& weights) {
  SenseScores scores;
  for (const auto& [sense, map] : weights) {
    double score = 0.0;
    for (const auto& lemma : context) {
      if (auto it = map.find(lemma); it != map.end()) score += it->second;
    }
    scores[sense] = score;
  }
  return scores;
}

std::vector<const Token*> flatten(const TaggedDocument& doc) {
  std::vector<const Token*> out;
  for (const auto& sentence : doc.sentences) {
    for (const auto& t : sentence) out.push_back(&t.token);
  }
  return out;
}

std::map<std::string, std::vector<WordSense>> attested_senses(std::span<const Occurrence> occurrences) {
  std::map<std::string, std::set<WordSense>> sets;
  for (const auto& occ : occurrences) sets[occ.gold.lemma].insert(occ.gold);
  std::map<std::string, std::vector<WordSense>> out;
  for (auto& [lemma, set] : sets) out[lemma].assign(set.begin(), set.end());
  return out;
}

bool occurrence_less(const WsdDecision& a, const WsdDecision& b) {
  if (a.occurrence.document->id != b.occurrence.document->id) {
    return a.occurrence.document->id < b.occurrence.document->id;
  }
  return a.occurrence.position < b.occurrence.position;
}

std::string format_cell(const std::optional<double>& v) { return v ? format_weight(*v) : "-"; }

}  // namespace

std::vector<Occurrence> find_occurrences(std::span<const TaggedDocument> docs, std::string_view lemma) {
  const std::string target = to_lower(lemma);
  std::vector<Occurrence> out;
  for (const auto& doc : docs) {
    std::size_t position = 0;
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      for (const auto& t : doc.sentences[si]) {
        if (t.sense && t.token.lemma == target) out.push_back(Occurrence{&doc, position, si, *t.sense});
        ++position;
      }
    }
  }
  return out;
}

Context context_window(const Occurrence& occurrence, ContextMode mode) {
  const std::string& target = occurrence.gold.lemma;
  auto usable = [&](const Token& t) { return t.open_class && t.lemma != target; };

  Context out;
  if (mode.kind == ContextMode::Kind::sentence) {
    for (const auto& t : occurrence.document->sentences.at(occurrence.sentence_index)) {
      if (usable(t.token)) out.push_back(t.token.lemma);
    }
    return out;
  }

  const auto tokens = flatten(*occurrence.document);
  std::vector<const std::string*> left;   // nearest first
  std::vector<const std::string*> right;  // nearest first
  for (std::size_t i = occurrence.position; i-- > 0;) {
    if (usable(*tokens[i])) left.push_back(&tokens[i]->lemma);
  }
  for (std::size_t i = occurrence.position + 1; i < tokens.size(); ++i) {
    if (usable(*tokens[i])) right.push_back(&tokens[i]->lemma);
  }

  const std::size_t n = mode.size;
  std::size_t take_left = std::min(left.size(), n / 2);
  std::size_t take_right = std::min(right.size(), n - take_left);
  take_left = std::min(left.size(), n - take_right);

  out.reserve(take_left + take_right);
  for (std::size_t i = take_left; i-- > 0;) out.push_back(*left[i]);
  for (std::size_t i = 0; i < take_right; ++i) out.push_back(*right[i]);
  return out;
}

SenseScores score_by_signature(const Context& context,
                               const std::map<WordSense, TopicSignature>& signatures) {
  WeightMaps weights;
  for (const auto& [sense, sig] : signatures) weights.emplace(sense, sig.weight_map());
  return score_weights(context, weights);
}

SenseScores score_by_wordlist(const Context& context,
                              const std::map<WordSense, std::set<std::string>>& lists) {
  return score_compiled(context, compile_lists(lists, Lemmatizer::standard()));
}

WsdDecision disambiguate(const Occurrence& occurrence, const Scorer& scorer,
                         std::span<const WordSense> candidates) {
  WsdDecision decision{occurrence, scorer(occurrence), {}, 0.0};
  double best = 0.0;
  bool first = true;
  for (const auto& c : candidates) {
    auto it = decision.scores.find(c);
    const double s = it == decision.scores.end() ? 0.0 : it->second;
    if (first || s > best) {
      best = s;
      decision.chosen.clear();
      first = false;
    }
    if (s == best) decision.chosen.push_back(c);
  }
  if (std::find(decision.chosen.begin(), decision.chosen.end(), occurrence.gold) != decision.chosen.end()) {
    decision.credit = 1.0 / static_cast<double>(decision.chosen.size());
  }
  return decision;
}

double random_baseline(std::size_t candidate_count) {
  return candidate_count == 0 ? 0.0 : 1.0 / static_cast<double>(candidate_count);
}

WsdMethod random_method(std::string name) {
  return WsdMethod{std::move(name), [](std::string_view) { return true; },
                   [](const Occurrence&) { return SenseScores{}; }};
}

WsdMethod wordlist_method(const Lexicon& lexicon, BaselineLevel level, ContextMode mode,
                          const Lemmatizer& lemmatizer) {
  auto cache = std::make_shared<std::map<std::string, CompiledLists>>();
  auto lists_for = [&lexicon, level, &lemmatizer, cache](const std::string& lemma) -> const CompiledLists& {
    auto it = cache->find(lemma);
    if (it == cache->end()) {
      std::map<WordSense, std::set<std::string>> lists;
      for (const auto& sense : lexicon.senses(lemma)) {
        lists.emplace(sense, baseline_wordlist(lexicon, sense, level, lemmatizer));
      }
      it = cache->emplace(lemma, compile_lists(lists, lemmatizer)).first;
    }
    return it->second;
  };
  return WsdMethod{
      std::string(to_string(level)),
      [&lexicon](std::string_view lemma) { return lexicon.has_lemma(lemma); },
      [lists_for, mode](const Occurrence& occ) {
        return score_compiled(context_window(occ, mode), lists_for(occ.gold.lemma));
      }};
}

WsdMethod signature_method(std::string name, std::map<WordSense, TopicSignature> signatures,
                           std::size_t window_size) {
  struct LemmaModel {
    WeightMaps weights;
    ContextMode mode;
  };
  auto models = std::make_shared<std::map<std::string, LemmaModel>>();
  for (const auto& [sense, sig] : signatures) {
    auto& model = (*models)[sense.lemma];
    model.mode = sig.context == Granularity::sentence ? ContextMode::sentence()
                                                      : ContextMode::window(window_size);
    model.weights.emplace(sense, sig.weight_map());
  }
  return WsdMethod{
      std::move(name),
      [models](std::string_view lemma) { return models->count(std::string(lemma)) > 0; },
      [models](const Occurrence& occ) {
        auto it = models->find(occ.gold.lemma);
        if (it == models->end()) return SenseScores{};
        return score_weights(context_window(occ, it->second.mode), it->second.weights);
      }};
}

std::vector<WsdDecision> decide_all(std::span<const Occurrence> occurrences, const WsdMethod& method) {
  const auto candidates = attested_senses(occurrences);
  std::vector<WsdDecision> out;
  out.reserve(occurrences.size());
  for (const auto& occ : occurrences) {
    out.push_back(disambiguate(occ, method.score, candidates.at(occ.gold.lemma)));
  }
  return out;
}

WsdReport evaluate(std::span<const Occurrence> occurrences, std::span<const WsdMethod> methods,
                   std::optional<std::string> subset_prefix) {
  WsdReport report;
  for (const auto& m : methods) report.methods.push_back(m.name);

  const auto candidates = attested_senses(occurrences);
  std::map<std::string, std::vector<Occurrence>> by_word;
  for (const auto& occ : occurrences) by_word[occ.gold.lemma].push_back(occ);

  auto in_subset = [&](const Occurrence& occ) {
    return subset_prefix && occ.document->id.rfind(*subset_prefix, 0) == 0;
  };

  report.total.word = "Total";
  ReportRow subset;
  subset.word = subset_prefix ? "Total " + *subset_prefix : "";
  std::vector<double> total_credit(methods.size(), 0.0);
  std::vector<double> subset_credit(methods.size(), 0.0);
  std::vector<bool> total_covered(methods.size(), true);
  std::vector<bool> subset_covered(methods.size(), true);

  for (const auto& [word, occs] : by_word) {
    ReportRow row;
    row.word = word;
    row.senses = candidates.at(word).size();
    row.occurrences = occs.size();
    report.total.occurrences += occs.size();
    const auto subset_count = static_cast<std::size_t>(std::count_if(occs.begin(), occs.end(), in_subset));
    subset.occurrences += subset_count;

    for (std::size_t m = 0; m < methods.size(); ++m) {
      if (!methods[m].covers(word)) {
        row.recall.push_back(std::nullopt);
        total_covered[m] = false;
        if (subset_count) subset_covered[m] = false;
        continue;
      }
      auto decisions = decide_all(occs, methods[m]);
      // Fixed summation order keeps the report independent of input order.
      std::sort(decisions.begin(), decisions.end(), occurrence_less);
      double credit = 0.0;
      double credit_in_subset = 0.0;
      for (const auto& d : decisions) {
        credit += d.credit;
        if (in_subset(d.occurrence)) credit_in_subset += d.credit;
      }
      row.recall.push_back(credit / static_cast<double>(occs.size()));
      total_credit[m] += credit;
      subset_credit[m] += credit_in_subset;
    }
    report.rows.push_back(std::move(row));
  }

  for (std::size_t m = 0; m < methods.size(); ++m) {
    report.total.recall.push_back(total_covered[m] && report.total.occurrences
                                      ? std::optional(total_credit[m] / static_cast<double>(report.total.occurrences))
                                      : std::nullopt);
    subset.recall.push_back(subset_covered[m] && subset.occurrences
                                ? std::optional(subset_credit[m] / static_cast<double>(subset.occurrences))
                                : std::nullopt);
  }
  if (subset_prefix) report.subset_total = std::move(subset);
  return report;
}

std::string WsdReport::to_tsv() const {
  std::ostringstream out;
  out << "word\t#s\t#occ";
  for (const auto& m : methods) out << '\t' << m;
  out << '\n';
  auto emit = [&](const ReportRow& row, bool totals) {
    out << row.word << '\t' << (totals ? std::string() : std::to_string(row.senses)) << '\t'
        << row.occurrences;
    for (const auto& r : row.recall) out << '\t' << format_cell(r);
    out << '\n';
  };
  for (const auto& row : rows) emit(row, false);
  emit(total, true);
  if (subset_total) emit(*subset_total, true);
  return out.str();
}

std::string WsdReport::to_text() const {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"word", "#s", "#occ"};
  header.insert(header.end(), methods.begin(), methods.end());
  table.push_back(header);
  auto add = [&](const ReportRow& row, bool totals) {
    std::vector<std::string> cells{row.word, totals ? "" : std::to_string(row.senses),
                                   std::to_string(row.occurrences)};
    for (const auto& r : row.recall) cells.push_back(format_cell(r));
    table.push_back(std::move(cells));
  };
  for (const auto& row : rows) add(row, false);
  add(total, true);
  if (subset_total) add(*subset_total, true);

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& r : table) {
    for (std::size_t c = 0; c < r.size(); ++c) widths[c] = std::max(widths[c], r[c].size());
  }
  std::ostringstream out;
  for (const auto& r : table) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 0) {
        line += r[c] + std::string(widths[c] - r[c].size(), ' ');
      } else {
        line += "  " + std::string(widths[c] - r[c].size(), ' ') + r[c];
      }
    }
    out << line << '\n';
  }
  return out.str();
}

}  // namespace topsig
