#include "topsig/lexicon.hpp"

#include <algorithm>
#include <optional>
#include <fstream>
#include <sstream>

#include "topsig/error.hpp"
#include "topsig/log.hpp"

namespace topsig {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

PartOfSpeech parse_pos(const std::string& s, const std::string& source, std::size_t line) {
  if (s == "noun" || s == "n") return PartOfSpeech::noun;
  if (s == "verb" || s == "v") return PartOfSpeech::verb;
  if (s == "adj" || s == "a") return PartOfSpeech::adj;
  if (s == "adv" || s == "r") return PartOfSpeech::adv;
  throw ParseError(source, line, "unknown part of speech '" + s + "'");
}

RelationKind parse_kind(const std::string& s, const std::string& source, std::size_t line) {
  if (s == "hypernym") return RelationKind::hypernym;
  if (s == "hyponym") return RelationKind::hyponym;
  if (s == "meronym") return RelationKind::meronym;
  if (s == "holonym") return RelationKind::holonym;
  throw ParseError(source, line, "unknown relation kind '" + s + "'");
}

std::optional<RelationKind> inverse(RelationKind kind) {
  switch (kind) {
    case RelationKind::hypernym: return RelationKind::hyponym;
    case RelationKind::hyponym: return RelationKind::hypernym;
    default: return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::noun: return "noun";
    case PartOfSpeech::verb: return "verb";
    case PartOfSpeech::adj: return "adj";
    case PartOfSpeech::adv: return "adv";
  }
  return "noun";
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::hypernym: return "hypernym";
    case RelationKind::hyponym: return "hyponym";
    case RelationKind::meronym: return "meronym";
    case RelationKind::holonym: return "holonym";
  }
  return "hypernym";
}

std::string_view to_string(BaselineLevel level) {
  switch (level) {
    case BaselineLevel::syn: return "Syn";
    case BaselineLevel::syn_def: return "S+def";
    case BaselineLevel::syn_all: return "S+all";
  }
  return "Syn";
}

std::string WordSense::label() const { return lemma + "#" + std::to_string(sense_number); }

Lexicon::Lexicon(std::vector<Synset> synsets, std::vector<Relation> relations)
    : synsets_(std::move(synsets)) {
  for (std::size_t i = 0; i < synsets_.size(); ++i) {
    const Synset& s = synsets_[i];
    if (!by_id_.emplace(s.id, i).second) throw LexiconError("duplicate synset id '" + s.id + "'");
    if (s.synonyms.empty()) throw LexiconError("synset '" + s.id + "' has no synonyms");
    std::set<std::string> seen;
    for (const auto& lemma : s.synonyms) {
      const std::string key = to_lower(lemma);
      if (key.empty()) throw LexiconError("synset '" + s.id + "' has an empty synonym");
      if (!seen.insert(key).second) {
        throw LexiconError("synset '" + s.id + "' lists '" + lemma + "' twice");
      }
      sense_index_[key].push_back(s.id);
    }
  }

  auto contains = [this](const Relation& r) {
    return std::find(relations_.begin(), relations_.end(), r) != relations_.end();
  };
  for (auto& r : relations) {
    for (const auto* endpoint : {&r.source, &r.target}) {
      if (!by_id_.count(*endpoint)) {
        throw LexiconError("relation " + std::string(to_string(r.kind)) + " " + r.source + " " +
                           r.target + " refers to missing synset '" + *endpoint + "'");
      }
    }
    if (!contains(r)) relations_.push_back(r);
    if (auto inv = inverse(r.kind)) {
      Relation back{r.target, *inv, r.source};
      if (!contains(back) &&
          std::find(relations.begin(), relations.end(), back) == relations.end()) {
        relations_.push_back(std::move(back));
      }
    }
  }
}

const Synset* Lexicon::find_synset(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &synsets_[it->second];
}

const Synset& Lexicon::synset(std::string_view id) const {
  if (const Synset* s = find_synset(id)) return *s;
  throw LexiconError("unknown synset '" + std::string(id) + "'");
}

bool Lexicon::has_lemma(std::string_view lemma) const {
  return sense_index_.count(to_lower(lemma)) > 0;
}

std::span<const std::string> Lexicon::sense_ids(std::string_view lemma) const {
  auto it = sense_index_.find(to_lower(lemma));
  if (it == sense_index_.end()) return {};
  return it->second;
}

std::vector<WordSense> Lexicon::senses(std::string_view lemma) const {
  std::vector<WordSense> out;
  const std::string key = to_lower(lemma);
  int number = 0;
  for (const auto& id : sense_ids(key)) out.push_back(WordSense{key, id, ++number});
  return out;
}

WordSense Lexicon::sense(std::string_view lemma, int sense_number) const {
  auto ids = sense_ids(lemma);
  if (sense_number < 1 || static_cast<std::size_t>(sense_number) > ids.size()) {
    throw LexiconError("unknown sense " + to_lower(lemma) + "#" + std::to_string(sense_number));
  }
  return WordSense{to_lower(lemma), ids[sense_number - 1], sense_number};
}

std::vector<const Synset*> Lexicon::related(std::string_view synset_id, RelationKind kind) const {
  std::vector<const Synset*> out;
  for (const auto& r : relations_) {
    if (r.kind == kind && r.source == synset_id) out.push_back(&synset(r.target));
  }
  return out;
}

Lexicon parse_lexicon(std::istream& in, const std::string& source) {
  std::vector<Synset> synsets;
  std::vector<Relation> relations;
  std::vector<std::size_t> relation_lines;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    std::istringstream head(stripped);
    std::string keyword;
    head >> keyword;
    if (keyword == "SYNSET") {
      const auto bar1 = stripped.find('|');
      const auto bar2 = bar1 == std::string::npos ? bar1 : stripped.find('|', bar1 + 1);
      if (bar2 == std::string::npos) {
        throw ParseError(source, line_no, "expected 'SYNSET <id> <pos> | synonyms | gloss'");
      }
      std::istringstream fields(stripped.substr(0, bar1));
      std::string kw, id, pos, extra;
      fields >> kw >> id >> pos;
      if (id.empty() || pos.empty() || (fields >> extra)) {
        throw ParseError(source, line_no, "expected 'SYNSET <id> <pos>' before the first '|'");
      }
      Synset s;
      s.id = id;
      s.pos = parse_pos(pos, source, line_no);
      std::istringstream syns(stripped.substr(bar1 + 1, bar2 - bar1 - 1));
      std::string syn;
      while (std::getline(syns, syn, ';')) {
        auto t = trim(syn);
        if (t.empty()) throw ParseError(source, line_no, "empty synonym in synset '" + id + "'");
        s.synonyms.push_back(std::move(t));
      }
      if (s.synonyms.empty()) throw ParseError(source, line_no, "synset '" + id + "' has no synonyms");
      s.gloss = trim(std::string_view(stripped).substr(bar2 + 1));
      if (s.gloss.empty()) warn(source + ":" + std::to_string(line_no) + ": synset '" + id + "' has an empty gloss");
      synsets.push_back(std::move(s));
    } else if (keyword == "REL") {
      std::string kind, src, tgt, extra;
      head >> kind >> src >> tgt;
      if (tgt.empty() || (head >> extra)) {
        throw ParseError(source, line_no, "expected 'REL <kind> <source-id> <target-id>'");
      }
      relations.push_back(Relation{src, parse_kind(kind, source, line_no), tgt});
      relation_lines.push_back(line_no);
    } else {
      throw ParseError(source, line_no, "unknown record '" + keyword + "'");
    }
  }

  // Report structural problems with the line that caused them.
  std::set<std::string> ids;
  for (const auto& s : synsets) {
    if (!ids.insert(s.id).second) throw LexiconError(source + ": duplicate synset id '" + s.id + "'");
  }
  for (std::size_t i = 0; i < relations.size(); ++i) {
    for (const auto* endpoint : {&relations[i].source, &relations[i].target}) {
      if (!ids.count(*endpoint)) {
        throw LexiconError(source + ":" + std::to_string(relation_lines[i]) +
                           ": relation refers to missing synset '" + *endpoint + "'");
      }
    }
  }
  try {
    return Lexicon(std::move(synsets), std::move(relations));
  } catch (const LexiconError& e) {
    throw LexiconError(source + ": " + e.what());
  }
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return parse_lexicon(in, path.string());
}

std::string serialize_lexicon(const Lexicon& lexicon) {
  std::ostringstream out;
  for (const auto& s : lexicon.synsets()) {
    out << "SYNSET " << s.id << ' ' << to_string(s.pos) << " | ";
    for (std::size_t i = 0; i < s.synonyms.size(); ++i) {
      if (i) out << "; ";
      out << s.synonyms[i];
    }
    out << " |";
    if (!s.gloss.empty()) out << ' ' << s.gloss;
    out << '\n';
  }
  for (const auto& r : lexicon.relations()) {
    out << "REL " << to_string(r.kind) << ' ' << r.source << ' ' << r.target << '\n';
  }
  return out.str();
}

std::vector<std::string> monosemous_synonyms(const Lexicon& lexicon, const WordSense& sense) {
  const Synset& s = lexicon.synset(lexicon.sense(sense.lemma, sense.sense_number).synset);
  std::vector<std::string> out;
  for (const auto& syn : s.synonyms) {
    if (to_lower(syn) == sense.lemma) continue;
    if (lexicon.sense_ids(syn).size() == 1) out.push_back(syn);
  }
  return out;
}

std::set<std::string> baseline_wordlist(const Lexicon& lexicon, const WordSense& sense,
                                        BaselineLevel level, const Lemmatizer& lemmatizer) {
  const Synset& s = lexicon.synset(lexicon.sense(sense.lemma, sense.sense_number).synset);
  std::set<std::string> out;
  auto add_synonyms = [&](const Synset& synset) {
    for (const auto& syn : synset.synonyms) {
      if (to_lower(syn) != sense.lemma) out.insert(syn);
    }
  };

  add_synonyms(s);
  if (level == BaselineLevel::syn) return out;

  for (const auto& sentence : tokenize(s.gloss, lemmatizer)) {
    for (const auto& token : sentence) {
      if (token.open_class && token.lemma != sense.lemma) out.insert(token.lemma);
    }
  }
  if (level == BaselineLevel::syn_def) return out;

  for (auto kind : {RelationKind::hypernym, RelationKind::hyponym, RelationKind::meronym}) {
    for (const Synset* neighbour : lexicon.related(s.id, kind)) add_synonyms(*neighbour);
  }
  return out;
}

}  // namespace topsig
