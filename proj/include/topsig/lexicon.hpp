#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topsig/text.hpp"

namespace topsig {

enum class PartOfSpeech { noun, verb, adj, adv };

enum class RelationKind { hypernym, hyponym, meronym, holonym };

std::string_view to_string(PartOfSpeech pos);
std::string_view to_string(RelationKind kind);

struct Synset {
  std::string id;
  PartOfSpeech pos = PartOfSpeech::noun;
  std::vector<std::string> synonyms;  // as written, e.g. "Christian church"
  std::string gloss;

  friend bool operator==(const Synset&, const Synset&) = default;
};

/// `REL hypernym a b` reads "b is a hypernym of a".
struct Relation {
  std::string source;
  RelationKind kind = RelationKind::hypernym;
  std::string target;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// A lemma paired with one of its synsets. sense_number is the 1-based
/// position of the synset in the lemma's sense list.
struct WordSense {
  std::string lemma;  // lowercase
  std::string synset;
  int sense_number = 0;

  /// "church#1"
  std::string label() const;

  friend bool operator==(const WordSense& a, const WordSense& b) {
    return a.lemma == b.lemma && a.sense_number == b.sense_number;
  }
  friend std::strong_ordering operator<=>(const WordSense& a, const WordSense& b) {
    if (auto c = a.lemma <=> b.lemma; c != 0) return c;
    return a.sense_number <=> b.sense_number;
  }
};

/// Immutable WordNet-style lexicon. Sense order for every lemma follows the
/// order in which its synsets were added.
class Lexicon {
 public:
  Lexicon() = default;

  /// Validates and normalizes: every hypernym gets its inverse hyponym and
  /// vice versa; duplicate relations are dropped. Throws LexiconError.
  Lexicon(std::vector<Synset> synsets, std::vector<Relation> relations);

  const std::vector<Synset>& synsets() const { return synsets_; }
  const std::vector<Relation>& relations() const { return relations_; }

  const Synset* find_synset(std::string_view id) const;
  const Synset& synset(std::string_view id) const;

  bool has_lemma(std::string_view lemma) const;
  /// Synset ids for a lemma in sense order; empty when the lemma is unknown.
  std::span<const std::string> sense_ids(std::string_view lemma) const;
  std::vector<WordSense> senses(std::string_view lemma) const;
  /// Throws LexiconError when the lemma or sense number does not exist.
  WordSense sense(std::string_view lemma, int sense_number) const;

  /// Synsets reached by one outgoing relation of the given kind.
  std::vector<const Synset*> related(std::string_view synset_id, RelationKind kind) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.synsets_ == b.synsets_ && a.relations_ == b.relations_;
  }

 private:
  std::vector<Synset> synsets_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::string, std::vector<std::string>, std::less<>> sense_index_;
  std::vector<Relation> relations_;
};

Lexicon parse_lexicon(std::istream& in, const std::string& source = "<lexicon>");
Lexicon load_lexicon(const std::filesystem::path& path);

/// Canonical text form: all SYNSET records in order, then all REL records.
std::string serialize_lexicon(const Lexicon& lexicon);

/// Synonyms of the sense's synset, other than the lemma itself, that have
/// exactly one sense in the lexicon.
std::vector<std::string> monosemous_synonyms(const Lexicon& lexicon, const WordSense& sense);

enum class BaselineLevel { syn, syn_def, syn_all };

std::string_view to_string(BaselineLevel level);

/// WordNet word lists used as disambiguation baselines.
///   syn     synonyms of the synset
///   syn_def syn plus open-class gloss lemmas
///   syn_all syn_def plus synonyms of direct hypernyms, hyponyms and meronyms
/// The target lemma is never part of the list.
std::set<std::string> baseline_wordlist(const Lexicon& lexicon, const WordSense& sense,
                                        BaselineLevel level,
                                        const Lemmatizer& lemmatizer = Lemmatizer::standard());

}  // namespace topsig
