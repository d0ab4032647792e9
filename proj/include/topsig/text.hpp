#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace topsig {

struct Token {
  std::string surface;
  std::string lemma;  // lowercase
  bool open_class = true;

  friend bool operator==(const Token&, const Token&) = default;
};

using Sentence = std::vector<Token>;

struct LemmaResult {
  std::string lemma;
  bool open_class = true;
};

/// Rule-plus-exception-table lemmatizer with an open-class filter.
///
/// Lookup order: closed-class list (word maps to itself, not open class),
/// exception table, then a single suffix rule. Suffix rules cover plural
/// -s/-es/-ies, verbal -ing/-ed and comparative -er/-est; every rule keeps a
/// stem of at least three characters. The comparative rule only fires when the
/// recovered stem is a known adjective base, since -er/-est endings on nouns
/// (waiter, interest) are far more common than comparatives.
///
/// Tokens that contain a digit are numerals and are returned unchanged.
class Lemmatizer {
 public:
  Lemmatizer() = default;

  /// Tables shipped in data/ and compiled into the library.
  static const Lemmatizer& standard();

  void add_closed_class(std::string word);
  void add_exception(std::string form, std::string lemma);
  void add_adjective_base(std::string word);

  // Extension files: one entry per line, '#' comments. Exception lines are
  // "<form> <lemma>".
  void load_closed_class(const std::filesystem::path& path);
  void load_exceptions(const std::filesystem::path& path);
  void load_adjective_bases(const std::filesystem::path& path);

  LemmaResult lemmatize(std::string_view token) const;
  bool is_closed_class(std::string_view word) const;

 private:
  std::string apply_suffix_rules(const std::string& word) const;
  std::string comparative_stem(const std::string& word, std::size_t suffix_len) const;

  std::unordered_set<std::string> closed_class_;
  std::unordered_map<std::string, std::string> exceptions_;
  std::unordered_set<std::string> adjective_bases_;
};

/// Abbreviations that do not end a sentence when followed by '.'.
const std::unordered_set<std::string>& sentence_abbreviations();

/// Splits raw text into sentences of lowercased, lemmatized tokens.
///
/// Sentences end at '.', '!' or '?' followed by whitespace and a capital
/// letter, or by the end of the text; a '.' directly after a known
/// abbreviation never ends a sentence. Tokens are maximal runs of
/// alphanumeric characters (bytes >= 0x80 count as word characters so UTF-8
/// letters stay inside words).
std::vector<Sentence> tokenize(std::string_view text,
                               const Lemmatizer& lemmatizer = Lemmatizer::standard());

/// Drops angle-bracket spans ("<p>", "</a>") and replaces each with a space.
std::string strip_markup(std::string_view text);

/// Lowercases ASCII letters.
std::string to_lower(std::string_view text);

/// Lemma sequence of a phrase such as "Christian church" (all tokens, any class).
std::vector<std::string> phrase_lemmas(std::string_view phrase,
                                       const Lemmatizer& lemmatizer = Lemmatizer::standard());

}  // namespace topsig
