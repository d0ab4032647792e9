#include "topsig/text.hpp"

#include <fstream>
#include <sstream>

#include "resources.hpp"
#include "topsig/error.hpp"

namespace topsig {

namespace {

constexpr std::size_t kMinStem = 3;

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool has_vowel(std::string_view s) {
  for (char c : s) {
    if (is_vowel(c)) return true;
  }
  return false;
}

bool has_digit(std::string_view s) {
  for (char c : s) {
    if (c >= '0' && c <= '9') return true;
  }
  return false;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// "runn" -> "run", but "fall" and "miss" keep their doubled letter.
std::string undouble(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z' && n - 1 >= kMinStem) {
    stem.pop_back();
  }
  return stem;
}

// Calls fn(fields) for every non-comment, non-blank line of a table.
template <typename Fn>
void for_each_entry(std::istream& in, Fn&& fn) {
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first[0] == '#') continue;
    std::string second;
    fields >> second;
    fn(first, second);
  }
}

std::ifstream open_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

Lemmatizer build_standard() {
  Lemmatizer lem;
  std::istringstream closed(resources::kClosedClass);
  for_each_entry(closed, [&](const std::string& w, const std::string&) { lem.add_closed_class(w); });
  std::istringstream exceptions(resources::kLemmaExceptions);
  for_each_entry(exceptions, [&](const std::string& form, const std::string& lemma) {
    lem.add_exception(form, lemma.empty() ? form : lemma);
  });
  std::istringstream adjectives(resources::kAdjectiveBases);
  for_each_entry(adjectives,
                 [&](const std::string& w, const std::string&) { lem.add_adjective_base(w); });
  return lem;
}

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

const Lemmatizer& Lemmatizer::standard() {
  static const Lemmatizer instance = build_standard();
  return instance;
}

void Lemmatizer::add_closed_class(std::string word) { closed_class_.insert(to_lower(word)); }

void Lemmatizer::add_exception(std::string form, std::string lemma) {
  exceptions_[to_lower(form)] = to_lower(lemma);
}

void Lemmatizer::add_adjective_base(std::string word) { adjective_bases_.insert(to_lower(word)); }

void Lemmatizer::load_closed_class(const std::filesystem::path& path) {
  auto in = open_table(path);
  for_each_entry(in, [&](const std::string& w, const std::string&) { add_closed_class(w); });
}

void Lemmatizer::load_exceptions(const std::filesystem::path& path) {
  auto in = open_table(path);
  for_each_entry(in, [&](const std::string& form, const std::string& lemma) {
    if (lemma.empty()) throw Error(path.string() + ": exception entry '" + form + "' needs a lemma");
    add_exception(form, lemma);
  });
}

void Lemmatizer::load_adjective_bases(const std::filesystem::path& path) {
  auto in = open_table(path);
  for_each_entry(in, [&](const std::string& w, const std::string&) { add_adjective_base(w); });
}

bool Lemmatizer::is_closed_class(std::string_view word) const {
  return closed_class_.count(std::string(word)) > 0;
}

std::string Lemmatizer::comparative_stem(const std::string& word, std::size_t suffix_len) const {
  if (word.size() < suffix_len + kMinStem) return {};
  const std::string stem = word.substr(0, word.size() - suffix_len);
  const std::string candidates[] = {
      stem,
      stem + "e",
      undouble(stem),
      stem.back() == 'i' ? stem.substr(0, stem.size() - 1) + "y" : std::string(),
  };
  for (const auto& c : candidates) {
    if (!c.empty() && adjective_bases_.count(c)) return c;
  }
  return {};
}

std::string Lemmatizer::apply_suffix_rules(const std::string& w) const {
  const std::size_t n = w.size();

  // plurals
  if (ends_with(w, "ies") && n - 3 >= kMinStem) return w.substr(0, n - 3) + "y";
  if (ends_with(w, "sses") && n - 2 >= kMinStem) return w.substr(0, n - 2);
  for (std::string_view sib : {"ches", "shes", "xes", "zzes"}) {
    if (ends_with(w, sib) && n - 2 >= kMinStem) return w.substr(0, n - 2);
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is") &&
      n - 1 >= kMinStem) {
    return w.substr(0, n - 1);
  }

  // verbal forms
  if (ends_with(w, "ied") && n - 3 >= kMinStem) return w.substr(0, n - 3) + "y";
  if (ends_with(w, "ing") && n - 3 >= kMinStem && has_vowel(w.substr(0, n - 3))) {
    return undouble(w.substr(0, n - 3));
  }
  if (ends_with(w, "ed") && n - 2 >= kMinStem && has_vowel(w.substr(0, n - 2))) {
    return undouble(w.substr(0, n - 2));
  }

  // comparatives
  if (ends_with(w, "est")) {
    if (auto base = comparative_stem(w, 3); !base.empty()) return base;
  }
  if (ends_with(w, "er")) {
    if (auto base = comparative_stem(w, 2); !base.empty()) return base;
  }
  return w;
}

LemmaResult Lemmatizer::lemmatize(std::string_view token) const {
  std::string word = to_lower(token);
  if (word.empty()) return {word, false};
  if (is_closed_class(word)) return {word, false};
  if (has_digit(word)) return {word, true};

  std::string lemma;
  if (auto it = exceptions_.find(word); it != exceptions_.end()) {
    lemma = it->second;
  } else {
    lemma = apply_suffix_rules(word);
  }
  if (lemma.empty()) lemma = word;
  return {lemma, !is_closed_class(lemma)};
}

const std::unordered_set<std::string>& sentence_abbreviations() {
  static const std::unordered_set<std::string> abbreviations = [] {
    std::unordered_set<std::string> out;
    std::istringstream in(resources::kAbbreviations);
    for_each_entry(in, [&](const std::string& w, const std::string&) { out.insert(w); });
    return out;
  }();
  return abbreviations;
}

std::vector<Sentence> tokenize(std::string_view text, const Lemmatizer& lemmatizer) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string word;
  const auto& abbreviations = sentence_abbreviations();

  auto flush_word = [&] {
    if (word.empty()) return;
    auto lemma = lemmatizer.lemmatize(word);
    current.push_back(Token{to_lower(word), std::move(lemma.lemma), lemma.open_class});
    word.clear();
  };
  auto end_sentence = [&] {
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };

  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_word_byte(c)) {
      word.push_back(static_cast<char>(c));
      continue;
    }
    const bool attached = !word.empty();
    flush_word();
    if (c != '.' && c != '!' && c != '?') continue;

    if (c == '.' && attached && abbreviations.count(current.back().surface)) continue;

    // Skip trailing punctuation and closing quotes, then look for
    // whitespace + capital or the end of the text.
    std::size_t j = i + 1;
    while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?' || text[j] == '"' ||
                     text[j] == '\'' || text[j] == ')' || text[j] == ']')) {
      ++j;
    }
    bool boundary = false;
    if (j == n) {
      boundary = true;
    } else if (is_space(static_cast<unsigned char>(text[j]))) {
      while (j < n && is_space(static_cast<unsigned char>(text[j]))) ++j;
      boundary = j == n || (text[j] >= 'A' && text[j] <= 'Z');
    }
    if (boundary) end_sentence();
  }
  flush_word();
  end_sentence();
  return sentences;
}

std::string strip_markup(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_tag = false;
  for (char c : text) {
    if (in_tag) {
      if (c == '>') {
        in_tag = false;
        out.push_back(' ');
      }
    } else if (c == '<') {
      in_tag = true;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> phrase_lemmas(std::string_view phrase, const Lemmatizer& lemmatizer) {
  std::vector<std::string> out;
  for (auto& sentence : tokenize(phrase, lemmatizer)) {
    for (auto& token : sentence) out.push_back(std::move(token.lemma));
  }
  return out;
}

}  // namespace topsig
