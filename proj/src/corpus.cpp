#include "topsig/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "topsig/error.hpp"
#include "topsig/log.hpp"

namespace topsig {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join_surfaces(const std::vector<Sentence>& sentences) {
  std::string text;
  for (const auto& sentence : sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i) text += ' ';
      text += sentence[i].surface;
    }
    text += '\n';
  }
  return text;
}

}  // namespace

std::size_t Document::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

bool Document::contains_lemma(std::string_view lemma) const {
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      if (t.lemma == lemma) return true;
    }
  }
  return false;
}

Document make_document(std::string id, std::string source_host, std::string text,
                       const Lemmatizer& lemmatizer) {
  Document doc{std::move(id), std::move(source_host), std::move(text), {}};
  doc.sentences = tokenize(doc.text, lemmatizer);
  return doc;
}

Document TaggedDocument::plain() const {
  Document doc{id, source_host, {}, {}};
  doc.sentences.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    Sentence plain_sentence;
    plain_sentence.reserve(sentence.size());
    for (const auto& tagged : sentence) plain_sentence.push_back(tagged.token);
    doc.sentences.push_back(std::move(plain_sentence));
  }
  doc.text = join_surfaces(doc.sentences);
  return doc;
}

bool DocumentCollection::contains(std::string_view id) const { return ids_.count(std::string(id)) > 0; }

void DocumentCollection::add(Document doc) {
  if (!ids_.insert(doc.id).second) {
    throw Error("collection '" + label_ + "' already holds document '" + doc.id + "'");
  }
  documents_.push_back(std::move(doc));
}

void DocumentCollection::truncate(std::size_t limit) {
  while (documents_.size() > limit) {
    ids_.erase(documents_.back().id);
    documents_.pop_back();
  }
}

std::string_view to_string(Granularity g) {
  return g == Granularity::document ? "document" : "sentence";
}

Granularity parse_granularity(std::string_view s) {
  if (s == "document") return Granularity::document;
  if (s == "sentence") return Granularity::sentence;
  throw ConfigError("context must be 'document' or 'sentence', got '" + std::string(s) + "'");
}

std::vector<TaggedDocument> parse_sense_tagged(std::istream& in, const Lexicon* lexicon,
                                               const std::string& source,
                                               const Lemmatizer& lemmatizer) {
  std::vector<TaggedDocument> docs;
  std::set<std::string> ids;
  std::vector<SenseTaggedToken> sentence;
  std::string line;
  std::size_t line_no = 0;

  auto end_sentence = [&] {
    if (!sentence.empty()) docs.back().sentences.push_back(std::move(sentence));
    sentence.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    if (stripped.rfind("DOC ", 0) == 0 || stripped == "DOC") {
      if (!docs.empty()) end_sentence();
      std::istringstream fields(stripped);
      std::string kw, id, attr;
      fields >> kw >> id;
      if (id.empty()) throw ParseError(source, line_no, "DOC line needs an id");
      TaggedDocument doc;
      doc.id = id;
      while (fields >> attr) {
        if (attr.rfind("host=", 0) != 0) {
          throw ParseError(source, line_no, "unknown DOC attribute '" + attr + "'");
        }
        doc.source_host = attr.substr(5);
      }
      if (!ids.insert(id).second) throw ParseError(source, line_no, "duplicate document id '" + id + "'");
      docs.push_back(std::move(doc));
      continue;
    }
    if (docs.empty()) throw ParseError(source, line_no, "token before the first DOC line");
    if (stripped == ".") {
      end_sentence();
      continue;
    }

    const auto fields = split(stripped, '|');
    if (fields.size() > 3 || std::any_of(fields.begin(), fields.end(),
                                         [](const std::string& f) { return trim(f).empty(); })) {
      throw ParseError(source, line_no, "expected 'surface|lemma|sense_number', got '" + stripped + "'");
    }
    SenseTaggedToken tagged;
    tagged.token.surface = to_lower(trim(fields[0]));
    if (fields.size() >= 2) {
      tagged.token.lemma = to_lower(trim(fields[1]));
      tagged.token.open_class = !lemmatizer.is_closed_class(tagged.token.lemma) &&
                                !lemmatizer.is_closed_class(tagged.token.surface);
    } else {
      auto lemma = lemmatizer.lemmatize(tagged.token.surface);
      tagged.token.lemma = std::move(lemma.lemma);
      tagged.token.open_class = lemma.open_class;
    }
    if (fields.size() == 3 && lexicon) {
      const std::string number_text = trim(fields[2]);
      int number = 0;
      auto [ptr, ec] = std::from_chars(number_text.data(), number_text.data() + number_text.size(), number);
      if (ec != std::errc() || ptr != number_text.data() + number_text.size()) {
        throw ParseError(source, line_no, "sense number '" + number_text + "' is not an integer");
      }
      try {
        tagged.sense = lexicon->sense(tagged.token.lemma, number);
      } catch (const LexiconError&) {
        throw ParseError(source, line_no,
                         "unresolvable sense tag " + tagged.token.lemma + "#" + number_text);
      }
    }
    sentence.push_back(std::move(tagged));
  }
  if (!docs.empty()) end_sentence();
  return docs;
}

std::vector<TaggedDocument> load_sense_tagged(const fs::path& path, const Lexicon& lexicon) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path.string());
  return parse_sense_tagged(in, &lexicon, path.string());
}

std::string serialize_corpus(std::span<const Document> docs) {
  std::ostringstream out;
  for (const auto& doc : docs) {
    out << "DOC " << doc.id;
    if (!doc.source_host.empty()) out << " host=" << doc.source_host;
    out << '\n';
    for (const auto& sentence : doc.sentences) {
      for (const auto& t : sentence) out << t.surface << '|' << t.lemma << '\n';
      out << ".\n";
    }
  }
  return out.str();
}

std::string serialize_tagged_corpus(std::span<const TaggedDocument> docs) {
  std::ostringstream out;
  for (const auto& doc : docs) {
    out << "DOC " << doc.id;
    if (!doc.source_host.empty()) out << " host=" << doc.source_host;
    out << '\n';
    for (const auto& sentence : doc.sentences) {
      for (const auto& t : sentence) {
        out << t.token.surface << '|' << t.token.lemma;
        if (t.sense) out << '|' << t.sense->sense_number;
        out << '\n';
      }
      out << ".\n";
    }
  }
  return out.str();
}

Document load_plain_document(const fs::path& path, std::string id) {
  std::string host;
  fs::path meta = path;
  meta += ".meta";
  if (fs::exists(meta)) {
    std::istringstream in(read_file(meta));
    std::string line;
    while (std::getline(in, line)) {
      const auto t = trim(line);
      if (t.rfind("host=", 0) == 0) host = t.substr(5);
    }
  }
  return make_document(std::move(id), std::move(host), strip_markup(read_file(path)));
}

std::vector<Document> load_document_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() != ".meta") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& f : files) docs.push_back(load_plain_document(f, fs::relative(f, dir).generic_string()));
  return docs;
}

std::map<std::string, DocumentCollection> load_plain_collections(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error("not a directory: " + root.string());
  std::map<std::string, DocumentCollection> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string label = entry.path().filename().string();
    DocumentCollection coll(label);
    for (auto& doc : load_document_directory(entry.path())) coll.add(std::move(doc));
    out.emplace(label, std::move(coll));
  }
  return out;
}

std::vector<Document> load_corpus_documents(const fs::path& path) {
  if (fs::is_directory(path)) return load_document_directory(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path.string());
  std::vector<Document> docs;
  for (const auto& tagged : parse_sense_tagged(in, nullptr, path.string())) docs.push_back(tagged.plain());
  return docs;
}

std::map<WordSense, DocumentCollection> collections_from_tags(std::span<const TaggedDocument> docs,
                                                              std::string_view lemma,
                                                              Granularity granularity) {
  const std::string target = to_lower(lemma);
  std::map<WordSense, DocumentCollection> out;
  auto collection_for = [&](const WordSense& sense) -> DocumentCollection& {
    auto it = out.find(sense);
    if (it == out.end()) it = out.emplace(sense, DocumentCollection(sense.label())).first;
    return it->second;
  };

  for (const auto& doc : docs) {
    std::optional<Document> whole;
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      std::set<WordSense> senses_here;
      for (const auto& t : doc.sentences[si]) {
        if (t.sense && t.sense->lemma == target) senses_here.insert(*t.sense);
      }
      for (const auto& sense : senses_here) {
        DocumentCollection& coll = collection_for(sense);
        if (granularity == Granularity::document) {
          if (coll.contains(doc.id)) continue;
          if (!whole) whole = doc.plain();
          coll.add(*whole);
        } else {
          Document piece{doc.id + "/s" + std::to_string(si), doc.source_host, {}, {}};
          Sentence s;
          for (const auto& t : doc.sentences[si]) s.push_back(t.token);
          piece.sentences.push_back(std::move(s));
          piece.text = join_surfaces(piece.sentences);
          coll.add(std::move(piece));
        }
      }
    }
  }
  if (out.empty()) warn("lemma '" + target + "' is never sense-tagged in the corpus");
  return out;
}

DocumentCollection dedup_by_host(const DocumentCollection& collection) {
  DocumentCollection out(collection.label());
  std::set<std::string> hosts;
  for (const auto& doc : collection.documents()) {
    if (doc.source_host.empty() || hosts.insert(doc.source_host).second) out.add(doc);
  }
  return out;
}

}  // namespace topsig
