#include "topsig/retrieval.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "topsig/error.hpp"
#include "topsig/log.hpp"

namespace topsig {

namespace {

std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::size_t> unite(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void collect_atoms(const Query& q, std::vector<const Query*>& out) {
  if (q.kind() == Query::Kind::term || q.kind() == Query::Kind::near) {
    out.push_back(&q);
    return;
  }
  for (const auto& c : q.children()) collect_atoms(c, out);
}

}  // namespace

// ---------------------------------------------------------------------------
// Query

Query Query::term(std::string phrase, const Lemmatizer& lemmatizer) {
  Query q;
  q.kind_ = Kind::term;
  q.lemmas_ = phrase_lemmas(phrase, lemmatizer);
  if (q.lemmas_.empty()) throw std::invalid_argument("query term '" + phrase + "' has no tokens");
  q.phrase_ = to_lower(phrase);
  return q;
}

Query Query::all_of(std::vector<Query> children) {
  if (children.empty()) throw std::invalid_argument("AND needs at least one operand");
  Query q;
  q.kind_ = Kind::conjunction;
  q.children_ = std::move(children);
  return q;
}

Query Query::any_of(std::vector<Query> children) {
  if (children.empty()) throw std::invalid_argument("OR needs at least one operand");
  Query q;
  q.kind_ = Kind::disjunction;
  q.children_ = std::move(children);
  return q;
}

Query Query::near(Query a, Query b, std::size_t window) {
  if (a.kind() != Kind::term || b.kind() != Kind::term) {
    throw std::invalid_argument("NEAR only joins TERM atoms");
  }
  Query q;
  q.kind_ = Kind::near;
  q.window_ = window;
  q.children_ = {std::move(a), std::move(b)};
  return q;
}

std::string Query::to_string() const {
  switch (kind_) {
    case Kind::term:
      return '"' + phrase_ + '"';
    case Kind::near:
      return "(" + children_[0].to_string() + " NEAR/" + std::to_string(window_) + " " +
             children_[1].to_string() + ")";
    case Kind::conjunction:
    case Kind::disjunction: {
      const char* op = kind_ == Kind::conjunction ? " AND " : " OR ";
      std::string out = "(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += op;
        out += children_[i].to_string();
      }
      return out + ")";
    }
  }
  return {};
}

std::size_t Query::atom_count() const {
  std::vector<const Query*> atoms;
  collect_atoms(*this, atoms);
  return atoms.size();
}

// ---------------------------------------------------------------------------
// Cascade

std::vector<std::string> gloss_query_words(const Synset& synset, const Lemmatizer& lemmatizer) {
  std::vector<std::string> words;
  std::set<std::string> seen;
  for (const auto& sentence : tokenize(synset.gloss, lemmatizer)) {
    for (const auto& token : sentence) {
      if (token.open_class && seen.insert(token.surface).second) words.push_back(token.surface);
    }
  }
  return words;
}

std::vector<Query> build_query_cascade(const Lexicon& lexicon, const WordSense& sense,
                                       std::size_t near_window, const Lemmatizer& lemmatizer) {
  const WordSense resolved = lexicon.sense(sense.lemma, sense.sense_number);
  const Synset& synset = lexicon.synset(resolved.synset);
  const auto monosemous = monosemous_synonyms(lexicon, resolved);
  const auto gloss_words = gloss_query_words(synset, lemmatizer);

  auto member_terms = [&] {
    std::vector<Query> terms;
    for (const auto& m : synset.synonyms) terms.push_back(Query::term(m, lemmatizer));
    return terms;
  };

  std::vector<Query> cascade;
  if (!monosemous.empty()) {
    std::vector<Query> terms;
    for (const auto& m : monosemous) terms.push_back(Query::term(m, lemmatizer));
    cascade.push_back(Query::any_of(std::move(terms)).with_procedure(1));
  }

  if (gloss_words.empty()) {
    warn("sense " + resolved.label() + " has no usable gloss words; procedures 2-4 skipped");
  } else {
    std::vector<Query> gloss_terms;
    for (const auto& w : gloss_words) gloss_terms.push_back(Query::term(w, lemmatizer));
    cascade.push_back(Query::all_of(gloss_terms).with_procedure(2));

    std::vector<Query> near_terms = member_terms();
    std::size_t nears = 0;
    for (const auto& g : gloss_terms) {
      if (g.lemmas() == std::vector<std::string>{resolved.lemma}) continue;
      near_terms.push_back(Query::near(Query::term(resolved.lemma, lemmatizer), g, near_window));
      ++nears;
    }
    if (nears > 0) cascade.push_back(Query::all_of(std::move(near_terms)).with_procedure(3));

    std::vector<Query> conjunction = member_terms();
    std::set<std::string> phrases;
    for (const auto& q : conjunction) phrases.insert(q.phrase());
    for (auto& g : gloss_terms) {
      if (phrases.insert(g.phrase()).second) conjunction.push_back(std::move(g));
    }
    cascade.push_back(Query::all_of(std::move(conjunction)).with_procedure(4));
  }

  if (cascade.empty()) warn("sense " + resolved.label() + " yields no usable query");
  return cascade;
}

// ---------------------------------------------------------------------------
// LocalIndex

LocalIndex::LocalIndex(std::vector<Document> docs) : docs_(std::move(docs)) {
  streams_.reserve(docs_.size());
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    if (!by_id_.emplace(docs_[d].id, d).second) {
      throw Error("duplicate document id '" + docs_[d].id + "' in index");
    }
    std::vector<std::string> stream;
    stream.reserve(docs_[d].token_count());
    for (const auto& sentence : docs_[d].sentences) {
      for (const auto& token : sentence) {
        auto& list = postings_[token.lemma];
        if (list.empty() || list.back().doc != d) list.push_back(Posting{d, {}});
        list.back().positions.push_back(stream.size());
        stream.push_back(token.lemma);
      }
    }
    streams_.push_back(std::move(stream));
  }
}

const Document* LocalIndex::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

std::span<const Posting> LocalIndex::postings(std::string_view lemma) const {
  auto it = postings_.find(std::string(lemma));
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<std::size_t> LocalIndex::phrase_starts(std::size_t doc,
                                                   const std::vector<std::string>& lemmas) const {
  std::vector<std::size_t> out;
  const auto& stream = streams_[doc];
  const auto list = postings(lemmas.front());
  auto it = std::lower_bound(list.begin(), list.end(), doc,
                             [](const Posting& p, std::size_t d) { return p.doc < d; });
  if (it == list.end() || it->doc != doc) return out;
  for (std::size_t start : it->positions) {
    if (start + lemmas.size() > stream.size()) continue;
    if (std::equal(lemmas.begin() + 1, lemmas.end(),
                   stream.begin() + static_cast<std::ptrdiff_t>(start) + 1)) {
      out.push_back(start);
    }
  }
  return out;
}

std::vector<std::size_t> LocalIndex::match(const Query& q) const {
  switch (q.kind()) {
    case Query::Kind::term: {
      std::vector<std::size_t> out;
      for (const auto& p : postings(q.lemmas().front())) {
        if (q.lemmas().size() == 1 || !phrase_starts(p.doc, q.lemmas()).empty()) out.push_back(p.doc);
      }
      return out;
    }
    case Query::Kind::conjunction: {
      auto acc = match(q.children().front());
      for (std::size_t i = 1; i < q.children().size() && !acc.empty(); ++i) {
        acc = intersect(acc, match(q.children()[i]));
      }
      return acc;
    }
    case Query::Kind::disjunction: {
      std::vector<std::size_t> acc;
      for (const auto& c : q.children()) acc = unite(acc, match(c));
      return acc;
    }
    case Query::Kind::near: {
      const Query& a = q.children()[0];
      const Query& b = q.children()[1];
      std::vector<std::size_t> out;
      for (std::size_t doc : intersect(match(a), match(b))) {
        const auto pa = phrase_starts(doc, a.lemmas());
        const auto pb = phrase_starts(doc, b.lemmas());
        bool close = false;
        for (std::size_t x : pa) {
          for (std::size_t y : pb) {
            if ((x > y ? x - y : y - x) <= q.window()) {
              close = true;
              break;
            }
          }
          if (close) break;
        }
        if (close) out.push_back(doc);
      }
      return out;
    }
  }
  return {};
}

std::vector<Document> LocalIndex::evaluate(const Query& query, std::size_t limit) const {
  const auto hits = match(query);
  std::vector<const Query*> atoms;
  collect_atoms(query, atoms);

  std::map<std::size_t, std::size_t> matched;
  for (std::size_t d : hits) matched[d] = 0;
  for (const Query* atom : atoms) {
    for (std::size_t d : intersect(hits, match(*atom))) ++matched[d];
  }

  std::vector<std::size_t> ranked(hits.begin(), hits.end());
  std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    if (matched[a] != matched[b]) return matched[a] > matched[b];
    return docs_[a].id < docs_[b].id;
  });
  if (ranked.size() > limit) ranked.resize(limit);

  std::vector<Document> out;
  out.reserve(ranked.size());
  for (std::size_t d : ranked) out.push_back(docs_[d]);
  return out;
}

LocalIndex index_documents(std::vector<Document> docs) { return LocalIndex(std::move(docs)); }

// ---------------------------------------------------------------------------
// Backends

std::vector<Document> LocalBackend::search(const Query& query, std::size_t limit) {
  return index_->evaluate(query, limit);
}

std::vector<Document> ExternalCommandBackend::search(const Query& query, std::size_t limit) {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0) throw BackendError(std::string("pipe: ") + std::strerror(errno));
  if (pipe(from_child) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    throw BackendError(std::string("pipe: ") + std::strerror(errno));
  }

  const pid_t pid = fork();
  if (pid < 0) throw BackendError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);

  // A command that exits without reading its input must not kill us with SIGPIPE.
  sigset_t pipe_set, old_set;
  sigemptyset(&pipe_set);
  sigaddset(&pipe_set, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &pipe_set, &old_set);
  const std::string request = query.to_string() + "\n";
  std::size_t written = 0;
  bool broken_pipe = false;
  while (written < request.size()) {
    const ssize_t n = write(to_child[1], request.data() + written, request.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      broken_pipe = errno == EPIPE;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  close(to_child[1]);
  if (broken_pipe) {
    const timespec no_wait{0, 0};
    sigtimedwait(&pipe_set, nullptr, &no_wait);
  }
  pthread_sigmask(SIG_SETMASK, &old_set, nullptr);

  std::string output;
  char buf[4096];
  ssize_t n;
  while ((n = read(from_child[0], buf, sizeof buf)) > 0) output.append(buf, static_cast<std::size_t>(n));
  close(from_child[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw BackendError("search command '" + command_ + "' failed on query " + query.to_string());
  }

  std::vector<Document> docs;
  std::set<std::string> seen;
  std::istringstream lines(output);
  std::string path;
  while (docs.size() < limit && std::getline(lines, path)) {
    if (path.empty() || !seen.insert(path).second) continue;
    docs.push_back(load_plain_document(path, path));
  }
  return docs;
}

RetrievalResult retrieve_collection(SearchBackend& backend, std::span<const Query> cascade,
                                    std::size_t limit, std::string label) {
  if (limit == 0) throw ConfigError("retrieval limit must be at least 1");
  RetrievalResult result{DocumentCollection(std::move(label)), 0};
  for (std::size_t stage = 0; stage < cascade.size(); ++stage) {
    const Query& query = cascade[stage];
    std::vector<Document> hits;
    try {
      hits = backend.search(query, limit);
    } catch (const BackendError&) {
      throw;
    } catch (const std::exception& e) {
      throw BackendError("query " + query.to_string() + " failed: " + e.what());
    }
    if (hits.empty()) continue;
    for (auto& doc : hits) {
      if (result.collection.size() == limit) break;
      if (!result.collection.contains(doc.id)) result.collection.add(std::move(doc));
    }
    result.procedure = query.procedure() ? query.procedure() : static_cast<int>(stage + 1);
    return result;
  }
  return result;
}

}  // namespace topsig
