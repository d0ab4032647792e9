#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "topsig/error.hpp"
#include "topsig/pipeline.hpp"

namespace py = pybind11;
using namespace topsig;

namespace {

Lexicon lexicon_from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_lexicon(in, "<string>");
}

std::vector<TaggedDocument> tagged_from_text(const std::string& text, const Lexicon& lexicon) {
  std::istringstream in(text);
  return parse_sense_tagged(in, &lexicon, "<string>");
}

std::vector<std::vector<std::tuple<std::string, std::string, bool>>> tokenize_py(const std::string& text) {
  std::vector<std::vector<std::tuple<std::string, std::string, bool>>> out;
  for (const auto& sentence : tokenize(text)) {
    auto& s = out.emplace_back();
    for (const auto& t : sentence) s.emplace_back(t.surface, t.lemma, t.open_class);
  }
  return out;
}

// label -> list of documents given as plain text
std::map<std::string, TopicSignature> signatures_py(const std::map<std::string, std::vector<std::string>>& texts,
                                                    const std::string& target, const std::string& context,
                                                    const std::string& variant) {
  std::map<std::string, DocumentCollection> colls;
  for (const auto& [label, docs] : texts) {
    DocumentCollection c(label);
    for (std::size_t i = 0; i < docs.size(); ++i) c.add(make_document(label + "/" + std::to_string(i), "", docs[i]));
    colls.emplace(label, std::move(c));
  }
  return build_signatures(colls, parse_granularity(context), target, parse_variant(variant));
}

PipelineConfig config_from(const py::kwargs& kwargs) {
  PipelineConfig c;
  for (const auto& [k, v] : kwargs) {
    const auto key = py::str(k).cast<std::string>();
    if (key == "signatures") {
      for (const auto& s : v.cast<std::vector<std::string>>()) c.signature_sets.push_back(parse_signature_set(s));
    } else if (py::isinstance<py::bool_>(v)) {
      c.set(key, v.cast<bool>() ? "true" : "false");
    } else {
      c.set(key, py::str(v).cast<std::string>());
    }
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_topsig, m) {
  m.doc() = "Topic signatures for word senses";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<WordSense>(m, "WordSense")
      .def_readonly("lemma", &WordSense::lemma)
      .def_readonly("synset", &WordSense::synset)
      .def_readonly("sense_number", &WordSense::sense_number)
      .def("label", &WordSense::label)
      .def("__repr__", [](const WordSense& s) { return "WordSense(" + s.label() + ")"; });

  py::class_<Synset>(m, "Synset")
      .def_readonly("id", &Synset::id)
      .def_readonly("synonyms", &Synset::synonyms)
      .def_readonly("gloss", &Synset::gloss);

  py::class_<Lexicon>(m, "Lexicon")
      .def_static("load", &load_lexicon, py::arg("path"))
      .def_static("parse", &lexicon_from_text, py::arg("text"))
      .def("senses", &Lexicon::senses, py::arg("lemma"))
      .def("sense", &Lexicon::sense, py::arg("lemma"), py::arg("number"))
      .def("synset", &Lexicon::synset, py::arg("id"), py::return_value_policy::copy)
      .def("serialize", &serialize_lexicon)
      .def("monosemous_synonyms", [](const Lexicon& l, const WordSense& s) { return monosemous_synonyms(l, s); })
      .def("baseline_wordlist", [](const Lexicon& l, const WordSense& s, const std::string& level) {
        if (level == "syn") return baseline_wordlist(l, s, BaselineLevel::syn);
        if (level == "sdef") return baseline_wordlist(l, s, BaselineLevel::syn_def);
        if (level == "sall") return baseline_wordlist(l, s, BaselineLevel::syn_all);
        throw ConfigError("level must be syn, sdef or sall");
      }, py::arg("sense"), py::arg("level") = "syn")
      .def("query_cascade", [](const Lexicon& l, const WordSense& s) {
        std::vector<std::pair<int, std::string>> out;
        for (const auto& q : build_query_cascade(l, s)) out.emplace_back(q.procedure(), q.to_string());
        return out;
      }, py::arg("sense"));

  py::class_<TopicSignature>(m, "TopicSignature")
      .def_readonly("collection", &TopicSignature::collection)
      .def_property_readonly("entries", [](const TopicSignature& s) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& e : s.entries) out.emplace_back(e.term, e.weight);
        return out;
      })
      .def("weight", &TopicSignature::weight_of, py::arg("term"))
      .def("serialize", &serialize_signature)
      .def_static("load", &load_signature, py::arg("path"))
      .def("filtered", &filter_by_word_signature, py::arg("word_signature"), py::arg("cutoff") = kDefaultCutoff);

  py::class_<WsdReport>(m, "WsdReport")
      .def_readonly("methods", &WsdReport::methods)
      .def("to_tsv", &WsdReport::to_tsv)
      .def("to_text", &WsdReport::to_text)
      .def_property_readonly("rows", [](const WsdReport& r) {
        std::vector<std::tuple<std::string, std::size_t, std::size_t, std::vector<std::optional<double>>>> out;
        for (const auto& row : r.rows) out.emplace_back(row.word, row.senses, row.occurrences, row.recall);
        out.emplace_back(r.total.word, r.total.senses, r.total.occurrences, r.total.recall);
        return out;
      });

  m.def("tokenize", &tokenize_py, py::arg("text"), "Sentences of (surface, lemma, open_class) triples.");
  m.def("lemmatize", [](const std::string& w) {
    const auto r = Lemmatizer::standard().lemmatize(w);
    return std::make_pair(r.lemma, r.open_class);
  }, py::arg("word"));
  m.def("random_baseline", &random_baseline, py::arg("senses"));
  m.def("format_weight", &format_weight, py::arg("value"));
  m.def("build_signatures", &signatures_py, py::arg("collections"), py::arg("target"),
        py::arg("context") = "document", py::arg("variant") = "squared",
        "Signatures from {label: [document text, ...]}.");
  m.def("evaluate_tagged", [](const Lexicon& lex, const std::string& corpus, const std::vector<std::string>& lemmas,
                              const std::vector<std::string>& levels) {
    const auto docs = tagged_from_text(corpus, lex);
    std::vector<Occurrence> occ;
    for (const auto& l : lemmas) {
      auto f = find_occurrences(docs, l);
      occ.insert(occ.end(), f.begin(), f.end());
    }
    std::vector<WsdMethod> methods;
    for (const auto& level : levels) {
      if (level == "ran") methods.push_back(random_method());
      else if (level == "syn") methods.push_back(wordlist_method(lex, BaselineLevel::syn));
      else if (level == "sdef") methods.push_back(wordlist_method(lex, BaselineLevel::syn_def));
      else if (level == "sall") methods.push_back(wordlist_method(lex, BaselineLevel::syn_all));
      else throw ConfigError("unknown method " + level);
    }
    return evaluate(occ, methods);
  }, py::arg("lexicon"), py::arg("corpus"), py::arg("lemmas"), py::arg("methods") = std::vector<std::string>{"ran"});

  // Subcommands; keyword arguments are configuration keys.
  m.def("query", [](const std::string& lemma, const py::kwargs& kw) {
    std::ostringstream out;
    run_query(config_from(kw), lemma, out);
    return out.str();
  }, py::arg("lemma"));
  m.def("build", [](const std::string& lemma, const std::string& source, const py::kwargs& kw) {
    BuildSource src = BuildSource::tags;
    if (source == "retrieval") src = BuildSource::retrieval;
    else if (source == "collections") src = BuildSource::collections;
    else if (source != "tags") throw ConfigError("source must be tags, retrieval or collections");
    std::ostringstream out;
    run_build(config_from(kw), lemma, src, out);
    return out.str();
  }, py::arg("lemma"), py::arg("source") = "tags");
  m.def("filter", [](const std::string& lemma, const py::kwargs& kw) {
    std::ostringstream out;
    run_filter(config_from(kw), lemma, out);
    return out.str();
  }, py::arg("lemma"));
  m.def("eval", [](const std::vector<std::string>& lemmas, const py::kwargs& kw) {
    std::ostringstream out;
    return run_eval(config_from(kw), lemmas, out);
  }, py::arg("lemmas"));
}
