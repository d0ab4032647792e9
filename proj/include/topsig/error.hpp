#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topsig {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Inconsistent lexicon content (dangling relation, duplicate id, unknown sense).
class LexiconError : public Error {
 public:
  using Error::Error;
};

/// Expected means are undefined because the contingency table is empty.
class StatisticsError : public Error {
 public:
  using Error::Error;
};

/// A target collection has nothing to be contrasted against.
class ContrastSetError : public Error {
 public:
  using Error::Error;
};

/// Word signature split puts every document on one side.
class DegenerateSplitError : public Error {
 public:
  using Error::Error;
};

/// The search backend failed while executing a query.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Invalid pipeline configuration or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace topsig
