#pragma once

// Data tables from data/, embedded at configure time.
namespace topsig::resources {

extern const char* const kClosedClass;
extern const char* const kLemmaExceptions;
extern const char* const kAdjectiveBases;
extern const char* const kAbbreviations;

}  // namespace topsig::resources
