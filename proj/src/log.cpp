#include "topsig/log.hpp"

#include <iostream>
#include <mutex>

namespace topsig {

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink;

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  std::swap(g_sink, sink);
  return sink;
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  if (g_sink) {
    g_sink(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace topsig
