#include "enigma/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace enigma::log {
namespace {

Level from_env() {
  const char* value = std::getenv("ENIGMA_LOG");
  if (value == nullptr) return Level::Quiet;
  std::string_view v(value);
  if (v == "debug") return Level::Debug;
  if (v == "info") return Level::Info;
  return Level::Quiet;
}

std::atomic<int>& current() {
  static std::atomic<int> lvl{static_cast<int>(from_env())};
  return lvl;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level level() { return static_cast<Level>(current().load(std::memory_order_relaxed)); }

void set_level(Level lvl) { current().store(static_cast<int>(lvl)); }

void write(Level at, const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  std::cerr << (at == Level::Debug ? "[debug] " : "[info] ") << message << '\n';
}

}  // namespace enigma::log
