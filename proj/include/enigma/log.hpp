#pragma once

#include <sstream>
#include <string>

namespace enigma::log {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

// Reads ENIGMA_LOG (quiet|info|debug) once; defaults to quiet.
Level level();
void set_level(Level level);

void write(Level at, const std::string& message);

template <typename... Args>
void info(const Args&... args) {
  if (level() < Level::Info) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::Info, os.str());
}

template <typename... Args>
void debug(const Args&... args) {
  if (level() < Level::Debug) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::Debug, os.str());
}

}  // namespace enigma::log
