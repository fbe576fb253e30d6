#include "remrec/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <json.hpp>
#include <string>

namespace remrec::log {

namespace {

Level level_from_env() {
  const char* env = std::getenv("REMREC_LOG");
  if (env == nullptr) return Level::warn;
  std::string v(env);
  if (v == "off") return Level::off;
  if (v == "error") return Level::error;
  if (v == "info") return Level::info;
  if (v == "debug") return Level::debug;
  return Level::warn;
}

std::atomic<Level>& current() {
  static std::atomic<Level> lvl{level_from_env()};
  return lvl;
}

std::mutex sink_mutex;
std::ostream* sink_stream = &std::cerr;

std::string_view name(Level l) {
  switch (l) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
    default: return "off";
  }
}

}  // namespace

Level level() { return current().load(); }
void set_level(Level l) { current().store(l); }

void set_sink(std::ostream* sink) {
  std::lock_guard lock(sink_mutex);
  sink_stream = sink != nullptr ? sink : &std::cerr;
}

void write(Level l, std::string_view message) {
  if (l == Level::off || static_cast<int>(l) > static_cast<int>(level())) return;
  nlohmann::json line = {{"level", name(l)}, {"message", message}};
  std::lock_guard lock(sink_mutex);
  *sink_stream << line.dump() << '\n';
}

}  // namespace remrec::log
