#pragma once

#include <ostream>
#include <string_view>

namespace remrec::log {

enum class Level { off = 0, error = 1, warn = 2, info = 3, debug = 4 };

// Initial level comes from REMREC_LOG (off|error|warn|info|debug, default
// warn). Lines are JSON objects so stderr stays machine-readable.
Level level();
void set_level(Level level);
void set_sink(std::ostream* sink);

void write(Level level, std::string_view message);
inline void warn(std::string_view m) { write(Level::warn, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void debug(std::string_view m) { write(Level::debug, m); }

}  // namespace remrec::log
