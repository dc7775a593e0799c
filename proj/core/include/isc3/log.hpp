#pragma once

#include <sstream>
#include <string>

namespace isc3::log {

enum class Level { error = 0, info = 1, debug = 2 };

// Level comes from the ISC3_LOG environment variable (error|info|debug),
// read once on first use. Default: error.
Level threshold();

void write(Level level, const std::string& msg);

template <typename... Args>
void emit(Level level, Args&&... args) {
    if (level > threshold()) return;
    std::ostringstream os;
    (os << ... << args);
    write(level, os.str());
}

template <typename... Args>
void error(Args&&... args) { emit(Level::error, std::forward<Args>(args)...); }
template <typename... Args>
void info(Args&&... args) { emit(Level::info, std::forward<Args>(args)...); }
template <typename... Args>
void debug(Args&&... args) { emit(Level::debug, std::forward<Args>(args)...); }

}  // namespace isc3::log
