#include "isc3/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace isc3::log {

Level threshold() {
    static const Level level = [] {
        const char* env = std::getenv("ISC3_LOG");
        if (env == nullptr) return Level::error;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        if (std::strcmp(env, "info") == 0) return Level::info;
        return Level::error;
    }();
    return level;
}

void write(Level level, const std::string& msg) {
    static std::mutex mtx;
    const char* tag = level == Level::error ? "error" : level == Level::info ? "info" : "debug";
    std::lock_guard<std::mutex> lock(mtx);
    std::fprintf(stderr, "[isc3:%s] %s\n", tag, msg.c_str());
}

}  // namespace isc3::log
