#pragma once

#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

namespace hsc {

enum class LogLevel { Debug, Info, Warning, Error };

namespace detail {
inline LogLevel& log_level() {
    static LogLevel level = LogLevel::Info;
    return level;
}
inline std::mutex& log_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

inline void set_log_level(LogLevel level) { detail::log_level() = level; }

inline void log(LogLevel level, const std::string& message) {
    if (level < detail::log_level()) return;
    const char* prefix = "";
    switch (level) {
        case LogLevel::Debug: prefix = "[debug] "; break;
        case LogLevel::Info: prefix = ""; break;
        case LogLevel::Warning: prefix = "[warning] "; break;
        case LogLevel::Error: prefix = "[error] "; break;
    }
    std::lock_guard<std::mutex> lock(detail::log_mutex());
    std::cerr << prefix << message << "\n";
}

inline void warn(const std::string& message) { log(LogLevel::Warning, message); }
inline void info(const std::string& message) { log(LogLevel::Info, message); }

}  // namespace hsc
