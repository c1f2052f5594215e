#ifndef HYDROMIG_LOG_HPP
#define HYDROMIG_LOG_HPP

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace hydromig::log {

enum class Level { error = 0, info = 1, debug = 2 };

/// Verbosity from the HYDROMIG_LOG environment variable
/// (error | info | debug); defaults to info.
inline Level level()
{
    static const Level cached = [] {
        const char* env = std::getenv("HYDROMIG_LOG");
        if (env == nullptr) return Level::info;
        if (std::strcmp(env, "error") == 0) return Level::error;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        return Level::info;
    }();
    return cached;
}

inline void write(Level lvl, const char* tag, const char* fmt, ...)
{
    if (lvl > level()) return;
    std::fprintf(stderr, "[%s] ", tag);
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

} // namespace hydromig::log

#define HYDROMIG_LOG_ERROR(...) ::hydromig::log::write(::hydromig::log::Level::error, "error", __VA_ARGS__)
#define HYDROMIG_LOG_INFO(...) ::hydromig::log::write(::hydromig::log::Level::info, "info", __VA_ARGS__)
#define HYDROMIG_LOG_DEBUG(...) ::hydromig::log::write(::hydromig::log::Level::debug, "debug", __VA_ARGS__)

#endif
