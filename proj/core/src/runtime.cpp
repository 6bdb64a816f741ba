#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

#include "snowforge/log.hpp"
#include "snowforge/parallel.hpp"

namespace snowforge {

namespace {
std::atomic<unsigned> g_threads{0};
std::atomic<int> g_level{static_cast<int>(log::Level::Warn)};
std::mutex g_log_mutex;
}  // namespace

void set_thread_count(unsigned n) noexcept { g_threads.store(n, std::memory_order_relaxed); }

unsigned thread_count() noexcept {
    const unsigned n = g_threads.load(std::memory_order_relaxed);
    if (n != 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace log {

void set_level(Level level) noexcept { g_level.store(static_cast<int>(level)); }
Level level() noexcept { return static_cast<Level>(g_level.load()); }

bool parse_level(std::string_view text, Level& out) noexcept {
    if (text == "debug") out = Level::Debug;
    else if (text == "info") out = Level::Info;
    else if (text == "warn") out = Level::Warn;
    else if (text == "error") out = Level::Error;
    else if (text == "off") out = Level::Off;
    else return false;
    return true;
}

void write(Level lvl, std::string_view message) {
    if (static_cast<int>(lvl) < g_level.load() || lvl == Level::Off) return;
    static constexpr const char* kTags[] = {"debug", "info", "warn", "error"};
    std::lock_guard lock(g_log_mutex);
    std::cerr << "[snowforge " << kTags[static_cast<int>(lvl)] << "] " << message << '\n';
}

}  // namespace log
}  // namespace snowforge
