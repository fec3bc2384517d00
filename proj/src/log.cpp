#include "isocx/log.hpp"

#include <atomic>
#include <iostream>

namespace isocx::log {

namespace {
std::atomic<Level> g_level{Level::warning};

void emit(Level at, std::string_view tag, std::string_view message) {
  if (static_cast<int>(g_level.load()) >= static_cast<int>(at)) {
    std::clog << "[isocx:" << tag << "] " << message << '\n';
  }
}
} // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void warn(std::string_view message) { emit(Level::warning, "warn", message); }
void info(std::string_view message) { emit(Level::info, "info", message); }
void debug(std::string_view message) { emit(Level::debug, "debug", message); }

} // namespace isocx::log
