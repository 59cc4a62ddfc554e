#include "latmaj/parallel.hpp"

#include <cstdlib>
#include <string>

namespace latmaj {

namespace {
std::atomic<unsigned> g_override{0};
}

unsigned thread_limit() {
  if (const unsigned forced = g_override.load()) return forced;
  if (const char* env = std::getenv("LATMAJ_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<unsigned>(value);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_limit(unsigned threads) { g_override = threads; }

}  // namespace latmaj
