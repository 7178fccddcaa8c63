#include "levy/parallel.hpp"

#include <cstdlib>
#include <string>

namespace levy {

unsigned worker_count() {
  static const unsigned count = [] {
    if (const char* env = std::getenv("LEVY_THREADS")) {
      try {
        const int n = std::stoi(env);
        if (n >= 1) return static_cast<unsigned>(n);
      } catch (...) {
      }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
  }();
  return count;
}

}  // namespace levy
