#include "util.hpp"

#include <algorithm>
#include <cstdlib>

namespace mismatch {

unsigned worker_count() {
  static const unsigned n = [] {
    if (const char* env = std::getenv("MISMATCH_LAB_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<unsigned>(std::min(v, 256L));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : std::min(hc, 16u);
  }();
  return n;
}

}  // namespace mismatch
