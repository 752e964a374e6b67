#pragma once

#include <cstdint>

namespace mismatch {

// Hard caps that keep exact computations desk-sized. A single override value
// (e.g. from the MISMATCH_LAB_BUDGET environment variable) replaces both.
struct Budget {
  std::uint64_t atoms = std::uint64_t{1} << 22;    // spectrum support cap, pre-merge
  std::uint64_t enumeration = 100'000'000;         // decoder work cap, M * |Y|^n

  static Budget overridden(std::uint64_t v) {
    Budget b;
    if (v != 0) {
      b.atoms = v;
      b.enumeration = v;
    }
    return b;
  }
};

}  // namespace mismatch
