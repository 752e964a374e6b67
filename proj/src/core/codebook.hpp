#pragma once

#include <cstdint>
#include <vector>

#include "channel.hpp"

namespace mismatch {

enum class CodebookKind { Iid, ConstantComposition };

struct Codebook {
  int n = 0;
  std::uint64_t size = 0;  // number of messages M
  std::vector<int> words;  // M x n, row-major
  CodebookKind kind = CodebookKind::Iid;
  std::uint64_t seed = 0;

  int symbol(std::uint64_t m, int i) const {
    return words[static_cast<std::size_t>(m) * n + static_cast<std::size_t>(i)];
  }
  double rate() const;  // log(M) / n, nats per use
};

// Iid draws every symbol from p; ConstantComposition permutes a fixed
// letter multiset (largest-remainder rounding of n*p) independently per word.
Codebook gen_codebook(CodebookKind kind, const InputDist& p, int n,
                      std::uint64_t size, std::uint64_t seed);

// Largest-remainder counts for n letters under p; ties go to lower letters.
std::vector<int> composition_counts(const InputDist& p, int n);

}  // namespace mismatch
