#include "codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "util.hpp"

namespace mismatch {

double Codebook::rate() const {
  return std::log(static_cast<double>(size)) / n;
}

std::vector<int> composition_counts(const InputDist& p, int n) {
  require(n >= 1, MM_ERR_INVALID_ARGUMENT,
          "composition: block length must be >= 1");
  const int L = p.size();
  std::vector<int> counts(static_cast<std::size_t>(L), 0);
  std::vector<double> rema(static_cast<std::size_t>(L), 0.0);
  int assigned = 0;
  for (int i = 0; i < L; ++i) {
    const double target = p[i] * n;
    counts[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(target));
    rema[static_cast<std::size_t>(i)] =
        target - counts[static_cast<std::size_t>(i)];
    assigned += counts[static_cast<std::size_t>(i)];
  }
  std::vector<int> order(static_cast<std::size_t>(L));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return rema[static_cast<std::size_t>(a)] > rema[static_cast<std::size_t>(b)];
  });
  for (int i = 0; i < n - assigned; ++i)
    ++counts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  return counts;
}

Codebook gen_codebook(CodebookKind kind, const InputDist& p, int n,
                      std::uint64_t size, std::uint64_t seed) {
  require(n >= 1, MM_ERR_INVALID_ARGUMENT,
          "codebook: block length must be >= 1");
  require(size >= 1, MM_ERR_INVALID_ARGUMENT,
          "codebook: need at least one message");
  const int L = p.size();

  Codebook cb;
  cb.n = n;
  cb.size = size;
  cb.kind = kind;
  cb.seed = seed;
  cb.words.resize(static_cast<std::size_t>(size) * n);

  std::mt19937_64 rng(seed);
  if (kind == CodebookKind::Iid) {
    std::vector<double> cdf(static_cast<std::size_t>(L), 0.0);
    double cum = 0.0;
    for (int i = 0; i < L; ++i) {
      cum += p[i];
      cdf[static_cast<std::size_t>(i)] = cum;
    }
    for (std::uint64_t m = 0; m < size; ++m)
      for (int i = 0; i < n; ++i)
        cb.words[static_cast<std::size_t>(m) * n + i] =
            sample_cdf(cdf, uniform01(rng));
  } else {
    const std::vector<int> counts = composition_counts(p, n);
    std::vector<int> base;
    base.reserve(static_cast<std::size_t>(n));
    for (int l = 0; l < L; ++l)
      base.insert(base.end(), counts[static_cast<std::size_t>(l)], l);
    for (std::uint64_t m = 0; m < size; ++m) {
      std::vector<int> word = base;
      for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(
            uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(word[static_cast<std::size_t>(i)],
                  word[static_cast<std::size_t>(j)]);
      }
      std::copy(word.begin(), word.end(),
                cb.words.begin() + static_cast<std::ptrdiff_t>(m) * n);
    }
  }
  return cb;
}

}  // namespace mismatch
