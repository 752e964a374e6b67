#include "decoder.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "util.hpp"

namespace mismatch {

namespace {

void check_codebook_pair(const Codebook& cb, const ProblemPair& pair) {
  require(cb.n >= 1 && cb.size >= 1, MM_ERR_INVALID_ARGUMENT,
          "decoder: empty codebook");
  for (int v : cb.words)
    require(v >= 0 && v < pair.channel.input_size, MM_ERR_DIMENSION_MISMATCH,
            "decoder: codeword symbol outside the input alphabet");
}

// Output sequences are enumerated as base-|Y| numbers, first position most
// significant, so results are reproducible across chunkings.
std::uint64_t checked_output_count(const Codebook& cb, const ProblemPair& pair,
                                   const Budget& budget) {
  const std::uint64_t out = static_cast<std::uint64_t>(pair.channel.output_size);
  std::uint64_t total = 1;
  for (int i = 0; i < cb.n; ++i) {
    require(total <= budget.enumeration / out, MM_ERR_BUDGET_EXCEEDED,
            "decoder: output space exceeds the enumeration budget of " +
                std::to_string(budget.enumeration));
    total *= out;
  }
  require(total <= budget.enumeration / cb.size, MM_ERR_BUDGET_EXCEEDED,
          "decoder: codebook x output work exceeds the enumeration budget of " +
              std::to_string(budget.enumeration));
  return total;
}

void decode_ys(std::uint64_t index, int out, int n, std::vector<int>& ys) {
  for (int i = n - 1; i >= 0; --i) {
    ys[static_cast<std::size_t>(i)] = static_cast<int>(index % out);
    index /= out;
  }
}

// Per-message channel and metric products for one output sequence.
void per_message_products(const Codebook& cb, const ProblemPair& pair,
                          const std::vector<int>& ys, std::vector<double>& wv,
                          std::vector<double>& qv) {
  const std::uint64_t M = cb.size;
  for (std::uint64_t m = 0; m < M; ++m) {
    double w = 1.0, q = 1.0;
    for (int i = 0; i < cb.n; ++i) {
      const int x = cb.symbol(m, i);
      const int y = ys[static_cast<std::size_t>(i)];
      w *= pair.channel(x, y);
      q *= pair.metric(x, y);
    }
    wv[static_cast<std::size_t>(m)] = w;
    qv[static_cast<std::size_t>(m)] = q;
  }
}

}  // namespace

ErrorEstimate exact_error(const Codebook& cb, const ProblemPair& pair,
                          DecoderRule rule, const Budget& budget) {
  check_codebook_pair(cb, pair);
  const std::uint64_t total = checked_output_count(cb, pair, budget);
  const std::uint64_t M = cb.size;
  const int out = pair.channel.output_size;

  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);

  for_each_chunk(total, kChunk, [&](std::uint64_t c, std::uint64_t begin,
                                    std::uint64_t end) {
    std::vector<int> ys(static_cast<std::size_t>(cb.n));
    std::vector<double> wv(static_cast<std::size_t>(M)),
        qv(static_cast<std::size_t>(M));
    double pc = 0.0;
    for (std::uint64_t yi = begin; yi < end; ++yi) {
      decode_ys(yi, out, cb.n, ys);
      per_message_products(cb, pair, ys, wv, qv);
      if (rule == DecoderRule::Stochastic) {
        double qsum = 0.0;
        for (std::uint64_t m = 0; m < M; ++m)
          qsum += qv[static_cast<std::size_t>(m)];
        if (qsum <= 0.0) continue;  // y unreachable: every wv is zero too
        double num = 0.0;
        for (std::uint64_t m = 0; m < M; ++m)
          num += wv[static_cast<std::size_t>(m)] * qv[static_cast<std::size_t>(m)];
        pc += num / qsum;
      } else {
        double qmax = 0.0;
        for (std::uint64_t m = 0; m < M; ++m)
          qmax = std::max(qmax, qv[static_cast<std::size_t>(m)]);
        if (qmax <= 0.0) continue;
        double wtop = 0.0;
        std::uint64_t ties = 0;
        for (std::uint64_t m = 0; m < M; ++m) {
          if (qv[static_cast<std::size_t>(m)] == qmax) {
            wtop += wv[static_cast<std::size_t>(m)];
            ++ties;
          }
        }
        pc += wtop / static_cast<double>(ties);
      }
    }
    partial[static_cast<std::size_t>(c)] = pc;
  });

  double pc = 0.0;
  for (double v : partial) pc += v;
  pc /= static_cast<double>(M);

  ErrorEstimate e;
  e.pe = 1.0 - pc;
  e.exact = true;
  return e;
}

ErrorEstimate mc_error(const Codebook& cb, const ProblemPair& pair,
                       DecoderRule rule, std::uint64_t trials,
                       std::uint64_t seed) {
  check_codebook_pair(cb, pair);
  require(trials >= 1, MM_ERR_INVALID_ARGUMENT, "mc: need at least one trial");
  const std::uint64_t M = cb.size;
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;

  std::vector<double> w_cdf(static_cast<std::size_t>(in) * out);
  for (int x = 0; x < in; ++x) {
    double cum = 0.0;
    for (int y = 0; y < out; ++y) {
      cum += pair.channel(x, y);
      w_cdf[static_cast<std::size_t>(x) * out + y] = cum;
    }
  }

  constexpr std::uint64_t kChunk = 8192;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> errors(static_cast<std::size_t>(chunks), 0);

  for_each_chunk(trials, kChunk, [&](std::uint64_t c, std::uint64_t begin,
                                     std::uint64_t end) {
    std::vector<int> ys(static_cast<std::size_t>(cb.n));
    std::vector<double> qv(static_cast<std::size_t>(M));
    std::vector<double> row_cdf(static_cast<std::size_t>(out));
    std::uint64_t bad = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      std::mt19937_64 rng(derive_seed(seed, t));
      const std::uint64_t m0 = uniform_below(rng, M);
      for (int i = 0; i < cb.n; ++i) {
        const int x = cb.symbol(m0, i);
        std::copy(w_cdf.begin() + static_cast<std::ptrdiff_t>(x) * out,
                  w_cdf.begin() + static_cast<std::ptrdiff_t>(x + 1) * out,
                  row_cdf.begin());
        ys[static_cast<std::size_t>(i)] = sample_cdf(row_cdf, uniform01(rng));
      }
      for (std::uint64_t m = 0; m < M; ++m) {
        double q = 1.0;
        for (int i = 0; i < cb.n; ++i)
          q *= pair.metric(cb.symbol(m, i), ys[static_cast<std::size_t>(i)]);
        qv[static_cast<std::size_t>(m)] = q;
      }

      std::uint64_t pick = 0;
      if (rule == DecoderRule::Stochastic) {
        double qsum = 0.0;
        for (double q : qv) qsum += q;
        const double r = uniform01(rng) * qsum;
        double cum = 0.0;
        pick = M - 1;
        for (std::uint64_t m = 0; m < M; ++m) {
          cum += qv[static_cast<std::size_t>(m)];
          if (cum > r) {
            pick = m;
            break;
          }
        }
      } else {
        double qmax = -1.0;
        std::uint64_t ties = 0;
        for (std::uint64_t m = 0; m < M; ++m) {
          const double q = qv[static_cast<std::size_t>(m)];
          if (q > qmax) {
            qmax = q;
            ties = 1;
          } else if (q == qmax) {
            ++ties;
          }
        }
        std::uint64_t skip = ties > 1 ? uniform_below(rng, ties) : 0;
        for (std::uint64_t m = 0; m < M; ++m) {
          if (qv[static_cast<std::size_t>(m)] == qmax) {
            if (skip == 0) {
              pick = m;
              break;
            }
            --skip;
          }
        }
      }
      if (pick != m0) ++bad;
    }
    errors[static_cast<std::size_t>(c)] = bad;
  });

  std::uint64_t bad = 0;
  for (std::uint64_t v : errors) bad += v;

  ErrorEstimate e;
  e.pe = static_cast<double>(bad) / static_cast<double>(trials);
  e.std_err = std::sqrt(std::max(e.pe * (1.0 - e.pe), 0.0) /
                        static_cast<double>(trials));
  e.trials = trials;
  e.exact = false;
  return e;
}

double pairwise_phi(const ProblemPair& pair, const InputDist& p,
                    std::span<const int> xs, std::span<const int> ys) {
  require(xs.size() == ys.size(), MM_ERR_DIMENSION_MISMATCH,
          "pairwise: sequences differ in length");
  require(!xs.empty(), MM_ERR_INVALID_ARGUMENT, "pairwise: empty sequences");
  require(p.size() == pair.channel.input_size, MM_ERR_DIMENSION_MISMATCH,
          "pairwise: input distribution size does not match");

  double threshold = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int x = xs[i], y = ys[i];
    require(x >= 0 && x < pair.channel.input_size && y >= 0 &&
                y < pair.channel.output_size,
            MM_ERR_INVALID_ARGUMENT, "pairwise: symbol out of range");
    const double q = pair.metric(x, y);
    if (q <= 0.0) return 1.0;  // every competitor ties at metric zero or above
    threshold += std::log(q);
  }

  // Defective convolution: atoms carry log-metric mass conditioned on a
  // positive metric, so total mass can fall below 1; the missing mass is
  // competitors with metric zero, which cannot reach the threshold.
  std::vector<Atom> conv{Atom{0.0, 1.0}};
  const Budget budget;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    std::vector<Atom> letter;
    for (int x = 0; x < pair.channel.input_size; ++x) {
      if (p[x] <= 0.0) continue;
      const double q = pair.metric(x, ys[i]);
      if (q > 0.0) letter.push_back(Atom{std::log(q), p[x]});
    }
    if (letter.empty()) return 0.0;  // no competitor keeps positive metric
    conv = convolve_atoms(conv, merge_atoms(std::move(letter)), budget);
  }

  const double tol = 1e-12 * (1.0 + std::abs(threshold));
  double phi = 0.0;
  for (auto it = conv.rbegin(); it != conv.rend(); ++it) {
    if (it->value < threshold - tol) break;
    phi += it->prob;
  }
  return phi;
}

std::vector<double> stochastic_posterior(const Codebook& cb,
                                         const ProblemPair& pair,
                                         std::span<const int> ys) {
  check_codebook_pair(cb, pair);
  require(ys.size() == static_cast<std::size_t>(cb.n), MM_ERR_DIMENSION_MISMATCH,
          "posterior: sequence length does not match the codebook");
  for (int y : ys)
    require(y >= 0 && y < pair.channel.output_size, MM_ERR_INVALID_ARGUMENT,
            "posterior: symbol out of range");

  std::vector<double> post(static_cast<std::size_t>(cb.size), 0.0);
  double qsum = 0.0;
  for (std::uint64_t m = 0; m < cb.size; ++m) {
    double q = 1.0;
    for (int i = 0; i < cb.n; ++i)
      q *= pair.metric(cb.symbol(m, i), ys[static_cast<std::size_t>(i)]);
    post[static_cast<std::size_t>(m)] = q;
    qsum += q;
  }
  require(qsum > 0.0, MM_ERR_DENOMINATOR_ZERO,
          "posterior: metric mass is zero for this sequence");
  for (double& v : post) v /= qsum;
  return post;
}

SpectrumPmf codebook_spectrum(const Codebook& cb, const ProblemPair& pair,
                              const Budget& budget) {
  check_codebook_pair(cb, pair);
  const std::uint64_t total = checked_output_count(cb, pair, budget);
  require(total <= budget.atoms / cb.size, MM_ERR_BUDGET_EXCEEDED,
          "codebook spectrum: atom count exceeds the budget of " +
              std::to_string(budget.atoms));
  const std::uint64_t M = cb.size;
  const int out = pair.channel.output_size;

  std::vector<Atom> raw;
  std::vector<int> ys(static_cast<std::size_t>(cb.n));
  std::vector<double> wv(static_cast<std::size_t>(M)),
      qv(static_cast<std::size_t>(M));
  for (std::uint64_t yi = 0; yi < total; ++yi) {
    decode_ys(yi, out, cb.n, ys);
    per_message_products(cb, pair, ys, wv, qv);
    double qsum = 0.0;
    for (std::uint64_t m = 0; m < M; ++m)
      qsum += qv[static_cast<std::size_t>(m)];
    for (std::uint64_t m = 0; m < M; ++m) {
      const double joint = wv[static_cast<std::size_t>(m)] / static_cast<double>(M);
      if (joint <= 0.0) continue;
      const double v = (std::log(qv[static_cast<std::size_t>(m)]) -
                        std::log(qsum / static_cast<double>(M))) /
                       cb.n;
      raw.push_back(Atom{v, joint});
    }
  }
  require(!raw.empty(), MM_ERR_EMPTY_DISTRIBUTION,
          "codebook spectrum: no reachable outputs");

  SpectrumPmf pmf;
  pmf.atoms = merge_atoms(std::move(raw));
  pmf.n = cb.n;
  pmf.law = SpectrumLaw::Codebook;
  return pmf;
}

PcIdentity pc_identity_check(const Codebook& cb, const ProblemPair& pair,
                             const Budget& budget) {
  PcIdentity r;
  r.lhs = 1.0 - exact_error(cb, pair, DecoderRule::Stochastic, budget).pe;
  const SpectrumPmf pmf = codebook_spectrum(cb, pair, budget);
  const double log_m = std::log(static_cast<double>(cb.size));
  double rhs = 0.0;
  for (const Atom& a : pmf.atoms)
    rhs += a.prob * std::exp(cb.n * a.value - log_m);
  r.rhs = rhs;
  r.abs_diff = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace mismatch
