#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "budget.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "density.hpp"

namespace mismatch {

enum class DecoderRule { Stochastic, MaxMetric };

struct ErrorEstimate {
  double pe = 0.0;
  double std_err = 0.0;  // 0 for exact results
  std::uint64_t trials = 0;
  bool exact = false;
};

// Error probability of a uniform message through the channel, decoded by the
// pair's metric: Stochastic picks message m with probability proportional to
// the metric of (word m, y); MaxMetric picks the largest metric, splitting
// ties uniformly. Exact enumeration over all output sequences.
ErrorEstimate exact_error(const Codebook& cb, const ProblemPair& pair,
                          DecoderRule rule, const Budget& budget = {});

ErrorEstimate mc_error(const Codebook& cb, const ProblemPair& pair,
                       DecoderRule rule, std::uint64_t trials,
                       std::uint64_t seed);

// P[q(X', ys) >= q(xs, ys)] for one letter-by-letter competitor X' ~ p,
// ties included. Equals 1 when the metric of (xs, ys) is zero.
double pairwise_phi(const ProblemPair& pair, const InputDist& p,
                    std::span<const int> xs, std::span<const int> ys);

// Stochastic-decoder posterior over messages given y (normalized metric
// column); useful for inspecting single received sequences.
std::vector<double> stochastic_posterior(const Codebook& cb,
                                         const ProblemPair& pair,
                                         std::span<const int> ys);

// Law of Z_n when a uniform message's codeword drives the channel; the
// density is taken against the codebook average metric mass.
SpectrumPmf codebook_spectrum(const Codebook& cb, const ProblemPair& pair,
                              const Budget& budget = {});

struct PcIdentity {
  double lhs = 0.0;  // P[correct] by direct enumeration
  double rhs = 0.0;  // E[exp(n (Z_n - R))] under the codebook law
  double abs_diff = 0.0;
};

PcIdentity pc_identity_check(const Codebook& cb, const ProblemPair& pair,
                             const Budget& budget = {});

}  // namespace mismatch
