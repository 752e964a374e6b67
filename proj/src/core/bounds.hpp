#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "budget.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "decoder.hpp"
#include "density.hpp"

namespace mismatch {

enum class BoundKind { Feinstein, RcuS, VerduHan };

struct BoundReport {
  BoundKind kind = BoundKind::Feinstein;
  int n = 0;
  double M = 0.0;
  double gamma = 0.0;
  double s = 1.0;
  double value = 0.0;    // raw, may leave [0, 1]
  double tail = 0.0;     // the spectrum term alone
  SpectrumLaw law = SpectrumLaw::Input;
  bool vacuous = false;  // > 1 for achievability, <= 0 for the converse
};

// P[Z_n <= R + gamma - (log s)/n] + exp(-n gamma) under the input law, with
// the density tilted by s in (0, 1].
BoundReport feinstein_bound(const ProblemPair& pair, const InputDist& p, int n,
                            double M, double gamma, double s = 1.0,
                            const Budget& budget = {});

// E[min{1, ((M-1)/s) exp(-n Z_n)}] for the s-tilted density.
BoundReport rcu_s_bound(const ProblemPair& pair, const InputDist& p, int n,
                        double M, double s, const Budget& budget = {});

// P[Z_n <= R - gamma] - exp(-n gamma) under the codebook law; a floor for
// the stochastic decoder's error on that codebook.
BoundReport verdu_han_bound(const Codebook& cb, const ProblemPair& pair,
                            double gamma, const Budget& budget = {});

// Geometric grid on [1/(2n), 1], ends included.
std::vector<double> gamma_grid(int n, int points = 8);

struct SandwichRow {
  int n = 0;
  std::uint64_t M = 0;
  double gamma = 0.0;
  double s = 0.0;
  std::uint64_t seed = 0;
  double pe_exact = 0.0;
  double pe_mc = 0.0;
  double std_err = 0.0;
  double feinstein = 0.0;
  double rcu = 0.0;
  double verdu_han = 0.0;
  bool verdict_a = false;  // ensemble mean below the best achievability bound
  bool verdict_b = false;  // every exact error above every converse value
};

// Crosses seeded iid codebooks with gamma and s grids. verdict_a allows the
// best achievability value plus four standard errors of the ensemble mean;
// verdict_b has a 1e-12 slack. Both verdicts are stamped on every row.
std::vector<SandwichRow> sandwich_report(
    const ProblemPair& pair, const InputDist& p, int n, std::uint64_t M,
    std::span<const std::uint64_t> seeds, std::span<const double> gammas,
    std::span<const double> ss, std::uint64_t mc_trials,
    const Budget& budget = {});

}  // namespace mismatch
