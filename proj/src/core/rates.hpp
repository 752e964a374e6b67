#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "budget.hpp"
#include "channel.hpp"

namespace mismatch {

enum class RateMode { Gmi, Lm, S1 };

// Exact: closed-form or finite evaluation. Converged: iterative solve met
// its tolerance. BudgetHit: iteration cap reached first.
enum class RateStatus { Exact, Converged, BudgetHit };

struct RateResult {
  double value = 0.0;  // nats per base channel use
  int k = 1;
  double s = 1.0;
  std::vector<double> a;  // per-letter offsets, empty unless mode lm
  InputDist p;
  RateStatus status = RateStatus::Converged;
};

// (1/k) sum_{x,y} p(x) w(y|x) [s log q(x,y) + a_x - log sum_x' p(x') q(x',y)^s e^{a_x'}].
// a may be empty (treated as all zero) or one entry per input letter.
double rate_objective(const ProblemPair& pair, const InputDist& p, double s,
                      std::span<const double> a = {});

// Best parameters for a fixed input: gmi searches s in (0, 1], lm also
// optimizes offsets (last letter anchored at 0), s1 just evaluates s = 1.
RateResult optimize_params(const ProblemPair& pair, const InputDist& p,
                           RateMode mode);

// Multistart projected-gradient ascent over the input simplex, inner
// parameters re-solved at every step. warm, when given, is tried first.
RateResult optimize_input(const ProblemPair& pair, RateMode mode, int restarts,
                          std::uint64_t seed, const InputDist* warm = nullptr);

// Blahut-Arimoto; the returned value is within 1e-10 of capacity.
RateResult matched_capacity(const ChannelSpec& channel);

struct GapBound {
  double eta_upper = 0.0;  // kl / k, nats per base channel use
  int k = 1;
  InputDist p;
  double kl = 0.0;  // relative entropy between the channel law and the
                    // metric-induced output-conditional law, per symbol
};

GapBound gap_bound(const ProblemPair& pair, const InputDist& p);

struct BscClosedForm {
  double capacity = 0.0;  // nats
  double s_star = 1.0;
};

// Crossover p decoded with the metric of a BSC(p'); needs 0 < p' <= p <= 1/2.
BscClosedForm bsc_closed_form(double p, double p_prime);

// optimize_input across block lengths, warm-starting each k from the best
// smaller divisor's optimum so values never decrease for nested k.
std::vector<RateResult> rate_sweep(const ProblemPair& base,
                                   std::span<const int> ks, RateMode mode,
                                   int restarts, std::uint64_t seed,
                                   const Budget& budget = {});

}  // namespace mismatch
