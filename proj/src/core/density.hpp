#pragma once

#include <span>
#include <vector>

#include "budget.hpp"
#include "channel.hpp"

namespace mismatch {

// Atoms closer than this merge during spectrum construction.
inline constexpr double kAtomMergeTol = 1e-12;

// Which law the spectrum is taken under: the input distribution driving the
// channel, or a uniform message over a fixed codebook driving it.
enum class SpectrumLaw { Input, Codebook };

struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

// Per-letter density table for a pair under an input distribution.
// value(x, y) = log q(x, y) - log sum_x' p(x') q(x', y), in nats.
// Entries with q(x, y) = 0 or with an unreachable y are marked unused.
struct DensityTable {
  int input_size = 0;
  int output_size = 0;
  std::vector<double> values;
  std::vector<double> joint;  // p(x) w(y|x)
  std::vector<unsigned char> used;

  double value(int x, int y) const {
    return values[static_cast<std::size_t>(x) * output_size + y];
  }
  double joint_prob(int x, int y) const {
    return joint[static_cast<std::size_t>(x) * output_size + y];
  }
  bool is_used(int x, int y) const {
    return used[static_cast<std::size_t>(x) * output_size + y] != 0;
  }
};

// Exact finite PMF of Z_n = (1/n) sum of per-letter densities. Values are
// strictly increasing with gaps above the merge tolerance; probs sum to the
// total mass (1 for complete laws).
struct SpectrumPmf {
  std::vector<Atom> atoms;
  int n = 1;
  SpectrumLaw law = SpectrumLaw::Input;

  // P[Z_n <= alpha].
  double tail_leq(double alpha) const;
  // P[Z_n >= alpha].
  double tail_geq(double alpha) const;
  // Smallest atom value whose CDF exceeds eps; eps in [0, 1).
  double quantile(double eps) const;
  double mean() const;
  double second_moment() const;
  double total_mass() const;
};

DensityTable density_table(const ProblemPair& pair, const InputDist& p);

// Sum of per-letter densities over a symbol sequence, in nats (not divided
// by the length). Rejects pairs (x_i, y_i) outside the usable table.
double sequence_density(const ProblemPair& pair, const InputDist& p,
                        std::span<const int> xs, std::span<const int> ys);

SpectrumPmf exact_spectrum(const ProblemPair& pair, const InputDist& p, int n,
                           const Budget& budget = {});

struct OvershootCheck {
  double lhs = 0.0;  // P[(1/n) log L >= eps]
  double rhs = 0.0;  // exp(-n eps)
  bool holds = false;
};

// L is the change-of-measure ratio between the decoding-metric posterior and
// the true channel; its normalized log overshoots eps with probability at
// most exp(-n eps).
OvershootCheck overshoot_check(const ProblemPair& pair, const InputDist& p,
                               int n, double eps, const Budget& budget = {});

struct UiBoundCheck {
  double moment = 0.0;  // E[Z_n^2]
  double bound = 0.0;   // 2 ln^2(q_star) + 2 ln^2(q_star / |X|)
  bool holds = false;
};

UiBoundCheck ui_bound_check(const ProblemPair& pair, const InputDist& p, int n,
                            const Budget& budget = {});

// Shared machinery, exposed for reuse by decoding and bound code.
std::vector<Atom> merge_atoms(std::vector<Atom> raw);
std::vector<Atom> convolve_atoms(const std::vector<Atom>& a,
                                 const std::vector<Atom>& b,
                                 const Budget& budget);
// n-fold convolution of a per-letter law, values then divided by n.
SpectrumPmf convolve_n(std::vector<Atom> letter, int n, SpectrumLaw law,
                       const Budget& budget);

}  // namespace mismatch
