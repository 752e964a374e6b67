#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "budget.hpp"
#include "errors.hpp"

namespace mismatch {

// Tolerance for "sums to one" checks on rows and distributions.
inline constexpr double kProbTol = 1e-12;

// Row-major index of the tuple (digits[0], ..., digits[k-1]) in base `size`,
// first position most significant. Inverse: tuple_at.
std::int64_t tuple_index(const std::vector<int>& digits, int size);
int tuple_at(std::int64_t index, int size, int k, int pos);

struct ChannelSpec {
  int input_size = 0;
  int output_size = 0;
  std::vector<double> w;  // row-major |X| x |Y|, rows sum to 1

  double operator()(int x, int y) const {
    return w[static_cast<std::size_t>(x) * output_size + y];
  }

  // Throws unless w is a finite row-stochastic |X| x |Y| matrix.
  static ChannelSpec validated(int input_size, int output_size,
                               std::vector<double> w);
  static ChannelSpec bsc(double crossover);
};

// Decoding metric, stored rescaled so the largest entry is 1. q_star is a
// positive floor valid on the channel support: q_star <= q(x,y) <= 1
// wherever w(y|x) > 0.
struct MetricSpec {
  int input_size = 0;
  int output_size = 0;
  std::vector<double> q;  // row-major, max entry 1
  double scale = 1.0;     // original metric = scale * q
  double q_star = 0.0;

  double operator()(int x, int y) const {
    return q[static_cast<std::size_t>(x) * output_size + y];
  }
};

struct InputDist {
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }

  static InputDist validated(std::vector<double> p);
  static InputDist uniform(int size);
  // Joint law on tuples (i, j) -> i * b.size() + j.
  static InputDist product(const InputDist& a, const InputDist& b);
  static InputDist power(const InputDist& a, int k);
};

// A channel with the metric used to decode it. k is the number of base
// channel uses each symbol represents; rates are reported per base use.
struct ProblemPair {
  ChannelSpec channel;
  MetricSpec metric;
  int k = 1;
  std::string name;
};

// Checks dimensions, nonnegativity, and that the metric is positive wherever
// the channel is. q_raw is taken at its original scale.
ProblemPair validate_pair(const ChannelSpec& channel,
                          const std::vector<double>& q_raw,
                          std::string name = {});

// k-fold memoryless extension; symbols become tuples, metrics multiply.
ProblemPair product_extend(const ProblemPair& base, int k,
                           const Budget& budget = {});

// Entrywise power q^alpha, alpha > 0. Rescaling keeps the stored max at 1.
MetricSpec tilt_metric(const MetricSpec& m, double alpha);
ProblemPair tilt_pair(const ProblemPair& base, double alpha);

// Indicator metric of the channel support: 1 where w > 0, else 0.
MetricSpec erasures_only_metric(const ChannelSpec& channel);
ProblemPair erasures_only_pair(const ChannelSpec& channel, std::string name = {});

}  // namespace mismatch
