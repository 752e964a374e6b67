#include "density.hpp"

#include <algorithm>
#include <cmath>

namespace mismatch {

double SpectrumPmf::tail_leq(double alpha) const {
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (a.value > alpha) break;
    sum += a.prob;
  }
  return sum;
}

double SpectrumPmf::tail_geq(double alpha) const {
  double sum = 0.0;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    if (it->value < alpha) break;
    sum += it->prob;
  }
  return sum;
}

double SpectrumPmf::quantile(double eps) const {
  require(std::isfinite(eps) && eps >= 0.0 && eps < 1.0,
          MM_ERR_INVALID_ARGUMENT, "quantile: eps must lie in [0, 1)");
  require(!atoms.empty(), MM_ERR_EMPTY_DISTRIBUTION, "quantile: empty spectrum");
  double cum = 0.0;
  for (const Atom& a : atoms) {
    cum += a.prob;
    if (cum > eps) return a.value;
  }
  return atoms.back().value;
}

double SpectrumPmf::mean() const {
  double sum = 0.0;
  for (const Atom& a : atoms) sum += a.value * a.prob;
  return sum;
}

double SpectrumPmf::second_moment() const {
  double sum = 0.0;
  for (const Atom& a : atoms) sum += a.value * a.value * a.prob;
  return sum;
}

double SpectrumPmf::total_mass() const {
  double sum = 0.0;
  for (const Atom& a : atoms) sum += a.prob;
  return sum;
}

std::vector<Atom> merge_atoms(std::vector<Atom> raw) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> out;
  out.reserve(raw.size());
  for (const Atom& a : raw) {
    // The first atom of a group is its representative value.
    if (!out.empty() && a.value - out.back().value <= kAtomMergeTol)
      out.back().prob += a.prob;
    else
      out.push_back(a);
  }
  return out;
}

std::vector<Atom> convolve_atoms(const std::vector<Atom>& a,
                                 const std::vector<Atom>& b,
                                 const Budget& budget) {
  const std::uint64_t raw_size =
      static_cast<std::uint64_t>(a.size()) * b.size();
  require(raw_size <= budget.atoms, MM_ERR_BUDGET_EXCEEDED,
          "convolution: " + std::to_string(raw_size) +
              " candidate atoms exceed the budget of " +
              std::to_string(budget.atoms));
  std::vector<Atom> raw;
  raw.reserve(raw_size);
  for (const Atom& ai : a)
    for (const Atom& bi : b)
      raw.push_back(Atom{ai.value + bi.value, ai.prob * bi.prob});
  return merge_atoms(std::move(raw));
}

SpectrumPmf convolve_n(std::vector<Atom> letter, int n, SpectrumLaw law,
                       const Budget& budget) {
  require(n >= 1, MM_ERR_INVALID_ARGUMENT, "spectrum: n must be >= 1");
  std::vector<Atom> sum = letter;
  for (int i = 2; i <= n; ++i) sum = convolve_atoms(sum, letter, budget);
  if (n > 1) {
    for (Atom& a : sum) a.value /= n;
    sum = merge_atoms(std::move(sum));
  }
  SpectrumPmf pmf;
  pmf.atoms = std::move(sum);
  pmf.n = n;
  pmf.law = law;
  return pmf;
}

DensityTable density_table(const ProblemPair& pair, const InputDist& p) {
  require(p.size() == pair.channel.input_size, MM_ERR_DIMENSION_MISMATCH,
          "density table: input distribution size " + std::to_string(p.size()) +
              " does not match the alphabet size " +
              std::to_string(pair.channel.input_size));
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;

  std::vector<double> denom(static_cast<std::size_t>(out), 0.0);
  std::vector<double> p_y(static_cast<std::size_t>(out), 0.0);
  for (int y = 0; y < out; ++y) {
    for (int x = 0; x < in; ++x) {
      denom[y] += p[x] * pair.metric(x, y);
      p_y[y] += p[x] * pair.channel(x, y);
    }
    require(!(p_y[y] > 0.0 && denom[y] <= 0.0), MM_ERR_DENOMINATOR_ZERO,
            "density table: metric mass is zero at reachable output " +
                std::to_string(y));
  }

  DensityTable t;
  t.input_size = in;
  t.output_size = out;
  t.values.assign(static_cast<std::size_t>(in) * out, 0.0);
  t.joint.assign(static_cast<std::size_t>(in) * out, 0.0);
  t.used.assign(static_cast<std::size_t>(in) * out, 0);
  for (int x = 0; x < in; ++x) {
    for (int y = 0; y < out; ++y) {
      const std::size_t i = static_cast<std::size_t>(x) * out + y;
      t.joint[i] = p[x] * pair.channel(x, y);
      if (pair.metric(x, y) > 0.0 && denom[y] > 0.0) {
        t.used[i] = 1;
        t.values[i] = std::log(pair.metric(x, y)) - std::log(denom[y]);
      }
    }
  }
  return t;
}

double sequence_density(const ProblemPair& pair, const InputDist& p,
                        std::span<const int> xs, std::span<const int> ys) {
  require(xs.size() == ys.size(), MM_ERR_DIMENSION_MISMATCH,
          "sequence density: sequences differ in length");
  const DensityTable t = density_table(pair, p);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int x = xs[i], y = ys[i];
    require(x >= 0 && x < t.input_size && y >= 0 && y < t.output_size,
            MM_ERR_INVALID_ARGUMENT, "sequence density: symbol out of range");
    require(t.is_used(x, y), MM_ERR_IMPOSSIBLE_PAIR,
            "sequence density: undefined at position " + std::to_string(i));
    sum += t.value(x, y);
  }
  return sum;
}

namespace {

std::vector<Atom> letter_atoms(const DensityTable& t) {
  std::vector<Atom> raw;
  for (int x = 0; x < t.input_size; ++x)
    for (int y = 0; y < t.output_size; ++y)
      if (t.joint_prob(x, y) > 0.0)
        raw.push_back(Atom{t.value(x, y), t.joint_prob(x, y)});
  require(!raw.empty(), MM_ERR_EMPTY_DISTRIBUTION,
          "spectrum: the induced joint law has no support");
  return merge_atoms(std::move(raw));
}

}  // namespace

SpectrumPmf exact_spectrum(const ProblemPair& pair, const InputDist& p, int n,
                           const Budget& budget) {
  return convolve_n(letter_atoms(density_table(pair, p)), n,
                    SpectrumLaw::Input, budget);
}

OvershootCheck overshoot_check(const ProblemPair& pair, const InputDist& p,
                               int n, double eps, const Budget& budget) {
  require(std::isfinite(eps) && eps > 0.0, MM_ERR_INVALID_ARGUMENT,
          "overshoot: eps must be positive");
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;

  std::vector<double> denom(static_cast<std::size_t>(out), 0.0);
  std::vector<double> p_y(static_cast<std::size_t>(out), 0.0);
  for (int y = 0; y < out; ++y)
    for (int x = 0; x < in; ++x) {
      denom[y] += p[x] * pair.metric(x, y);
      p_y[y] += p[x] * pair.channel(x, y);
    }

  // log L(x, y) = log q(x, y) - log w(y|x) + log P_Y(y) - log E[q(X', y)].
  std::vector<Atom> raw;
  for (int x = 0; x < in; ++x) {
    for (int y = 0; y < out; ++y) {
      const double joint = p[x] * pair.channel(x, y);
      if (joint <= 0.0) continue;
      require(denom[y] > 0.0, MM_ERR_DENOMINATOR_ZERO,
              "overshoot: metric mass is zero at reachable output " +
                  std::to_string(y));
      const double v = std::log(pair.metric(x, y)) -
                       std::log(pair.channel(x, y)) + std::log(p_y[y]) -
                       std::log(denom[y]);
      raw.push_back(Atom{v, joint});
    }
  }
  require(!raw.empty(), MM_ERR_EMPTY_DISTRIBUTION,
          "overshoot: the induced joint law has no support");

  const SpectrumPmf pmf =
      convolve_n(merge_atoms(std::move(raw)), n, SpectrumLaw::Input, budget);
  OvershootCheck c;
  c.lhs = pmf.tail_geq(eps);
  c.rhs = std::exp(-static_cast<double>(n) * eps);
  c.holds = c.lhs <= c.rhs + 1e-12;
  return c;
}

UiBoundCheck ui_bound_check(const ProblemPair& pair, const InputDist& p, int n,
                            const Budget& budget) {
  UiBoundCheck c;
  c.moment = exact_spectrum(pair, p, n, budget).second_moment();
  const double lq = std::log(pair.metric.q_star);
  const double lqx =
      std::log(pair.metric.q_star / pair.channel.input_size);
  c.bound = 2.0 * lq * lq + 2.0 * lqx * lqx;
  c.holds = c.moment <= c.bound + 1e-12;
  return c;
}

}  // namespace mismatch
