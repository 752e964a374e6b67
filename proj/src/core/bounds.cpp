#include "bounds.hpp"

#include <algorithm>
#include <cmath>

namespace mismatch {

namespace {

void check_bound_args(int n, double M, double gamma, double s) {
  require(n >= 1, MM_ERR_INVALID_ARGUMENT, "bound: n must be >= 1");
  require(std::isfinite(M) && M >= 1.0, MM_ERR_INVALID_ARGUMENT,
          "bound: M must be >= 1");
  require(std::isfinite(gamma) && gamma > 0.0, MM_ERR_INVALID_ARGUMENT,
          "bound: gamma must be positive");
  require(std::isfinite(s) && s > 0.0 && s <= 1.0, MM_ERR_INVALID_ARGUMENT,
          "bound: s must lie in (0, 1]");
}

SpectrumPmf tilted_spectrum(const ProblemPair& pair, const InputDist& p, int n,
                            double s, const Budget& budget) {
  if (s == 1.0) return exact_spectrum(pair, p, n, budget);
  return exact_spectrum(tilt_pair(pair, s), p, n, budget);
}

}  // namespace

BoundReport feinstein_bound(const ProblemPair& pair, const InputDist& p, int n,
                            double M, double gamma, double s,
                            const Budget& budget) {
  check_bound_args(n, M, gamma, s);
  const SpectrumPmf pmf = tilted_spectrum(pair, p, n, s, budget);
  const double rate = std::log(M) / n;
  const double alpha = rate + gamma - std::log(s) / n;

  BoundReport r;
  r.kind = BoundKind::Feinstein;
  r.n = n;
  r.M = M;
  r.gamma = gamma;
  r.s = s;
  r.law = SpectrumLaw::Input;
  r.tail = pmf.tail_leq(alpha);
  r.value = r.tail + std::exp(-static_cast<double>(n) * gamma);
  r.vacuous = r.value > 1.0;
  return r;
}

BoundReport rcu_s_bound(const ProblemPair& pair, const InputDist& p, int n,
                        double M, double s, const Budget& budget) {
  check_bound_args(n, M, 1.0, s);
  const SpectrumPmf pmf = tilted_spectrum(pair, p, n, s, budget);

  double value = 0.0;
  for (const Atom& a : pmf.atoms) {
    const double z =
        (M - 1.0) / s * std::exp(-static_cast<double>(n) * a.value);
    value += a.prob * std::min(1.0, z);
  }

  BoundReport r;
  r.kind = BoundKind::RcuS;
  r.n = n;
  r.M = M;
  r.gamma = 0.0;
  r.s = s;
  r.law = SpectrumLaw::Input;
  r.tail = value;
  r.value = value;
  r.vacuous = r.value > 1.0;
  return r;
}

BoundReport verdu_han_bound(const Codebook& cb, const ProblemPair& pair,
                            double gamma, const Budget& budget) {
  require(std::isfinite(gamma) && gamma > 0.0, MM_ERR_INVALID_ARGUMENT,
          "bound: gamma must be positive");
  const SpectrumPmf pmf = codebook_spectrum(cb, pair, budget);
  const double rate = cb.rate();

  BoundReport r;
  r.kind = BoundKind::VerduHan;
  r.n = cb.n;
  r.M = static_cast<double>(cb.size);
  r.gamma = gamma;
  r.s = 1.0;
  r.law = SpectrumLaw::Codebook;
  r.tail = pmf.tail_leq(rate - gamma);
  r.value = r.tail - std::exp(-static_cast<double>(cb.n) * gamma);
  r.vacuous = r.value <= 0.0;
  return r;
}

std::vector<double> gamma_grid(int n, int points) {
  require(n >= 1, MM_ERR_INVALID_ARGUMENT, "gamma grid: n must be >= 1");
  require(points >= 2, MM_ERR_INVALID_ARGUMENT,
          "gamma grid: need at least two points");
  const double lo = 1.0 / (2.0 * n);
  const double hi = 1.0;
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] =
        lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  g.back() = hi;
  return g;
}

std::vector<SandwichRow> sandwich_report(
    const ProblemPair& pair, const InputDist& p, int n, std::uint64_t M,
    std::span<const std::uint64_t> seeds, std::span<const double> gammas,
    std::span<const double> ss, std::uint64_t mc_trials, const Budget& budget) {
  require(!seeds.empty() && !gammas.empty() && !ss.empty(),
          MM_ERR_INVALID_ARGUMENT, "sandwich: empty grid");
  require(M >= 1, MM_ERR_INVALID_ARGUMENT, "sandwich: M must be >= 1");

  struct PerSeed {
    ErrorEstimate exact;
    ErrorEstimate mc;
    std::vector<double> vh;
  };
  std::vector<PerSeed> per(seeds.size());
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    const Codebook cb =
        gen_codebook(CodebookKind::Iid, p, n, M, seeds[si]);
    per[si].exact = exact_error(cb, pair, DecoderRule::Stochastic, budget);
    if (mc_trials > 0)
      per[si].mc =
          mc_error(cb, pair, DecoderRule::Stochastic, mc_trials, seeds[si]);
    per[si].vh.reserve(gammas.size());
    for (const double g : gammas)
      per[si].vh.push_back(verdu_han_bound(cb, pair, g, budget).value);
  }

  std::vector<std::vector<double>> fein(gammas.size());
  std::vector<double> rcu(ss.size());
  double best_ach = 1e300;
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    fein[gi].resize(ss.size());
    for (std::size_t vi = 0; vi < ss.size(); ++vi) {
      fein[gi][vi] =
          feinstein_bound(pair, p, n, static_cast<double>(M), gammas[gi],
                          ss[vi], budget)
              .value;
      best_ach = std::min(best_ach, fein[gi][vi]);
    }
  }
  for (std::size_t vi = 0; vi < ss.size(); ++vi) {
    rcu[vi] =
        rcu_s_bound(pair, p, n, static_cast<double>(M), ss[vi], budget).value;
    best_ach = std::min(best_ach, rcu[vi]);
  }

  double mean = 0.0;
  for (const PerSeed& ps : per) mean += ps.exact.pe;
  mean /= static_cast<double>(per.size());
  double var = 0.0;
  for (const PerSeed& ps : per) {
    const double d = ps.exact.pe - mean;
    var += d * d;
  }
  var = per.size() > 1 ? var / static_cast<double>(per.size() - 1) : 0.0;
  const double sem = std::sqrt(var / static_cast<double>(per.size()));

  const bool verdict_a = mean <= best_ach + 4.0 * sem + 1e-12;
  bool verdict_b = true;
  for (const PerSeed& ps : per)
    for (const double v : ps.vh)
      if (ps.exact.pe < v - 1e-12) verdict_b = false;

  std::vector<SandwichRow> rows;
  rows.reserve(seeds.size() * gammas.size() * ss.size());
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      for (std::size_t vi = 0; vi < ss.size(); ++vi) {
        SandwichRow row;
        row.n = n;
        row.M = M;
        row.gamma = gammas[gi];
        row.s = ss[vi];
        row.seed = seeds[si];
        row.pe_exact = per[si].exact.pe;
        row.pe_mc = mc_trials > 0 ? per[si].mc.pe : 0.0;
        row.std_err = mc_trials > 0 ? per[si].mc.std_err : 0.0;
        row.feinstein = fein[gi][vi];
        row.rcu = rcu[vi];
        row.verdu_han = per[si].vh[gi];
        row.verdict_a = verdict_a;
        row.verdict_b = verdict_b;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace mismatch
