#include "rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "density.hpp"
#include "util.hpp"

namespace mismatch {

namespace {

constexpr double kSLow = 1e-9;
constexpr double kOffsetBox = 60.0;  // keeps exp(a) comfortably finite

struct ParamSolution {
  double value = 0.0;
  double s = 1.0;
  std::vector<double> a;  // full length, last entry 0; empty means all zero
  RateStatus status = RateStatus::Converged;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Euclidean projection onto the probability simplex.
std::vector<double> proj_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = -1;
  for (std::size_t j = 0; j < u.size(); ++j) {
    css += u[j];
    const double t = (css - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) {
      rho = static_cast<int>(j);
      theta = t;
    }
  }
  if (rho < 0) {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
    return v;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
  return v;
}

// Denominators D(y) = sum_x p(x) q(x,y)^s e^{a_x} and outputs P_Y.
void accumulate_denoms(const ProblemPair& pair, const InputDist& p, double s,
                       std::span<const double> a, std::vector<double>& denom,
                       std::vector<double>& p_y) {
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;
  denom.assign(static_cast<std::size_t>(out), 0.0);
  p_y.assign(static_cast<std::size_t>(out), 0.0);
  for (int x = 0; x < in; ++x) {
    if (p[x] <= 0.0) continue;
    const double ea = a.empty() ? 1.0 : std::exp(a[static_cast<std::size_t>(x)]);
    for (int y = 0; y < out; ++y) {
      const double q = pair.metric(x, y);
      if (q > 0.0) denom[y] += p[x] * std::pow(q, s) * ea;
      p_y[y] += p[x] * pair.channel(x, y);
    }
  }
}

double objective_checked(const ProblemPair& pair, const InputDist& p, double s,
                         std::span<const double> a) {
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;
  std::vector<double> denom, p_y;
  accumulate_denoms(pair, p, s, a, denom, p_y);
  double sum = 0.0;
  for (int x = 0; x < in; ++x) {
    if (p[x] <= 0.0) continue;
    const double ax = a.empty() ? 0.0 : a[static_cast<std::size_t>(x)];
    for (int y = 0; y < out; ++y) {
      const double w = pair.channel(x, y);
      if (w <= 0.0) continue;
      sum += p[x] * w *
             (s * std::log(pair.metric(x, y)) + ax - std::log(denom[y]));
    }
  }
  return sum / pair.k;
}

// d(objective)/ds and d(objective)/da_j at (p, s, a); a full length or empty.
void grad_params(const ProblemPair& pair, const InputDist& p, double s,
                 std::span<const double> a, double& gs,
                 std::vector<double>& ga) {
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;
  std::vector<double> denom, p_y;
  accumulate_denoms(pair, p, s, a, denom, p_y);

  gs = 0.0;
  ga.assign(static_cast<std::size_t>(in), 0.0);
  for (int y = 0; y < out; ++y) {
    if (p_y[y] <= 0.0) continue;
    double dnum = 0.0;  // sum_x p q^s e^a log q
    for (int x = 0; x < in; ++x) {
      const double q = pair.metric(x, y);
      if (p[x] <= 0.0 || q <= 0.0) continue;
      const double ea = a.empty() ? 1.0 : std::exp(a[static_cast<std::size_t>(x)]);
      const double term = p[x] * std::pow(q, s) * ea;
      dnum += term * std::log(q);
      ga[static_cast<std::size_t>(x)] -= p_y[y] * term / denom[y];
    }
    gs -= p_y[y] * dnum / denom[y];
  }
  for (int x = 0; x < in; ++x) {
    double row = 0.0;
    for (int y = 0; y < out; ++y) {
      const double w = pair.channel(x, y);
      if (w <= 0.0) continue;
      gs += p[x] * w * std::log(pair.metric(x, y));
      row += w;
    }
    ga[static_cast<std::size_t>(x)] += p[x] * row;
    ga[static_cast<std::size_t>(x)] /= pair.k;
  }
  gs /= pair.k;
}

ParamSolution solve_gmi(const ProblemPair& pair, const InputDist& p) {
  const auto f = [&](double s) { return objective_checked(pair, p, s, {}); };
  constexpr double invphi = 0.6180339887498949;
  constexpr double invphi2 = 1.0 - invphi;
  double a = kSLow, b = 1.0;
  double c = a + invphi2 * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-11) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = a + invphi2 * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  ParamSolution sol;
  sol.s = 0.5 * (a + b);
  sol.value = f(sol.s);
  const double f_one = f(1.0);
  if (f_one >= sol.value) {
    sol.s = 1.0;
    sol.value = f_one;
  }
  sol.status = RateStatus::Converged;
  return sol;
}

// Ascent over theta = (s, a_0..a_{L-2}); the last offset stays 0.
ParamSolution solve_lm(const ProblemPair& pair, const InputDist& p,
                       const ParamSolution* init) {
  const int in = pair.channel.input_size;
  const int nvar = 1 + (in - 1);

  std::vector<double> a(static_cast<std::size_t>(in), 0.0);
  double s = 1.0;
  if (init) {
    s = init->s;
    if (!init->a.empty()) a = init->a;
  } else {
    const ParamSolution g = solve_gmi(pair, p);
    s = g.s;
  }

  const auto project = [&](std::vector<double> th) {
    th[0] = std::clamp(th[0], kSLow, 1.0);
    for (int i = 1; i < nvar; ++i)
      th[static_cast<std::size_t>(i)] =
          std::clamp(th[static_cast<std::size_t>(i)], -kOffsetBox, kOffsetBox);
    return th;
  };
  const auto unpack = [&](const std::vector<double>& th, double& s_out,
                          std::vector<double>& a_out) {
    s_out = th[0];
    a_out.assign(static_cast<std::size_t>(in), 0.0);
    for (int i = 0; i + 1 < in; ++i)
      a_out[static_cast<std::size_t>(i)] = th[static_cast<std::size_t>(i + 1)];
  };
  const auto eval = [&](const std::vector<double>& th) {
    double ss;
    std::vector<double> aa;
    unpack(th, ss, aa);
    return objective_checked(pair, p, ss, aa);
  };
  const auto grad = [&](const std::vector<double>& th) {
    double ss;
    std::vector<double> aa;
    unpack(th, ss, aa);
    double gs;
    std::vector<double> ga;
    grad_params(pair, p, ss, aa, gs, ga);
    std::vector<double> g(static_cast<std::size_t>(nvar), 0.0);
    g[0] = gs;
    for (int i = 0; i + 1 < in; ++i)
      g[static_cast<std::size_t>(i + 1)] = ga[static_cast<std::size_t>(i)];
    return g;
  };

  std::vector<double> theta(static_cast<std::size_t>(nvar), 0.0);
  theta[0] = s;
  for (int i = 0; i + 1 < in; ++i)
    theta[static_cast<std::size_t>(i + 1)] = a[static_cast<std::size_t>(i)];
  theta = project(std::move(theta));

  double fv = eval(theta);
  std::vector<double> g = grad(theta);
  double step = 1.0;
  ParamSolution sol;
  sol.status = RateStatus::BudgetHit;

  constexpr int kMaxIter = 5000;
  int stalled = 0;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    std::vector<double> pg(static_cast<std::size_t>(nvar));
    {
      std::vector<double> probe(theta);
      for (int i = 0; i < nvar; ++i)
        probe[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(i)];
      probe = project(std::move(probe));
      for (int i = 0; i < nvar; ++i)
        pg[static_cast<std::size_t>(i)] =
            probe[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(i)];
    }
    if (norm2(pg) < 1e-9) {
      sol.status = RateStatus::Converged;
      break;
    }

    double tt = step;
    bool accepted = false;
    std::vector<double> cand;
    double fc = fv;
    for (int bt = 0; bt < 60; ++bt) {
      cand = theta;
      for (int i = 0; i < nvar; ++i)
        cand[static_cast<std::size_t>(i)] += tt * g[static_cast<std::size_t>(i)];
      cand = project(std::move(cand));
      std::vector<double> dth(static_cast<std::size_t>(nvar));
      for (int i = 0; i < nvar; ++i)
        dth[static_cast<std::size_t>(i)] =
            cand[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(i)];
      fc = eval(cand);
      if (fc >= fv + 1e-4 * dot(g, dth)) {
        accepted = true;
        break;
      }
      tt *= 0.5;
    }
    if (!accepted) {
      sol.status = norm2(pg) < 1e-6 ? RateStatus::Converged
                                    : RateStatus::BudgetHit;
      break;
    }

    std::vector<double> gn = grad(cand);
    std::vector<double> dth(static_cast<std::size_t>(nvar)),
        dg(static_cast<std::size_t>(nvar));
    for (int i = 0; i < nvar; ++i) {
      dth[static_cast<std::size_t>(i)] =
          cand[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(i)];
      dg[static_cast<std::size_t>(i)] =
          gn[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)];
    }
    const double curv = -dot(dth, dg);
    step = curv > 1e-18 ? std::clamp(dot(dth, dth) / curv, 1e-12, 1e6)
                        : std::min(tt * 2.0, 1e6);
    const double gain = fc - fv;
    theta = std::move(cand);
    fv = fc;
    g = std::move(gn);
    // Oscillating steps with no measurable progress count as converged.
    if (gain <= 1e-13 * (1.0 + std::abs(fv))) {
      if (++stalled >= 20) {
        sol.status = RateStatus::Converged;
        break;
      }
    } else {
      stalled = 0;
    }
  }

  unpack(theta, sol.s, sol.a);
  sol.value = fv;
  return sol;
}

ParamSolution solve_inner(const ProblemPair& pair, const InputDist& p,
                          RateMode mode, const ParamSolution* warm) {
  switch (mode) {
    case RateMode::S1: {
      ParamSolution sol;
      sol.s = 1.0;
      sol.value = objective_checked(pair, p, 1.0, {});
      sol.status = RateStatus::Exact;
      return sol;
    }
    case RateMode::Gmi:
      return solve_gmi(pair, p);
    case RateMode::Lm:
      return solve_lm(pair, p, warm);
  }
  raise(MM_ERR_INVALID_ARGUMENT, "rates: unknown mode");
}

// d(objective)/dp at the inner optimum (envelope form: s and a held fixed).
std::vector<double> grad_input(const ProblemPair& pair, const InputDist& p,
                               const ParamSolution& sol) {
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;
  std::span<const double> a(sol.a);
  std::vector<double> denom, p_y;
  accumulate_denoms(pair, p, sol.s, a, denom, p_y);

  std::vector<double> g(static_cast<std::size_t>(in), 0.0);
  for (int x = 0; x < in; ++x) {
    const double ax = a.empty() ? 0.0 : a[static_cast<std::size_t>(x)];
    const double ea = a.empty() ? 1.0 : std::exp(ax);
    double acc = 0.0;
    for (int y = 0; y < out; ++y) {
      const double w = pair.channel(x, y);
      const double q = pair.metric(x, y);
      if (w > 0.0) {
        const double d = std::max(denom[y], 1e-300);
        acc += w * (sol.s * std::log(q) + ax - std::log(d));
      }
      if (p_y[y] > 0.0 && q > 0.0 && denom[y] > 0.0)
        acc -= p_y[y] * std::pow(q, sol.s) * ea / denom[y];
    }
    g[static_cast<std::size_t>(x)] = acc / pair.k;
  }
  return g;
}

struct InputSolution {
  InputDist p;
  ParamSolution sol;
  RateStatus status = RateStatus::Converged;
};

InputSolution ascend_input(const ProblemPair& pair, InputDist p, RateMode mode,
                           const ParamSolution* warm) {
  InputSolution best;
  best.sol = solve_inner(pair, p, mode, warm);
  best.p = std::move(p);
  best.status = RateStatus::Converged;

  double step = 1.0;
  constexpr int kMaxOuter = 500;
  int outer = 0;
  for (; outer < kMaxOuter; ++outer) {
    const std::vector<double> g = grad_input(pair, best.p, best.sol);
    {
      std::vector<double> probe = best.p.p;
      for (std::size_t i = 0; i < probe.size(); ++i) probe[i] += g[i];
      probe = proj_simplex(std::move(probe));
      double pgn = 0.0;
      for (std::size_t i = 0; i < probe.size(); ++i) {
        const double d = probe[i] - best.p.p[i];
        pgn += d * d;
      }
      if (std::sqrt(pgn) < 1e-10) break;
    }

    bool improved = false;
    double tt = step;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> cand = best.p.p;
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] += tt * g[i];
      cand = proj_simplex(std::move(cand));
      InputDist cd{std::move(cand)};
      const ParamSolution cs = solve_inner(pair, cd, mode, &best.sol);
      if (cs.value > best.sol.value + 1e-15) {
        best.p = std::move(cd);
        best.sol = cs;
        step = tt * 2.0;
        improved = true;
        break;
      }
      tt *= 0.5;
    }
    if (!improved) break;
  }
  if (outer == kMaxOuter) best.status = RateStatus::BudgetHit;
  if (best.sol.status == RateStatus::BudgetHit)
    best.status = RateStatus::BudgetHit;
  return best;
}

RateResult pack_result(const ProblemPair& pair, RateMode mode,
                       const InputDist& p, const ParamSolution& sol,
                       RateStatus status) {
  RateResult r;
  r.value = sol.value;
  r.k = pair.k;
  r.s = sol.s;
  if (mode == RateMode::Lm) {
    r.a = sol.a;
    if (r.a.empty())
      r.a.assign(static_cast<std::size_t>(pair.channel.input_size), 0.0);
  }
  r.p = p;
  r.status = status;
  return r;
}

}  // namespace

double rate_objective(const ProblemPair& pair, const InputDist& p, double s,
                      std::span<const double> a) {
  require(p.size() == pair.channel.input_size, MM_ERR_DIMENSION_MISMATCH,
          "rate objective: input distribution size does not match");
  require(std::isfinite(s) && s > 0.0, MM_ERR_INVALID_ARGUMENT,
          "rate objective: s must be positive");
  require(a.empty() || a.size() == static_cast<std::size_t>(
                                       pair.channel.input_size),
          MM_ERR_DIMENSION_MISMATCH,
          "rate objective: offset count does not match the input alphabet");
  for (double v : a)
    require(std::isfinite(v), MM_ERR_INVALID_ARGUMENT,
            "rate objective: offsets must be finite");
  return objective_checked(pair, p, s, a);
}

RateResult optimize_params(const ProblemPair& pair, const InputDist& p,
                           RateMode mode) {
  require(p.size() == pair.channel.input_size, MM_ERR_DIMENSION_MISMATCH,
          "optimize params: input distribution size does not match");
  const ParamSolution sol = solve_inner(pair, p, mode, nullptr);
  return pack_result(pair, mode, p, sol, sol.status);
}

RateResult optimize_input(const ProblemPair& pair, RateMode mode, int restarts,
                          std::uint64_t seed, const InputDist* warm) {
  require(restarts >= 0, MM_ERR_INVALID_ARGUMENT,
          "optimize input: restarts must be nonnegative");
  const int in = pair.channel.input_size;

  std::vector<InputDist> starts;
  if (warm) {
    require(warm->size() == in, MM_ERR_DIMENSION_MISMATCH,
            "optimize input: warm start size does not match");
    starts.push_back(*warm);
  }
  starts.push_back(InputDist::uniform(in));
  for (int v = 0; v < in; ++v) {
    std::vector<double> p(static_cast<std::size_t>(in), 0.1 / in);
    p[static_cast<std::size_t>(v)] += 0.9;
    starts.push_back(InputDist{std::move(p)});
  }
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> p(static_cast<std::size_t>(in));
    double sum = 0.0;
    for (double& v : p) {
      v = -std::log(std::max(uniform01(rng), 1e-300));
      sum += v;
    }
    for (double& v : p) v /= sum;
    starts.push_back(InputDist{std::move(p)});
  }

  InputSolution best;
  bool have = false;
  for (const InputDist& s0 : starts) {
    InputSolution cur = ascend_input(pair, s0, mode, nullptr);
    if (!have || cur.sol.value > best.sol.value) {
      best = std::move(cur);
      have = true;
    }
  }
  return pack_result(pair, mode, best.p, best.sol, best.status);
}

RateResult matched_capacity(const ChannelSpec& channel) {
  const int in = channel.input_size;
  const int out = channel.output_size;
  std::vector<double> p(static_cast<std::size_t>(in), 1.0 / in);
  std::vector<double> d(static_cast<std::size_t>(in), 0.0);
  double info = 0.0;
  RateStatus status = RateStatus::BudgetHit;

  constexpr int kMaxIter = 100000;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    std::vector<double> p_y(static_cast<std::size_t>(out), 0.0);
    for (int x = 0; x < in; ++x)
      for (int y = 0; y < out; ++y)
        p_y[static_cast<std::size_t>(y)] +=
            p[static_cast<std::size_t>(x)] * channel(x, y);

    double upper = -1e300;
    info = 0.0;
    for (int x = 0; x < in; ++x) {
      double dx = 0.0;
      for (int y = 0; y < out; ++y) {
        const double w = channel(x, y);
        if (w > 0.0) dx += w * std::log(w / p_y[static_cast<std::size_t>(y)]);
      }
      d[static_cast<std::size_t>(x)] = dx;
      info += p[static_cast<std::size_t>(x)] * dx;
      upper = std::max(upper, dx);
    }
    if (upper - info < 1e-10) {
      status = RateStatus::Converged;
      break;
    }

    double norm = 0.0;
    for (int x = 0; x < in; ++x) {
      p[static_cast<std::size_t>(x)] *=
          std::exp(d[static_cast<std::size_t>(x)] - info);
      norm += p[static_cast<std::size_t>(x)];
    }
    for (double& v : p) v /= norm;
  }

  RateResult r;
  r.value = info;
  r.k = 1;
  r.s = 1.0;
  r.p = InputDist{std::move(p)};
  r.status = status;
  return r;
}

GapBound gap_bound(const ProblemPair& pair, const InputDist& p) {
  const DensityTable t = density_table(pair, p);
  const int in = t.input_size;
  const int out = t.output_size;
  std::vector<double> p_y(static_cast<std::size_t>(out), 0.0);
  for (int x = 0; x < in; ++x)
    for (int y = 0; y < out; ++y)
      p_y[static_cast<std::size_t>(y)] += t.joint_prob(x, y);

  double kl = 0.0;
  for (int x = 0; x < in; ++x) {
    for (int y = 0; y < out; ++y) {
      const double j = t.joint_prob(x, y);
      if (j <= 0.0) continue;
      const double info = std::log(pair.channel(x, y)) -
                          std::log(p_y[static_cast<std::size_t>(y)]);
      kl += j * (info - t.value(x, y));
    }
  }

  GapBound g;
  g.kl = kl;
  g.k = pair.k;
  g.eta_upper = kl / pair.k;
  g.p = p;
  return g;
}

BscClosedForm bsc_closed_form(double p, double p_prime) {
  require(std::isfinite(p) && std::isfinite(p_prime), MM_ERR_INVALID_ARGUMENT,
          "bsc closed form: arguments must be finite");
  require(p_prime > 0.0 && p_prime <= p && p <= 0.5, MM_ERR_ORDERING_VIOLATED,
          "bsc closed form: need 0 < p' <= p <= 1/2");
  BscClosedForm r;
  const double h = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
  r.capacity = std::log(2.0) - h;
  if (p == p_prime)
    r.s_star = 1.0;
  else
    r.s_star = std::log((1.0 - p) / p) / std::log((1.0 - p_prime) / p_prime);
  return r;
}

std::vector<RateResult> rate_sweep(const ProblemPair& base,
                                   std::span<const int> ks, RateMode mode,
                                   int restarts, std::uint64_t seed,
                                   const Budget& budget) {
  require(!ks.empty(), MM_ERR_INVALID_ARGUMENT, "rate sweep: no block lengths");
  std::vector<RateResult> out;
  out.reserve(ks.size());
  for (const int k : ks) {
    require(k >= 1, MM_ERR_INVALID_ARGUMENT,
            "rate sweep: block lengths must be >= 1");
    const ProblemPair ext = product_extend(base, k, budget);
    InputDist warm{{}};
    bool have_warm = false;
    int best_div = 0;
    for (const RateResult& prev : out) {
      if (prev.k / base.k >= 1 && k % (prev.k / base.k) == 0 &&
          prev.k / base.k > best_div && prev.k / base.k < k) {
        best_div = prev.k / base.k;
      }
    }
    if (best_div >= 1) {
      for (const RateResult& prev : out) {
        if (prev.k / base.k == best_div) {
          warm = InputDist::power(prev.p, k / best_div);
          have_warm = true;
          break;
        }
      }
    }
    out.push_back(optimize_input(ext, mode, restarts, seed,
                                 have_warm ? &warm : nullptr));
  }
  return out;
}

}  // namespace mismatch
