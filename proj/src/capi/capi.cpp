#include <mismatch/mismatch.h>

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/budget.hpp"
#include "core/channel.hpp"
#include "core/codebook.hpp"
#include "core/decoder.hpp"
#include "core/density.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/rates.hpp"

using namespace mismatch;

struct mm_pair {
  ProblemPair rep;
};
struct mm_dist {
  InputDist rep;
};
struct mm_spectrum {
  SpectrumPmf rep;
};
struct mm_codebook {
  Codebook rep;
};
struct mm_rate_result {
  RateResult rep;
};
struct mm_sandwich {
  std::vector<SandwichRow> rows;
};

namespace {

thread_local std::string g_last_error;

mm_status fail(mm_status code, const char* msg) {
  g_last_error = msg;
  return code;
}

template <class Fn>
mm_status guarded(Fn&& fn) {
  try {
    fn();
    return MM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return e.code();
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MM_ERR_INTERNAL;
  }
}

bool null_arg(const void* p) { return p == nullptr; }

Budget budget_of(std::uint64_t v) { return Budget::overridden(v); }

}  // namespace

extern "C" {

const char* mm_version(void) { return "0.1.0"; }

const char* mm_last_error(void) { return g_last_error.c_str(); }

const char* mm_status_name(mm_status s) {
  switch (s) {
    case MM_OK: return "Ok";
    case MM_ERR_BUDGET_EXCEEDED: return "BudgetExceeded";
    case MM_ERR_PARSE: return "ParseError";
    case MM_ERR_ROW_NOT_STOCHASTIC: return "RowNotStochastic";
    case MM_ERR_METRIC_ZERO_ON_SUPPORT: return "MetricZeroOnSupport";
    case MM_ERR_NEGATIVE_ENTRY: return "NegativeEntry";
    case MM_ERR_NONPOSITIVE_TILT: return "NonPositiveTilt";
    case MM_ERR_DENOMINATOR_ZERO: return "DenominatorZero";
    case MM_ERR_IMPOSSIBLE_PAIR: return "ImpossiblePair";
    case MM_ERR_EMPTY_DISTRIBUTION: return "EmptyDistribution";
    case MM_ERR_ORDERING_VIOLATED: return "OrderingViolated";
    case MM_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case MM_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case MM_ERR_IO: return "IoError";
    case MM_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

/* ---- pairs ---- */

mm_status mm_pair_create(int32_t input_size, int32_t output_size,
                         const double* w, const double* q, const char* name,
                         mm_pair** out) {
  if (null_arg(w) || null_arg(q) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(input_size >= 1 && output_size >= 1, MM_ERR_DIMENSION_MISMATCH,
            "pair: alphabet sizes must be positive");
    const std::size_t cells =
        static_cast<std::size_t>(input_size) * static_cast<std::size_t>(output_size);
    ChannelSpec channel = ChannelSpec::validated(
        input_size, output_size, std::vector<double>(w, w + cells));
    ProblemPair pair = validate_pair(channel, std::vector<double>(q, q + cells),
                                     name ? name : "");
    *out = new mm_pair{std::move(pair)};
  });
}

mm_status mm_pair_load_json(const char* path, mm_pair** out) {
  if (null_arg(path) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new mm_pair{load_problem(path)}; });
}

mm_status mm_pair_product_extend(const mm_pair* base, int32_t k,
                                 uint64_t atom_budget, mm_pair** out) {
  if (null_arg(base) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_pair{product_extend(base->rep, k, budget_of(atom_budget))};
  });
}

mm_status mm_pair_tilt(const mm_pair* base, double alpha, mm_pair** out) {
  if (null_arg(base) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new mm_pair{tilt_pair(base->rep, alpha)}; });
}

mm_status mm_pair_erasures_only(const mm_pair* base, mm_pair** out) {
  if (null_arg(base) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_pair{erasures_only_pair(base->rep.channel, base->rep.name)};
  });
}

void mm_pair_free(mm_pair* p) { delete p; }

mm_status mm_pair_input_size(const mm_pair* p, int32_t* out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = p->rep.channel.input_size;
  return MM_OK;
}

mm_status mm_pair_output_size(const mm_pair* p, int32_t* out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = p->rep.channel.output_size;
  return MM_OK;
}

mm_status mm_pair_block_length(const mm_pair* p, int32_t* out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = p->rep.k;
  return MM_OK;
}

mm_status mm_pair_metric_floor(const mm_pair* p, double* out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = p->rep.metric.q_star;
  return MM_OK;
}

mm_status mm_pair_metric_scale(const mm_pair* p, double* out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = p->rep.metric.scale;
  return MM_OK;
}

mm_status mm_pair_channel_entry(const mm_pair* p, int32_t x, int32_t y,
                                double* out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  if (x < 0 || x >= p->rep.channel.input_size || y < 0 ||
      y >= p->rep.channel.output_size)
    return fail(MM_ERR_INVALID_ARGUMENT, "entry index out of range");
  *out = p->rep.channel(x, y);
  return MM_OK;
}

mm_status mm_pair_metric_entry(const mm_pair* p, int32_t x, int32_t y,
                               double* out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  if (x < 0 || x >= p->rep.metric.input_size || y < 0 ||
      y >= p->rep.metric.output_size)
    return fail(MM_ERR_INVALID_ARGUMENT, "entry index out of range");
  *out = p->rep.metric(x, y);
  return MM_OK;
}

/* ---- distributions ---- */

mm_status mm_dist_create(const double* p, int32_t size, mm_dist** out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(size >= 1, MM_ERR_EMPTY_DISTRIBUTION,
            "input distribution: size must be positive");
    *out = new mm_dist{
        InputDist::validated(std::vector<double>(p, p + size))};
  });
}

mm_status mm_dist_uniform(int32_t size, mm_dist** out) {
  if (null_arg(out)) return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new mm_dist{InputDist::uniform(size)}; });
}

mm_status mm_dist_product(const mm_dist* a, const mm_dist* b, mm_dist** out) {
  if (null_arg(a) || null_arg(b) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(
      [&] { *out = new mm_dist{InputDist::product(a->rep, b->rep)}; });
}

void mm_dist_free(mm_dist* d) { delete d; }

mm_status mm_dist_size(const mm_dist* d, int32_t* out) {
  if (null_arg(d) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = d->rep.size();
  return MM_OK;
}

mm_status mm_dist_prob(const mm_dist* d, int32_t i, double* out) {
  if (null_arg(d) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  if (i < 0 || i >= d->rep.size())
    return fail(MM_ERR_INVALID_ARGUMENT, "index out of range");
  *out = d->rep[i];
  return MM_OK;
}

/* ---- densities and spectra ---- */

mm_status mm_density_value(const mm_pair* p, const mm_dist* d, int32_t x,
                           int32_t y, double* out) {
  if (null_arg(p) || null_arg(d) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const DensityTable t = density_table(p->rep, d->rep);
    require(x >= 0 && x < t.input_size && y >= 0 && y < t.output_size,
            MM_ERR_INVALID_ARGUMENT, "entry index out of range");
    require(t.is_used(x, y), MM_ERR_IMPOSSIBLE_PAIR,
            "density undefined at this entry");
    *out = t.value(x, y);
  });
}

mm_status mm_sequence_density(const mm_pair* p, const mm_dist* d,
                              const int32_t* xs, const int32_t* ys,
                              int32_t len, double* out) {
  if (null_arg(p) || null_arg(d) || null_arg(out) ||
      (len > 0 && (null_arg(xs) || null_arg(ys))))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(len >= 0, MM_ERR_INVALID_ARGUMENT, "negative length");
    std::vector<int> xv(xs, xs + len), yv(ys, ys + len);
    *out = sequence_density(p->rep, d->rep, xv, yv);
  });
}

mm_status mm_spectrum_exact(const mm_pair* p, const mm_dist* d, int32_t n,
                            uint64_t atom_budget, mm_spectrum** out) {
  if (null_arg(p) || null_arg(d) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_spectrum{
        exact_spectrum(p->rep, d->rep, n, budget_of(atom_budget))};
  });
}

mm_status mm_spectrum_codebook(const mm_codebook* cb, const mm_pair* p,
                               uint64_t enumeration_budget, mm_spectrum** out) {
  if (null_arg(cb) || null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_spectrum{
        codebook_spectrum(cb->rep, p->rep, budget_of(enumeration_budget))};
  });
}

void mm_spectrum_free(mm_spectrum* s) { delete s; }

mm_status mm_spectrum_size(const mm_spectrum* s, int64_t* out) {
  if (null_arg(s) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = static_cast<int64_t>(s->rep.atoms.size());
  return MM_OK;
}

mm_status mm_spectrum_atom(const mm_spectrum* s, int64_t i, double* value,
                           double* prob) {
  if (null_arg(s) || null_arg(value) || null_arg(prob))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  if (i < 0 || i >= static_cast<int64_t>(s->rep.atoms.size()))
    return fail(MM_ERR_INVALID_ARGUMENT, "index out of range");
  *value = s->rep.atoms[static_cast<std::size_t>(i)].value;
  *prob = s->rep.atoms[static_cast<std::size_t>(i)].prob;
  return MM_OK;
}

mm_status mm_spectrum_block_length(const mm_spectrum* s, int32_t* out) {
  if (null_arg(s) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = s->rep.n;
  return MM_OK;
}

mm_status mm_spectrum_tail_leq(const mm_spectrum* s, double alpha,
                               double* out) {
  if (null_arg(s) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = s->rep.tail_leq(alpha); });
}

mm_status mm_spectrum_quantile(const mm_spectrum* s, double eps, double* out) {
  if (null_arg(s) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = s->rep.quantile(eps); });
}

mm_status mm_spectrum_mean(const mm_spectrum* s, double* out) {
  if (null_arg(s) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = s->rep.mean();
  return MM_OK;
}

mm_status mm_spectrum_second_moment(const mm_spectrum* s, double* out) {
  if (null_arg(s) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = s->rep.second_moment();
  return MM_OK;
}

mm_status mm_overshoot_check(const mm_pair* p, const mm_dist* d, int32_t n,
                             double eps, uint64_t atom_budget, double* lhs,
                             double* rhs, int32_t* holds) {
  if (null_arg(p) || null_arg(d) || null_arg(lhs) || null_arg(rhs) ||
      null_arg(holds))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const OvershootCheck c =
        overshoot_check(p->rep, d->rep, n, eps, budget_of(atom_budget));
    *lhs = c.lhs;
    *rhs = c.rhs;
    *holds = c.holds ? 1 : 0;
  });
}

mm_status mm_ui_bound_check(const mm_pair* p, const mm_dist* d, int32_t n,
                            uint64_t atom_budget, double* moment,
                            double* bound, int32_t* holds) {
  if (null_arg(p) || null_arg(d) || null_arg(moment) || null_arg(bound) ||
      null_arg(holds))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const UiBoundCheck c =
        ui_bound_check(p->rep, d->rep, n, budget_of(atom_budget));
    *moment = c.moment;
    *bound = c.bound;
    *holds = c.holds ? 1 : 0;
  });
}

/* ---- rates ---- */

namespace {

RateMode to_mode(mm_rate_mode mode) {
  switch (mode) {
    case MM_RATE_GMI: return RateMode::Gmi;
    case MM_RATE_LM: return RateMode::Lm;
    case MM_RATE_S1: return RateMode::S1;
  }
  raise(MM_ERR_INVALID_ARGUMENT, "unknown rate mode");
}

}  // namespace

mm_status mm_rate_objective(const mm_pair* p, const mm_dist* d, double s,
                            const double* a, double* out) {
  if (null_arg(p) || null_arg(d) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::span<const double> av;
    std::vector<double> buf;
    if (a) {
      buf.assign(a, a + p->rep.channel.input_size);
      av = buf;
    }
    *out = rate_objective(p->rep, d->rep, s, av);
  });
}

mm_status mm_optimize_params(const mm_pair* p, const mm_dist* d,
                             mm_rate_mode mode, mm_rate_result** out) {
  if (null_arg(p) || null_arg(d) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_rate_result{optimize_params(p->rep, d->rep, to_mode(mode))};
  });
}

mm_status mm_optimize_input(const mm_pair* p, mm_rate_mode mode,
                            int32_t restarts, uint64_t seed,
                            const mm_dist* warm, mm_rate_result** out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_rate_result{optimize_input(
        p->rep, to_mode(mode), restarts, seed, warm ? &warm->rep : nullptr)};
  });
}

mm_status mm_matched_capacity(const mm_pair* p, mm_rate_result** out) {
  if (null_arg(p) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(
      [&] { *out = new mm_rate_result{matched_capacity(p->rep.channel)}; });
}

void mm_rate_result_free(mm_rate_result* r) { delete r; }

mm_status mm_rate_value(const mm_rate_result* r, double* out) {
  if (null_arg(r) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = r->rep.value;
  return MM_OK;
}

mm_status mm_rate_block_length(const mm_rate_result* r, int32_t* out) {
  if (null_arg(r) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = r->rep.k;
  return MM_OK;
}

mm_status mm_rate_param_s(const mm_rate_result* r, double* out) {
  if (null_arg(r) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = r->rep.s;
  return MM_OK;
}

mm_status mm_rate_offset_count(const mm_rate_result* r, int32_t* out) {
  if (null_arg(r) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = static_cast<int32_t>(r->rep.a.size());
  return MM_OK;
}

mm_status mm_rate_offset(const mm_rate_result* r, int32_t i, double* out) {
  if (null_arg(r) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  if (i < 0 || i >= static_cast<int32_t>(r->rep.a.size()))
    return fail(MM_ERR_INVALID_ARGUMENT, "index out of range");
  *out = r->rep.a[static_cast<std::size_t>(i)];
  return MM_OK;
}

mm_status mm_rate_input(const mm_rate_result* r, mm_dist** out) {
  if (null_arg(r) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new mm_dist{r->rep.p}; });
}

mm_status mm_rate_status_kind(const mm_rate_result* r, int32_t* out) {
  if (null_arg(r) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  switch (r->rep.status) {
    case RateStatus::Exact: *out = 0; break;
    case RateStatus::Converged: *out = 1; break;
    case RateStatus::BudgetHit: *out = 2; break;
  }
  return MM_OK;
}

mm_status mm_gap_bound(const mm_pair* p, const mm_dist* d, double* eta_upper,
                       double* kl) {
  if (null_arg(p) || null_arg(d) || null_arg(eta_upper) || null_arg(kl))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const GapBound g = gap_bound(p->rep, d->rep);
    *eta_upper = g.eta_upper;
    *kl = g.kl;
  });
}

mm_status mm_bsc_closed_form(double p, double p_prime, double* capacity,
                             double* s_star) {
  if (null_arg(capacity) || null_arg(s_star))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const BscClosedForm r = bsc_closed_form(p, p_prime);
    *capacity = r.capacity;
    *s_star = r.s_star;
  });
}

/* ---- codebooks and decoding ---- */

mm_status mm_codebook_gen(mm_codebook_kind kind, const mm_dist* d, int32_t n,
                          uint64_t size, uint64_t seed, mm_codebook** out) {
  if (null_arg(d) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const CodebookKind ck = kind == MM_CODEBOOK_IID
                                ? CodebookKind::Iid
                                : CodebookKind::ConstantComposition;
    *out = new mm_codebook{gen_codebook(ck, d->rep, n, size, seed)};
  });
}

mm_status mm_codebook_load_json(const char* path, mm_codebook** out) {
  if (null_arg(path) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new mm_codebook{load_codebook(path)}; });
}

mm_status mm_codebook_save_json(const mm_codebook* cb, const char* path) {
  if (null_arg(cb) || null_arg(path))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { save_codebook(cb->rep, path); });
}

void mm_codebook_free(mm_codebook* cb) { delete cb; }

mm_status mm_codebook_block_length(const mm_codebook* cb, int32_t* out) {
  if (null_arg(cb) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = cb->rep.n;
  return MM_OK;
}

mm_status mm_codebook_size(const mm_codebook* cb, uint64_t* out) {
  if (null_arg(cb) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = cb->rep.size;
  return MM_OK;
}

mm_status mm_codebook_symbol(const mm_codebook* cb, uint64_t m, int32_t i,
                             int32_t* out) {
  if (null_arg(cb) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  if (m >= cb->rep.size || i < 0 || i >= cb->rep.n)
    return fail(MM_ERR_INVALID_ARGUMENT, "index out of range");
  *out = cb->rep.symbol(m, i);
  return MM_OK;
}

namespace {

DecoderRule to_rule(mm_decoder_rule rule) {
  return rule == MM_DECODER_STOCHASTIC ? DecoderRule::Stochastic
                                       : DecoderRule::MaxMetric;
}

}  // namespace

mm_status mm_exact_error(const mm_codebook* cb, const mm_pair* p,
                         mm_decoder_rule rule, uint64_t enumeration_budget,
                         double* pe) {
  if (null_arg(cb) || null_arg(p) || null_arg(pe))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *pe = exact_error(cb->rep, p->rep, to_rule(rule),
                      budget_of(enumeration_budget))
              .pe;
  });
}

mm_status mm_mc_error(const mm_codebook* cb, const mm_pair* p,
                      mm_decoder_rule rule, uint64_t trials, uint64_t seed,
                      double* pe, double* std_err) {
  if (null_arg(cb) || null_arg(p) || null_arg(pe) || null_arg(std_err))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const ErrorEstimate e = mc_error(cb->rep, p->rep, to_rule(rule), trials,
                                     seed);
    *pe = e.pe;
    *std_err = e.std_err;
  });
}

mm_status mm_pairwise_phi(const mm_pair* p, const mm_dist* d,
                          const int32_t* xs, const int32_t* ys, int32_t len,
                          double* out) {
  if (null_arg(p) || null_arg(d) || null_arg(xs) || null_arg(ys) ||
      null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(len >= 1, MM_ERR_INVALID_ARGUMENT, "empty sequences");
    std::vector<int> xv(xs, xs + len), yv(ys, ys + len);
    *out = pairwise_phi(p->rep, d->rep, xv, yv);
  });
}

mm_status mm_pc_identity_check(const mm_codebook* cb, const mm_pair* p,
                               uint64_t enumeration_budget, double* lhs,
                               double* rhs, double* abs_diff) {
  if (null_arg(cb) || null_arg(p) || null_arg(lhs) || null_arg(rhs) ||
      null_arg(abs_diff))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const PcIdentity r =
        pc_identity_check(cb->rep, p->rep, budget_of(enumeration_budget));
    *lhs = r.lhs;
    *rhs = r.rhs;
    *abs_diff = r.abs_diff;
  });
}

/* ---- bounds ---- */

mm_status mm_feinstein_bound(const mm_pair* p, const mm_dist* d, int32_t n,
                             double M, double gamma, double s,
                             uint64_t atom_budget, double* value,
                             int32_t* vacuous) {
  if (null_arg(p) || null_arg(d) || null_arg(value) || null_arg(vacuous))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const BoundReport r =
        feinstein_bound(p->rep, d->rep, n, M, gamma, s, budget_of(atom_budget));
    *value = r.value;
    *vacuous = r.vacuous ? 1 : 0;
  });
}

mm_status mm_rcu_s_bound(const mm_pair* p, const mm_dist* d, int32_t n,
                         double M, double s, uint64_t atom_budget,
                         double* value, int32_t* vacuous) {
  if (null_arg(p) || null_arg(d) || null_arg(value) || null_arg(vacuous))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const BoundReport r =
        rcu_s_bound(p->rep, d->rep, n, M, s, budget_of(atom_budget));
    *value = r.value;
    *vacuous = r.vacuous ? 1 : 0;
  });
}

mm_status mm_verdu_han_bound(const mm_codebook* cb, const mm_pair* p,
                             double gamma, uint64_t enumeration_budget,
                             double* value, int32_t* vacuous) {
  if (null_arg(cb) || null_arg(p) || null_arg(value) || null_arg(vacuous))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const BoundReport r =
        verdu_han_bound(cb->rep, p->rep, gamma, budget_of(enumeration_budget));
    *value = r.value;
    *vacuous = r.vacuous ? 1 : 0;
  });
}

mm_status mm_gamma_grid(int32_t n, int32_t points, double* out) {
  if (null_arg(out)) return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::vector<double> g = gamma_grid(n, points);
    std::copy(g.begin(), g.end(), out);
  });
}

mm_status mm_sandwich_run(const mm_pair* p, const mm_dist* d, int32_t n,
                          uint64_t M, const uint64_t* seeds, int32_t n_seeds,
                          const double* gammas, int32_t n_gammas,
                          const double* ss, int32_t n_ss, uint64_t mc_trials,
                          uint64_t enumeration_budget, mm_sandwich** out) {
  if (null_arg(p) || null_arg(d) || null_arg(seeds) || null_arg(gammas) ||
      null_arg(ss) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(n_seeds >= 1 && n_gammas >= 1 && n_ss >= 1,
            MM_ERR_INVALID_ARGUMENT, "sandwich: empty grid");
    *out = new mm_sandwich{sandwich_report(
        p->rep, d->rep, n, M,
        std::span<const std::uint64_t>(seeds, static_cast<std::size_t>(n_seeds)),
        std::span<const double>(gammas, static_cast<std::size_t>(n_gammas)),
        std::span<const double>(ss, static_cast<std::size_t>(n_ss)), mc_trials,
        budget_of(enumeration_budget))};
  });
}

void mm_sandwich_free(mm_sandwich* sw) { delete sw; }

mm_status mm_sandwich_rows(const mm_sandwich* sw, int64_t* out) {
  if (null_arg(sw) || null_arg(out))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = static_cast<int64_t>(sw->rows.size());
  return MM_OK;
}

mm_status mm_sandwich_row(const mm_sandwich* sw, int64_t i, double* cols13) {
  if (null_arg(sw) || null_arg(cols13))
    return fail(MM_ERR_INVALID_ARGUMENT, "null argument");
  if (i < 0 || i >= static_cast<int64_t>(sw->rows.size()))
    return fail(MM_ERR_INVALID_ARGUMENT, "index out of range");
  const SandwichRow& r = sw->rows[static_cast<std::size_t>(i)];
  cols13[0] = r.n;
  cols13[1] = static_cast<double>(r.M);
  cols13[2] = r.gamma;
  cols13[3] = r.s;
  cols13[4] = static_cast<double>(r.seed);
  cols13[5] = r.pe_exact;
  cols13[6] = r.pe_mc;
  cols13[7] = r.std_err;
  cols13[8] = r.feinstein;
  cols13[9] = r.rcu;
  cols13[10] = r.verdu_han;
  cols13[11] = r.verdict_a ? 1.0 : 0.0;
  cols13[12] = r.verdict_b ? 1.0 : 0.0;
  return MM_OK;
}

}  // extern "C"
