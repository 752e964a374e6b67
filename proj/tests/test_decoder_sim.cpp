#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/channel.hpp"
#include "core/codebook.hpp"
#include "core/decoder.hpp"
#include "test_util.hpp"

using namespace mismatch;

namespace {

ProblemPair mismatched_bsc() {
  return validate_pair(ChannelSpec::bsc(0.1), testutil::bsc(0.05));
}

ProblemPair matched_bsc() {
  return validate_pair(ChannelSpec::bsc(0.1), testutil::bsc(0.1));
}

Codebook full_binary() {
  Codebook cb;
  cb.n = 1;
  cb.size = 2;
  cb.words = {0, 1};
  return cb;
}

}  // namespace

TEST_CASE("composition counts use largest remainders with low-index ties") {
  CHECK(composition_counts(InputDist::validated({0.3, 0.7}), 10) ==
        std::vector<int>{3, 7});
  CHECK(composition_counts(InputDist::validated({0.5, 0.5}), 3) ==
        std::vector<int>{2, 1});
  CHECK(composition_counts(
            InputDist::validated({1.0 / 3, 1.0 / 3, 1.0 / 3}), 4) ==
        std::vector<int>{2, 1, 1});
  CHECK(composition_counts(InputDist::validated({0.25, 0.75}), 8) ==
        std::vector<int>{2, 6});
}

TEST_CASE("codebook generation is seed-deterministic") {
  const InputDist u = InputDist::uniform(2);
  const Codebook a = gen_codebook(CodebookKind::Iid, u, 8, 4, 123);
  const Codebook b = gen_codebook(CodebookKind::Iid, u, 8, 4, 123);
  CHECK(a.words == b.words);

  bool any_differ = false;
  for (std::uint64_t s = 124; s < 130; ++s)
    any_differ |= gen_codebook(CodebookKind::Iid, u, 8, 4, s).words != a.words;
  CHECK(any_differ);
}

TEST_CASE("constant-composition codewords share one type") {
  const InputDist p = InputDist::validated({0.3, 0.7});
  const Codebook cb = gen_codebook(CodebookKind::ConstantComposition, p, 10,
                                   20, 5);
  for (std::uint64_t m = 0; m < cb.size; ++m) {
    int zeros = 0;
    for (int i = 0; i < cb.n; ++i) zeros += cb.symbol(m, i) == 0 ? 1 : 0;
    CHECK(zeros == 3);
  }
}

TEST_CASE("iid sampling hits the target frequencies") {
  const InputDist u = InputDist::uniform(2);
  const Codebook cb = gen_codebook(CodebookKind::Iid, u, 4, 10000, 99);
  double ones = 0.0;
  for (std::uint64_t m = 0; m < cb.size; ++m)
    for (int i = 0; i < cb.n; ++i) ones += cb.symbol(m, i);
  const double freq = ones / (4.0 * 10000.0);
  CHECK(std::abs(freq - 0.5) <= 3.0 * std::sqrt(0.25 / 40000.0));
}

TEST_CASE("exact error on the full binary codebook") {
  const Codebook cb = full_binary();
  const ProblemPair m = matched_bsc();

  const ErrorEstimate st = exact_error(cb, m, DecoderRule::Stochastic);
  CHECK(st.exact);
  CHECK(st.pe == doctest::Approx(0.18).epsilon(1e-12));

  const ErrorEstimate mx = exact_error(cb, m, DecoderRule::MaxMetric);
  CHECK(mx.pe == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("single-message codebooks never err") {
  Codebook cb;
  cb.n = 2;
  cb.size = 1;
  cb.words = {0, 1};
  for (const DecoderRule rule :
       {DecoderRule::Stochastic, DecoderRule::MaxMetric}) {
    CHECK(exact_error(cb, mismatched_bsc(), rule).pe == doctest::Approx(0.0));
    CHECK(mc_error(cb, mismatched_bsc(), rule, 500, 3).pe ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("duplicate codewords split the decision") {
  Codebook cb;
  cb.n = 1;
  cb.size = 2;
  cb.words = {0, 0};
  for (const DecoderRule rule :
       {DecoderRule::Stochastic, DecoderRule::MaxMetric})
    CHECK(exact_error(cb, matched_bsc(), rule).pe ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact error is invariant to metric rescaling") {
  Codebook cb;
  cb.n = 3;
  cb.size = 4;
  cb.words = {0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1};
  const ChannelSpec ch = ChannelSpec::bsc(0.1);
  for (const double c : {0.5, 2.0}) {
    const ProblemPair a = validate_pair(ch, {0.95, 0.05, 0.05, 0.95});
    const ProblemPair b = validate_pair(
        ch, {0.95 * c, 0.05 * c, 0.05 * c, 0.95 * c});
    for (const DecoderRule rule :
         {DecoderRule::Stochastic, DecoderRule::MaxMetric})
      CHECK(exact_error(cb, a, rule).pe == exact_error(cb, b, rule).pe);
  }
}

TEST_CASE("monte carlo tracks the exact error") {
  const InputDist u = InputDist::uniform(2);
  const ProblemPair pair = mismatched_bsc();
  const Codebook cb = gen_codebook(CodebookKind::Iid, u, 3, 4, 17);
  for (const DecoderRule rule :
       {DecoderRule::Stochastic, DecoderRule::MaxMetric}) {
    const double exact = exact_error(cb, pair, rule).pe;
    const ErrorEstimate mc = mc_error(cb, pair, rule, 20000, 7);
    CHECK(mc.std_err > 0.0);
    CHECK(std::abs(mc.pe - exact) <= 4.0 * mc.std_err);
  }

  // Repeatability and the coverage property over many seeds.
  const ErrorEstimate m1 = mc_error(cb, pair, DecoderRule::Stochastic, 5000, 21);
  const ErrorEstimate m2 = mc_error(cb, pair, DecoderRule::Stochastic, 5000, 21);
  CHECK(m1.pe == m2.pe);

  const double exact = exact_error(cb, pair, DecoderRule::Stochastic).pe;
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ErrorEstimate mc =
        mc_error(cb, pair, DecoderRule::Stochastic, 2000, seed);
    const double slack = 4.0 * std::max(mc.std_err, 1e-12);
    covered += std::abs(mc.pe - exact) <= slack ? 1 : 0;
  }
  CHECK(covered >= 198);
}

TEST_CASE("monte carlo matches exact for tilted metrics") {
  const InputDist u = InputDist::uniform(2);
  const Codebook cb = gen_codebook(CodebookKind::Iid, u, 3, 4, 29);
  for (const double alpha : {1.0, 2.0}) {
    const ProblemPair t = tilt_pair(mismatched_bsc(), alpha);
    const double exact = exact_error(cb, t, DecoderRule::Stochastic).pe;
    const ErrorEstimate mc = mc_error(cb, t, DecoderRule::Stochastic, 20000, 5);
    CHECK(std::abs(mc.pe - exact) <= 4.0 * mc.std_err);
  }
}

TEST_CASE("pairwise competitor probability") {
  const InputDist u = InputDist::uniform(2);
  const ProblemPair pair =
      validate_pair(ChannelSpec::bsc(0.1), testutil::bsc(0.05));

  const std::vector<int> x0{0}, y0{0}, x1{1};
  const double phi = pairwise_phi(pair, u, x0, y0);
  CHECK(phi == doctest::Approx(0.5).epsilon(1e-12));
  // Markov comparison at the same point.
  CHECK(phi <= 0.5 / 0.95 + 1e-12);
  CHECK(0.5 / 0.95 == doctest::Approx(0.526316).epsilon(1e-6));

  // The row minimum ties with or loses to every competitor.
  CHECK(pairwise_phi(pair, u, x1, y0) == doctest::Approx(1.0));

  // Metric zero at the queried point: every competitor qualifies.
  const ChannelSpec z = ChannelSpec::validated(2, 2, {1.0, 0.0, 0.3, 0.7});
  const ProblemPair zp = validate_pair(z, {1.0, 0.0, 0.5, 1.0});
  const std::vector<int> y1{1};
  CHECK(pairwise_phi(zp, u, x0, y1) == doctest::Approx(1.0));
}

TEST_CASE("pairwise probability is dominated by the density exponent") {
  for (std::uint64_t seed = 200; seed < 212; ++seed) {
    const testutil::RawPair raw = testutil::random_pair(seed, 3);
    const ProblemPair pair = validate_pair(
        ChannelSpec::validated(raw.input_size, raw.output_size, raw.w), raw.q);
    const InputDist p = InputDist::validated(raw.p);
    const int in = pair.channel.input_size;
    const int out = pair.channel.output_size;
    for (int n = 1; n <= 3; ++n) {
      std::int64_t in_n = 1, out_n = 1;
      for (int i = 0; i < n; ++i) {
        in_n *= in;
        out_n *= out;
      }
      for (std::int64_t xi = 0; xi < in_n; ++xi) {
        for (std::int64_t yi = 0; yi < out_n; ++yi) {
          std::vector<int> xs(static_cast<std::size_t>(n)),
              ys(static_cast<std::size_t>(n));
          double qprod = 1.0;
          for (int i = 0; i < n; ++i) {
            xs[static_cast<std::size_t>(i)] = tuple_at(xi, in, n, i);
            ys[static_cast<std::size_t>(i)] = tuple_at(yi, out, n, i);
            qprod *= pair.metric(xs[static_cast<std::size_t>(i)],
                                 ys[static_cast<std::size_t>(i)]);
          }
          if (qprod <= 0.0) continue;
          double denomprod = 1.0;
          bool reachable = true;
          for (int i = 0; i < n; ++i) {
            double d = 0.0;
            for (int x = 0; x < in; ++x)
              d += p[x] * pair.metric(x, ys[static_cast<std::size_t>(i)]);
            if (d <= 0.0) {
              reachable = false;
              break;
            }
            denomprod *= d;
          }
          if (!reachable) continue;
          const double phi = pairwise_phi(pair, p, xs, ys);
          CHECK(phi <= denomprod / qprod + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("stochastic posterior normalizes and matches hand values") {
  const Codebook cb = full_binary();
  const ProblemPair m = matched_bsc();
  const std::vector<int> y0{0};
  const std::vector<double> post = stochastic_posterior(cb, m, y0);
  REQUIRE(post.size() == 2);
  CHECK(post[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(post[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(post[0] + post[1] == doctest::Approx(1.0).epsilon(1e-12));

  // All-zero metric column for the received sequence.
  const ChannelSpec z = ChannelSpec::validated(2, 2, {1.0, 0.0, 0.3, 0.7});
  const ProblemPair zp = validate_pair(z, {1.0, 0.0, 0.5, 1.0});
  Codebook one;
  one.n = 1;
  one.size = 1;
  one.words = {0};
  const std::vector<int> y1{1};
  try {
    stochastic_posterior(one, zp, y1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == MM_ERR_DENOMINATOR_ZERO);
  }
}

TEST_CASE("codebook spectrum is a complete law") {
  const InputDist u = InputDist::uniform(2);
  const Codebook cb = gen_codebook(CodebookKind::Iid, u, 3, 4, 31);
  const SpectrumPmf s = codebook_spectrum(cb, mismatched_bsc());
  CHECK(s.law == SpectrumLaw::Codebook);
  CHECK(s.n == 3);
  CHECK(s.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("correct-decoding identity on hand examples") {
  const PcIdentity two = pc_identity_check(full_binary(), matched_bsc());
  CHECK(two.lhs == doctest::Approx(0.82).epsilon(1e-12));
  CHECK(two.rhs == doctest::Approx(0.82).epsilon(1e-12));
  CHECK(two.abs_diff < 1e-12);

  Codebook single;
  single.n = 1;
  single.size = 1;
  single.words = {0};
  const PcIdentity one = pc_identity_check(single, matched_bsc());
  CHECK(one.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.rhs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correct-decoding identity on a random corpus") {
  std::mt19937_64 rng(4242);
  for (int c = 0; c < 100; ++c) {
    const testutil::RawPair raw = testutil::random_pair(300 + c, 2, c % 2 == 0);
    const ProblemPair pair = validate_pair(
        ChannelSpec::validated(raw.input_size, raw.output_size, raw.w), raw.q);
    const InputDist p = InputDist::validated(raw.p);
    const int n = 1 + static_cast<int>(rng() % 4);
    const std::uint64_t M = 1 + rng() % 8;
    const Codebook cb = gen_codebook(CodebookKind::Iid, p, n, M, rng());
    const PcIdentity id = pc_identity_check(cb, pair);
    CHECK(id.abs_diff < 1e-12);
  }
}

TEST_CASE("enumeration budget guards the exact paths") {
  const InputDist u = InputDist::uniform(2);
  const Codebook cb = gen_codebook(CodebookKind::Iid, u, 30, 4, 3);
  try {
    exact_error(cb, mismatched_bsc(), DecoderRule::Stochastic);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == MM_ERR_BUDGET_EXCEEDED);
  }
  try {
    codebook_spectrum(cb, mismatched_bsc());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == MM_ERR_BUDGET_EXCEEDED);
  }
}
