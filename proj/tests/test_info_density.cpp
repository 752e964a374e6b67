#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/channel.hpp"
#include "core/density.hpp"
#include "test_util.hpp"

using namespace mismatch;

namespace {

ProblemPair mismatched_bsc() {
  return validate_pair(ChannelSpec::bsc(0.1), testutil::bsc(0.05));
}

ProblemPair matched_bsc() {
  return validate_pair(ChannelSpec::bsc(0.1), testutil::bsc(0.1));
}

// Brute-force law of Z_n: enumerate every (xs, ys) tuple and accumulate
// P(xs) W(ys|xs) at value (1/n) sum of table entries.
struct BruteLaw {
  std::vector<double> values;
  std::vector<double> probs;

  double tail_leq(double alpha) const {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] <= alpha) total += probs[i];
    return total;
  }
  double moment(int k) const {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      total += probs[i] * std::pow(values[i], k);
    return total;
  }
};

BruteLaw brute_spectrum(const ProblemPair& pair, const InputDist& p, int n) {
  const DensityTable table = density_table(pair, p);
  const int in = pair.channel.input_size;
  const int out = pair.channel.output_size;
  std::int64_t in_n = 1, out_n = 1;
  for (int i = 0; i < n; ++i) {
    in_n *= in;
    out_n *= out;
  }
  BruteLaw law;
  for (std::int64_t xs = 0; xs < in_n; ++xs) {
    for (std::int64_t ys = 0; ys < out_n; ++ys) {
      double prob = 1.0, value = 0.0;
      for (int i = 0; i < n; ++i) {
        const int x = tuple_at(xs, in, n, i);
        const int y = tuple_at(ys, out, n, i);
        prob *= p[x] * pair.channel(x, y);
        if (prob == 0.0) break;
        value += table.value(x, y);
      }
      if (prob == 0.0) continue;
      law.values.push_back(value / n);
      law.probs.push_back(prob);
    }
  }
  return law;
}

}  // namespace

TEST_CASE("density table reproduces the per-letter values") {
  const InputDist u = InputDist::uniform(2);

  const DensityTable mm = density_table(mismatched_bsc(), u);
  CHECK(mm.value(0, 0) == doctest::Approx(std::log(0.95 / 0.5)).epsilon(1e-12));
  CHECK(mm.value(0, 0) == doctest::Approx(0.641854).epsilon(1e-6));
  CHECK(mm.value(0, 1) == doctest::Approx(std::log(0.05 / 0.5)).epsilon(1e-12));

  const DensityTable m = density_table(matched_bsc(), u);
  CHECK(m.value(0, 0) == doctest::Approx(std::log(1.8)).epsilon(1e-12));
  CHECK(m.value(0, 0) == doctest::Approx(0.587787).epsilon(1e-6));
  CHECK(m.value(0, 1) == doctest::Approx(std::log(0.2)).epsilon(1e-12));
  CHECK(m.value(0, 1) == doctest::Approx(-1.609438).epsilon(1e-6));

  // Induced joint sums to one.
  double mass = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) mass += m.joint_prob(x, y);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  // All-ones metric: every density value is zero.
  const ProblemPair ones =
      validate_pair(ChannelSpec::bsc(0.1), {1.0, 1.0, 1.0, 1.0});
  const DensityTable t = density_table(ones, u);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(t.value(x, y) == doctest::Approx(0.0));
}

TEST_CASE("matched density equals the classical information density") {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const testutil::RawPair raw = testutil::random_pair(seed, 3, false);
    const ChannelSpec ch =
        ChannelSpec::validated(raw.input_size, raw.output_size, raw.w);
    const ProblemPair matched = validate_pair(ch, raw.w);
    const InputDist p = InputDist::validated(raw.p);
    const DensityTable table = density_table(matched, p);
    for (int y = 0; y < ch.output_size; ++y) {
      double py = 0.0;
      for (int x = 0; x < ch.input_size; ++x) py += p[x] * ch(x, y);
      for (int x = 0; x < ch.input_size; ++x) {
        if (ch(x, y) <= 0.0 || py <= 0.0) continue;
        CHECK(table.value(x, y) ==
              doctest::Approx(std::log(ch(x, y) / py)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("sequence density sums table entries") {
  const InputDist u = InputDist::uniform(2);
  const ProblemPair m = matched_bsc();

  const std::vector<int> xs{0, 0}, ys{0, 0};
  CHECK(sequence_density(m, u, xs, ys) ==
        doctest::Approx(2 * std::log(1.8)).epsilon(1e-12));
  CHECK(sequence_density(m, u, xs, ys) == doctest::Approx(1.175573).epsilon(1e-6));

  CHECK(sequence_density(m, u, {}, {}) == doctest::Approx(0.0));

  const std::vector<int> x1{0}, y1{1};
  CHECK(sequence_density(mismatched_bsc(), u, x1, y1) ==
        doctest::Approx(std::log(0.1)).epsilon(1e-12));

  // A position with W = 0 and q = 0 is impossible under the joint law.
  const ChannelSpec z = ChannelSpec::validated(2, 2, {1.0, 0.0, 0.3, 0.7});
  const ProblemPair zp = validate_pair(z, {1.0, 0.0, 0.5, 1.0});
  try {
    sequence_density(zp, u, x1, y1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == MM_ERR_IMPOSSIBLE_PAIR);
  }
}

TEST_CASE("exact spectrum of the matched pair at small n") {
  const InputDist u = InputDist::uniform(2);
  const ProblemPair m = matched_bsc();

  const SpectrumPmf s1 = exact_spectrum(m, u, 1);
  REQUIRE(s1.atoms.size() == 2);
  CHECK(s1.atoms[0].value == doctest::Approx(std::log(0.2)).epsilon(1e-12));
  CHECK(s1.atoms[0].prob == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(s1.atoms[1].value == doctest::Approx(std::log(1.8)).epsilon(1e-12));
  CHECK(s1.atoms[1].prob == doctest::Approx(0.9).epsilon(1e-12));

  const SpectrumPmf s2 = exact_spectrum(m, u, 2);
  REQUIRE(s2.atoms.size() == 3);
  CHECK(s2.atoms[0].value == doctest::Approx(-1.609438).epsilon(1e-6));
  CHECK(s2.atoms[0].prob == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(s2.atoms[1].value == doctest::Approx(-0.510826).epsilon(1e-6));
  CHECK(s2.atoms[1].prob == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(s2.atoms[2].value == doctest::Approx(0.587787).epsilon(1e-6));
  CHECK(s2.atoms[2].prob == doctest::Approx(0.81).epsilon(1e-12));

  const SpectrumPmf s3 = exact_spectrum(m, u, 3);
  REQUIRE(s3.atoms.size() == 4);
  CHECK(s3.atoms[0].prob == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(s3.atoms[1].prob == doctest::Approx(0.027).epsilon(1e-12));
  CHECK(s3.atoms[2].prob == doctest::Approx(0.243).epsilon(1e-12));
  CHECK(s3.atoms[3].prob == doctest::Approx(0.729).epsilon(1e-12));
}

TEST_CASE("spectrum queries on the matched n=2 law") {
  const SpectrumPmf s2 = exact_spectrum(matched_bsc(), InputDist::uniform(2), 2);
  CHECK(s2.tail_leq(0.0) == doctest::Approx(0.19).epsilon(1e-12));
  CHECK(s2.tail_geq(0.0) == doctest::Approx(0.81).epsilon(1e-12));
  CHECK(s2.quantile(0.1) == doctest::Approx(-0.510826).epsilon(1e-6));
  CHECK(s2.quantile(0.0) == doctest::Approx(-1.609438).epsilon(1e-6));
  CHECK(s2.quantile(0.5) == doctest::Approx(0.587787).epsilon(1e-6));
  try {
    s2.quantile(1.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == MM_ERR_INVALID_ARGUMENT);
  }

  const SpectrumPmf s1 = exact_spectrum(matched_bsc(), InputDist::uniform(2), 1);
  CHECK(s1.mean() == doctest::Approx(0.368064).epsilon(1e-6));
  CHECK(s1.mean() ==
        doctest::Approx(std::log(2.0) + 0.1 * std::log(0.1) + 0.9 * std::log(0.9))
            .epsilon(1e-12));
}

TEST_CASE("spectrum invariants on a random corpus") {
  for (std::uint64_t seed = 40; seed < 52; ++seed) {
    const testutil::RawPair raw = testutil::random_pair(seed, 3, seed % 2 == 0);
    const ProblemPair pair = validate_pair(
        ChannelSpec::validated(raw.input_size, raw.output_size, raw.w), raw.q);
    const InputDist p = InputDist::validated(raw.p);
    const double mean1 = exact_spectrum(pair, p, 1).mean();
    for (const int n : {1, 2, 5}) {
      const SpectrumPmf s = exact_spectrum(pair, p, n);
      CHECK(s.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
      for (std::size_t i = 1; i < s.atoms.size(); ++i)
        CHECK(s.atoms[i].value - s.atoms[i - 1].value > kAtomMergeTol);
      for (const Atom& a : s.atoms) CHECK(a.prob >= 0.0);
      CHECK(s.mean() == doctest::Approx(mean1).epsilon(1e-9));
      CHECK(s.n == n);
    }
  }
}

TEST_CASE("spectrum matches brute-force enumeration") {
  for (std::uint64_t seed = 60; seed < 70; ++seed) {
    const testutil::RawPair raw = testutil::random_pair(seed, 3, seed % 2 == 1);
    const ProblemPair pair = validate_pair(
        ChannelSpec::validated(raw.input_size, raw.output_size, raw.w), raw.q);
    const InputDist p = InputDist::validated(raw.p);
    for (const int n : {1, 2, 3}) {
      const SpectrumPmf s = exact_spectrum(pair, p, n);
      const BruteLaw brute = brute_spectrum(pair, p, n);
      CHECK(s.mean() == doctest::Approx(brute.moment(1)).epsilon(1e-9));
      CHECK(s.second_moment() == doctest::Approx(brute.moment(2)).epsilon(1e-9));
      // Compare CDFs between atoms, where ties cannot bite.
      for (std::size_t i = 0; i + 1 < s.atoms.size(); ++i) {
        const double mid = 0.5 * (s.atoms[i].value + s.atoms[i + 1].value);
        CHECK(s.tail_leq(mid) == doctest::Approx(brute.tail_leq(mid)).epsilon(1e-9));
      }
      CHECK(s.tail_leq(s.atoms.back().value + 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("atom budget is enforced") {
  const testutil::RawPair raw = testutil::random_pair(77, 3);
  const ProblemPair pair = validate_pair(
      ChannelSpec::validated(raw.input_size, raw.output_size, raw.w), raw.q);
  Budget tiny;
  tiny.atoms = 4;
  try {
    exact_spectrum(pair, InputDist::validated(raw.p), 8, tiny);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == MM_ERR_BUDGET_EXCEEDED);
  }
}

TEST_CASE("overshoot inequality") {
  const InputDist u = InputDist::uniform(2);

  // Matched metric: the ratio is identically one.
  for (const int n : {1, 3}) {
    const OvershootCheck c = overshoot_check(matched_bsc(), u, n, 0.05);
    CHECK(c.lhs == doctest::Approx(0.0));
    CHECK(c.holds);
  }

  const OvershootCheck c = overshoot_check(mismatched_bsc(), u, 1, 0.05);
  CHECK(c.lhs == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(std::exp(-0.05)).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(0.951229).epsilon(1e-6));
  CHECK(c.holds);

  const OvershootCheck c20 = overshoot_check(mismatched_bsc(), u, 20, 0.1);
  CHECK(c20.lhs <= std::exp(-2.0) + 1e-12);
  CHECK(c20.holds);

  for (std::uint64_t seed = 80; seed < 100; ++seed) {
    const testutil::RawPair raw = testutil::random_pair(seed, 3);
    const ProblemPair pair = validate_pair(
        ChannelSpec::validated(raw.input_size, raw.output_size, raw.w), raw.q);
    const InputDist p = InputDist::validated(raw.p);
    for (int n = 1; n <= 10; ++n)
      for (const double eps : {0.01, 0.05, 0.1, 0.5})
        CHECK(overshoot_check(pair, p, n, eps).holds);
  }
}

TEST_CASE("second-moment bound") {
  const InputDist u = InputDist::uniform(2);

  const UiBoundCheck c = ui_bound_check(mismatched_bsc(), u, 1);
  CHECK(c.moment == doctest::Approx(0.900969).epsilon(1e-6));
  const double expect_bound =
      2 * std::pow(std::log(0.05), 2) + 2 * std::pow(std::log(0.025), 2);
  CHECK(c.bound == doctest::Approx(expect_bound).epsilon(1e-12));
  CHECK(c.bound == doctest::Approx(45.1644).epsilon(1e-4));
  CHECK(c.holds);

  const ProblemPair ident = validate_pair(
      ChannelSpec::validated(2, 2, {1.0, 0.0, 0.0, 1.0}), {1.0, 0.0, 0.0, 1.0});
  const UiBoundCheck ci = ui_bound_check(ident, u, 1);
  CHECK(ci.moment == doctest::Approx(std::pow(std::log(2.0), 2)).epsilon(1e-12));
  CHECK(ci.moment == doctest::Approx(0.480453).epsilon(1e-6));
  CHECK(ci.bound == doctest::Approx(0.960906).epsilon(1e-6));
  CHECK(ci.holds);

  for (std::uint64_t seed = 80; seed < 100; ++seed) {
    const testutil::RawPair raw = testutil::random_pair(seed, 3);
    const ProblemPair pair = validate_pair(
        ChannelSpec::validated(raw.input_size, raw.output_size, raw.w), raw.q);
    const InputDist p = InputDist::validated(raw.p);
    for (int n = 1; n <= 10; ++n) CHECK(ui_bound_check(pair, p, n).holds);
  }
}

TEST_CASE("merging is stable for lattice-valued laws") {
  // The BSC per-letter law has two values; the n-fold law stays at n+1 atoms.
  const InputDist u = InputDist::uniform(2);
  for (const int n : {4, 8, 16}) {
    const SpectrumPmf s = exact_spectrum(matched_bsc(), u, n);
    CHECK(static_cast<int>(s.atoms.size()) == n + 1);
  }
}
