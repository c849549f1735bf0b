#include <doctest.h>

#include <cmath>

#include "spectrascope/coding.hpp"

using namespace spectrascope;

namespace {

SamplePath binary_path(std::vector<int> symbols) {
  SamplePath p;
  p.alphabet = binary_alphabet();
  p.symbols = std::move(symbols);
  return p;
}

}  // namespace

TEST_CASE("window parity code maps 01101 to 000") {
  auto code = xor3_code();
  CHECK(code->radius() == 1);
  SamplePath out = apply_code(*code, binary_path({0, 1, 1, 0, 1}));
  CHECK(out.symbols == std::vector<int>{0, 0, 0});
  // windows: 011 -> 0, 110 -> 0, 101 -> 0
  CHECK(code->map_window(std::vector<int>{0, 1, 1}) == 0);
  CHECK(code->map_window(std::vector<int>{1, 1, 0}) == 0);
  CHECK(code->map_window(std::vector<int>{1, 0, 1}) == 0);
  CHECK(code->map_window(std::vector<int>{0, 0, 1}) == 1);
}

TEST_CASE("code construction validates the table") {
  auto bin = binary_alphabet();
  CHECK_THROWS_AS(SlidingBlockCode(bin, bin, 1, {0, 1, 1}), Error);      // not |X|^3 entries
  CHECK_THROWS_AS(SlidingBlockCode(bin, bin, 0, {0, 2}), Error);         // symbol out of range
  CHECK_THROWS_AS(SlidingBlockCode(bin, bin, -1, {0, 1}), Error);
}

TEST_CASE("boundary policies") {
  auto code = xor3_code();
  SamplePath p = binary_path({1, 0, 1, 1});
  CHECK(apply_code(*code, p, BoundaryPolicy::Truncate).length() == 2);
  CHECK(apply_code(*code, p, BoundaryPolicy::Exact).length() == 2);
  SamplePath tiny = binary_path({1, 0});
  CHECK_THROWS_AS(apply_code(*code, tiny, BoundaryPolicy::Exact), Error);
  SamplePath id = apply_code(*identity_code(binary_alphabet()), p);
  CHECK(id.symbols == p.symbols);
  SamplePath flip = apply_code(*binary_flip_code(), p);
  CHECK(flip.symbols == std::vector<int>{0, 1, 0, 0});
}

TEST_CASE("sliding-block coding commutes with the shift") {
  auto code = xor3_code();
  SamplePath p = binary_path({1, 0, 1, 1, 0, 0, 1, 0});
  SamplePath shifted = binary_path({0, 1, 1, 0, 0, 1, 0});
  SamplePath y = apply_code(*code, p);
  SamplePath ys = apply_code(*code, shifted);
  std::vector<int> expect(y.symbols.begin() + 1, y.symbols.end());
  CHECK(ys.symbols == expect);
}

TEST_CASE("exact mismatch rates over the stationary window law") {
  auto base = make_bernoulli(0.25);
  CHECK(mismatch_rate_exact(*xor3_code(), *xor3_code(), *base) == doctest::Approx(0.0));
  CHECK(mismatch_rate_exact(*binary_flip_code(), *identity_code(binary_alphabet()), *base) ==
        doctest::Approx(1.0));
  CHECK(mismatch_rate_exact(*xor3_code(), *identity_code(binary_alphabet()),
                            *make_bernoulli(0.5)) == doctest::Approx(0.5));
  double mc = mismatch_rate_monte_carlo(*xor3_code(), *identity_code(binary_alphabet()),
                                        *make_bernoulli(0.5), 20000, 4);
  CHECK(mc == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("coupling marginals are consistent") {
  auto base = make_bernoulli(0.25);
  Coupling c = build_coupling(base, xor3_code(), 2);
  CHECK(c.m == 3);
  CHECK(c.x_block_length() == 7);
  CHECK(c.y_block_length() == 5);
  double total = 0.0;
  for (double p : c.x_prob) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  double ytotal = 0.0;
  for (const auto& [idx, p] : coupling_y_marginal(c)) {
    CHECK(p > 0.0);
    CHECK(idx >= 0);
    CHECK(idx < 32);
    ytotal += p;
  }
  CHECK(ytotal == doctest::Approx(1.0).epsilon(1e-12));

  // the parity image of a uniform base is uniform on blocks
  Coupling u = build_coupling(make_bernoulli(0.5), xor3_code(), 1);
  for (const auto& [idx, p] : coupling_y_marginal(u))
    CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("change of measure bound holds with positive probability mass") {
  MixtureModel mix({make_bernoulli(0.5), make_bernoulli(0.1)}, {0.3, 0.7});
  for (int i : {0, 1}) {
    ChangeOfMeasureReport r = verify_change_of_measure(mix.component(i), mix, 8, 0.2);
    CHECK(r.pass);
    CHECK(r.lhs <= r.bound + 1e-12);
    CHECK(r.bound == doctest::Approx(std::exp2(-8 * 0.2)).epsilon(1e-12));
  }
  // the bound must be doing work somewhere: lhs is strictly positive for a
  // component that the mixture down-weights
  ChangeOfMeasureReport r = verify_change_of_measure(mix.component(0), mix, 8, 0.05);
  CHECK(r.lhs > 0.0);
  CHECK(r.pass);
}

TEST_CASE("finite spectrum comparison bound: exact evaluation") {
  FiniteBoundReport r =
      verify_finite_bound(make_bernoulli(0.5), xor3_code(), 3, 0.8, 0.5, 0.05);
  CHECK(r.pass);
  CHECK_FALSE(r.trivially_pass);
  CHECK(r.exponent == doctest::Approx(0.16360304288404376).epsilon(1e-12));
  CHECK(r.rhs_counting == doctest::Approx(std::exp2(-7 * r.exponent)).epsilon(1e-12));
  CHECK(r.rhs_mismatch == doctest::Approx(0.0));
  CHECK(r.lhs <= r.rhs() + 1e-12);

  // small gamma makes the counting term vacuous but the bound still holds
  FiniteBoundReport t =
      verify_finite_bound(make_bernoulli(0.5), xor3_code(), 3, 0.8, 0.05, 0.25);
  CHECK(t.trivially_pass);
  CHECK(t.pass);
}

TEST_CASE("nonzero mismatch enters the bound as epsilon / beta") {
  auto base = make_bernoulli(0.25);
  Coupling c = build_coupling(base, identity_code(binary_alphabet()), 3);
  FiniteBoundReport r = verify_finite_bound(c, 0.6, 0.5, 0.1, 0.02);
  CHECK(r.rhs_mismatch == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.pass);
}

TEST_CASE("hamming ball counting bound") {
  HammingBallReport t = hamming_ball_bound_check(7, 2.0 / 7.0, 3);
  CHECK(t.count == 99);
  CHECK(t.bound == doctest::Approx(592.95096).epsilon(1e-6));
  CHECK(t.pass);

  HammingBallReport b = hamming_ball_bound_check(5, 0.2, 2);
  CHECK(b.count == 6);
  CHECK(b.bound == doctest::Approx(24.4140625).epsilon(1e-9));
  CHECK(b.pass);

  CHECK_THROWS_AS(hamming_ball_bound_check(5, 0.6, 2), Error);  // beta must stay below 1/2
}

TEST_CASE("pushforward model agrees with pooled empirical image statistics") {
  auto base = make_binary_flip_markov(0.2);
  auto img = pushforward_model(xor3_code(), base);
  SamplePath x = sample(*base, 60000, 13);
  SamplePath y = apply_code(*xor3_code(), x);
  double ones = 0;
  for (int s : y.symbols) ones += s;
  double freq = ones / static_cast<double>(y.symbols.size());
  std::vector<int> w{1};
  CHECK(freq == doctest::Approx(std::exp2(img->log_probability(w))).epsilon(0.05));
}
