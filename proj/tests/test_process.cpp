#include <doctest.h>

#include <cmath>

#include "spectrascope/coding.hpp"
#include "spectrascope/model.hpp"

using namespace spectrascope;

namespace {
std::vector<int> bits(std::initializer_list<int> v) { return std::vector<int>(v); }
}  // namespace

TEST_CASE("alphabet rejects duplicate or empty label sets") {
  CHECK_THROWS_AS(Alphabet({"a", "a"}), Error);
  CHECK_THROWS_AS(Alphabet({}), Error);
  Alphabet abc({"a", "b", "c"});
  CHECK(abc.size() == 3);
  CHECK(abc.index("c") == 2);
  CHECK_THROWS_AS(abc.index("d"), Error);
}

TEST_CASE("iid model probabilities and entropy") {
  auto m = make_bernoulli(0.25);
  auto w = bits({0, 0, 0, 1});
  CHECK(m->log_probability(w) == doctest::Approx(-3.2451124978365313).epsilon(1e-12));
  CHECK(m->entropy_rate() == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK_THROWS_AS(make_iid({0.5, 0.6}), Error);
  CHECK_THROWS_AS(make_iid({0.5, -0.1, 0.6}), Error);
}

TEST_CASE("markov model: stationary law, probabilities, entropy") {
  auto m = make_binary_flip_markov(0.2);
  const auto& mk = static_cast<const MarkovModel&>(*m);
  CHECK(mk.initial()[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(m->entropy_rate() == doctest::Approx(0.7219280948873623).epsilon(1e-12));
  auto w = bits({0, 0});
  CHECK(m->log_probability(w) == doctest::Approx(std::log2(0.4)).epsilon(1e-12));
  // shorter than order + 1: stationary marginal
  auto one = bits({1});
  CHECK(m->log_probability(one) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("markov model rejects reducible and periodic kernels") {
  auto bin = binary_alphabet();
  CHECK_THROWS_AS(MarkovModel(bin, 1, {1.0, 0.0, 0.0, 1.0}), Error);  // two closed classes
  CHECK_THROWS_AS(MarkovModel(bin, 1, {0.0, 1.0, 1.0, 0.0}), Error);  // period 2
  CHECK_THROWS_AS(MarkovModel(bin, 1, {0.5, 0.5, 0.3, 0.6}), Error);  // rows must sum to 1
  // explicit non-stationary initial is rejected
  CHECK_THROWS_AS(MarkovModel(bin, 1, {0.8, 0.2, 0.2, 0.8}, {0.9, 0.1}), Error);
}

TEST_CASE("stationarity: one-step marginals are shift invariant") {
  for (ModelPtr m : {make_bernoulli(0.25), make_binary_flip_markov(0.1)}) {
    double first[2] = {0.0, 0.0}, second[2] = {0.0, 0.0};
    for_each_word(2, 2, [&](std::span<const int> w, long long) {
      double p = std::exp2(m->log_probability(w));
      first[w[0]] += p;
      second[w[1]] += p;
    });
    CHECK(first[0] == doctest::Approx(second[0]).epsilon(1e-12));
    CHECK(first[0] + first[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("conditional entropy is nonincreasing in the conditioning order") {
  auto factor = pushforward_model(xor3_code(), make_bernoulli(0.25));
  for (ModelPtr m : {make_binary_flip_markov(0.15), factor}) {
    double prev = conditional_entropy(*m, 0);
    for (int k = 1; k <= 4; ++k) {
      double h = conditional_entropy(*m, k);
      CHECK(h <= prev + 1e-12);
      prev = h;
    }
  }
  // for a Markov chain it is constant from k = order on
  auto mk = make_binary_flip_markov(0.15);
  CHECK(conditional_entropy(*mk, 1) == doctest::Approx(conditional_entropy(*mk, 3)).epsilon(1e-12));
  CHECK(conditional_entropy(*mk, 1) == doctest::Approx(mk->entropy_rate()).epsilon(1e-12));
}

TEST_CASE("mixture probabilities: exact convex combination and component lower bound") {
  auto fair = make_bernoulli(0.5);
  auto b01 = make_bernoulli(0.1);
  MixtureModel mix({fair, b01}, {0.3, 0.7});
  auto w = bits({0, 0, 0, 1});
  CHECK(mix.log_probability(w) == doctest::Approx(-3.841042592242437).epsilon(1e-12));
  // P_mix >= w_theta P_theta for every component
  CHECK(mix.log_probability(w) >= std::log2(0.7) + b01->log_probability(w) - 1e-12);
  CHECK(mix.log_probability(w) >= std::log2(0.3) + fair->log_probability(w) - 1e-12);
  CHECK_THROWS_AS(MixtureModel({fair, b01}, {0.5, 0.6}), Error);
  // mixtures of mixtures are rejected (one-level decomposition)
  auto inner = std::make_shared<MixtureModel>(
      std::vector<ModelPtr>{fair, b01}, std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(MixtureModel({inner, fair}, {0.5, 0.5}), Error);
}

TEST_CASE("factor model: exact pushforward probabilities") {
  // parity of a window of a uniform base is again uniform
  auto uniform_img = pushforward_model(xor3_code(), make_bernoulli(0.5));
  for (int n : {1, 3, 5}) {
    std::vector<int> y(n, 1);
    CHECK(uniform_img->log_probability(y) == doctest::Approx(-n).epsilon(1e-12));
  }

  // generic base: compare against brute-force sum over preimages
  auto base = make_bernoulli(0.25);
  auto code = xor3_code();
  auto img = pushforward_model(code, base);
  int n = 3, l = code->radius();
  for_each_word(2, n, [&](std::span<const int> y, long long) {
    double p = 0.0;
    std::vector<int> yy(y.begin(), y.end());
    for_each_word(2, n + 2 * l, [&](std::span<const int> x, long long) {
      for (int i = 0; i < n; ++i)
        if (code->map_window(x.subspan(i, 2 * l + 1)) != yy[i]) return;
      p += std::exp2(base->log_probability(x));
    });
    CHECK(img->log_probability(yy) == doctest::Approx(std::log2(p)).epsilon(1e-10));
  });
}

TEST_CASE("factor entropy bracket tightens and straddles the truth when known") {
  // flip code is a bijection, so the image of Bern(0.25) is Bern(0.75)
  auto img = pushforward_model(binary_flip_code(), make_bernoulli(0.25));
  const auto& f = static_cast<const FactorModel&>(*img);
  EntropyBracket b = f.entropy_rate_bracket(3);
  CHECK(b.lower <= 0.8112781244591328 + 1e-9);
  CHECK(b.upper >= 0.8112781244591328 - 1e-9);
  CHECK(b.gap() < 1e-6);

  auto parity = pushforward_model(xor3_code(), make_bernoulli(0.25));
  const auto& g = static_cast<const FactorModel&>(*parity);
  EntropyBracket b1 = g.entropy_rate_bracket(1);
  EntropyBracket b3 = g.entropy_rate_bracket(3);
  CHECK(b3.lower >= b1.lower - 1e-12);
  CHECK(b3.upper <= b1.upper + 1e-12);
  CHECK(b3.lower <= b3.upper);
  CHECK_THROWS_AS(parity->entropy_rate(), Error);
}

TEST_CASE("sampling is deterministic in the seed and matches the law") {
  auto m = make_bernoulli(0.25);
  SamplePath a = sample(*m, 200, 11), b = sample(*m, 200, 11), c = sample(*m, 200, 12);
  CHECK(a.symbols == b.symbols);
  CHECK(a.symbols != c.symbols);
  CHECK(a.seed == 11);
  CHECK(a.model_id == "iid");

  SamplePath big = sample(*m, 20000, 5);
  double ones = 0;
  for (int s : big.symbols) ones += s;
  CHECK(ones / 20000.0 == doctest::Approx(0.25).epsilon(0.05));

  auto mk = make_binary_flip_markov(0.2);
  SamplePath mp = sample(*mk, 20000, 9);
  double flips = 0;
  for (size_t i = 1; i < mp.symbols.size(); ++i)
    flips += mp.symbols[i] != mp.symbols[i - 1];
  CHECK(flips / 19999.0 == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("self information rate and zero-probability paths") {
  auto m = make_iid({1.0, 0.0});
  SamplePath p;
  p.alphabet = binary_alphabet();
  p.symbols = bits({0, 1, 0});
  CHECK(self_information_rate(*m, p) == kPosInf);
  p.symbols = bits({0, 0, 0});
  CHECK(self_information_rate(*m, p) == doctest::Approx(0.0));
}

TEST_CASE("enumeration cap is enforced") {
  auto m = make_bernoulli(0.5);
  CHECK_THROWS_AS(conditional_entropy(*m, 30, 1 << 10), CapExceeded);
}
