#include <doctest.h>

#include <cmath>

#include "spectrascope/coding.hpp"
#include "spectrascope/spectrum.hpp"

using namespace spectrascope;

namespace {

MixtureModel fair_bern01() {
  return MixtureModel({make_bernoulli(0.5), make_bernoulli(0.1)}, {0.3, 0.7});
}

}  // namespace

TEST_CASE("staircase of a mixture: jump locations and masses") {
  StaircaseSpectrum s = mixture_spectrum(fair_bern01());
  REQUIRE(s.jumps.size() == 2);
  CHECK(s.jumps[0].first == doctest::Approx(0.4689955935892812).epsilon(1e-12));
  CHECK(s.jumps[0].second == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(s.jumps[1].first == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.jumps[1].second == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("staircase evaluation is right-continuous and monotone") {
  StaircaseSpectrum s = mixture_spectrum(fair_bern01());
  double h = 0.4689955935892812;
  CHECK(s.eval(h - 1e-9) == doctest::Approx(0.0));
  CHECK(s.eval(h) == doctest::Approx(0.7));
  CHECK(s.eval(0.999999) == doctest::Approx(0.7));
  CHECK(s.eval(1.0) == doctest::Approx(1.0));
  CHECK(s.eval(5.0) == doctest::Approx(1.0));
}

TEST_CASE("components with equal entropy rates merge into one jump") {
  MixtureModel m({make_bernoulli(0.1), make_bernoulli(0.9)}, {0.4, 0.6});
  StaircaseSpectrum s = mixture_spectrum(m);
  REQUIRE(s.jumps.size() == 1);
  CHECK(s.jumps[0].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("certified rates fill in components without closed forms") {
  auto factor = pushforward_model(xor3_code(), make_bernoulli(0.5));
  MixtureModel m({factor, make_bernoulli(0.1)}, {0.5, 0.5});
  CHECK_THROWS_AS(mixture_spectrum(m), Error);
  StaircaseSpectrum s = mixture_spectrum(m, {1.0, std::nullopt});
  REQUIRE(s.jumps.size() == 2);
  CHECK(s.jumps[1].first == doctest::Approx(1.0));
}

TEST_CASE("entropy integral identity for the staircase") {
  CHECK(entropy_integral(mixture_spectrum(fair_bern01())) ==
        doctest::Approx(0.6282969155124969).epsilon(1e-12));
  // degenerate one-component mixture
  MixtureModel one({make_bernoulli(0.25)}, {1.0});
  CHECK(entropy_integral(mixture_spectrum(one)) ==
        doctest::Approx(0.8112781244591328).epsilon(1e-12));
}

TEST_CASE("default tau grid covers [0, log2|X| + 2 gamma]") {
  auto grid = default_tau_grid(2, 0.05, 101);
  REQUIRE(grid.size() == 101);
  CHECK(grid.front() == doctest::Approx(0.0));
  CHECK(grid.back() == doctest::Approx(1.1));
  for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("empirical spectrum: worker count never changes the result") {
  auto m = fair_bern01();
  auto grid = default_tau_grid(2, 0.02, 64);
  SpectrumEstimate e1 = empirical_spectrum(m, 300, 0.02, 500, grid, 42, 1);
  SpectrumEstimate e4 = empirical_spectrum(m, 300, 0.02, 500, grid, 42, 4);
  CHECK(e1.cdf == e4.cdf);  // bitwise identical
  REQUIRE(e1.cdf.size() == grid.size());
  for (size_t i = 1; i < e1.cdf.size(); ++i) CHECK(e1.cdf[i] >= e1.cdf[i - 1]);
  CHECK(e1.cdf.back() == doctest::Approx(1.0));
}

TEST_CASE("empirical spectrum concentrates around the entropy rate") {
  auto m = make_bernoulli(0.25);
  double h = 0.8112781244591328;
  auto e = empirical_spectrum(*m, 2000, 0.05, 1000, {h - 0.2, h + 0.2}, 7, 2);
  CHECK(e.cdf[0] <= 0.05);
  CHECK(e.cdf[1] >= 0.95);
}

TEST_CASE("dominance: reflexive, and ordered staircases give clean verdicts") {
  StaircaseSpectrum low = mixture_spectrum(MixtureModel({make_bernoulli(0.1)}, {1.0}));
  StaircaseSpectrum high = mixture_spectrum(MixtureModel({make_bernoulli(0.5)}, {1.0}));
  CHECK(dominance_check(low, low).dominates);
  // F of the low-entropy process sits above: it can map onto the high one
  DominanceReport ok = dominance_check(high, low);
  CHECK_FALSE(ok.dominates);
  CHECK(ok.tau_star == doctest::Approx(0.4689955935892812).epsilon(1e-9));
  CHECK(ok.gap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dominance_check(low, high).dominates);
  // slack can absorb a small violation
  StaircaseSpectrum a{{{0.5, 1.0}}}, b{{{0.5 - 1e-4, 0.05}, {0.6, 0.95}}};
  CHECK_FALSE(dominance_check(a, b, 0.0).dominates);
  CHECK(dominance_check(a, b, 0.1).dominates);
}

TEST_CASE("dominance between estimates uses the shared grid") {
  auto m = fair_bern01();
  auto grid = default_tau_grid(2, 0.02, 64);
  SpectrumEstimate e = empirical_spectrum(m, 300, 0.02, 400, grid, 3, 1);
  CHECK(dominance_check(e, e, 0.0).dominates);
  SpectrumEstimate other = e;
  other.tau_grid[5] += 1e-3;
  CHECK_THROWS_AS(dominance_check(e, other, 0.0), Error);
}

TEST_CASE("DKW radius and the default slack") {
  CHECK(dkw_radius_95(5000) == doctest::Approx(0.019206455826398416).epsilon(1e-12));
  CHECK(default_dominance_slack(5000, 5000) ==
        doctest::Approx(2 * 2 * 0.019206455826398416).epsilon(1e-12));
}

TEST_CASE("spectral bounds bracket the jump support") {
  SpectralBounds b = spectral_bounds(mixture_spectrum(fair_bern01()));
  CHECK(b.inf_entropy == doctest::Approx(0.4689955935892812).epsilon(1e-12));
  CHECK(b.sup_entropy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monte carlo validation of the staircase formula") {
  Theorem1Report r = validate_theorem1(fair_bern01(), 1500, 0.02, 2000, 21, 0.04, 0.06, 4);
  CHECK(r.pass);
  CHECK(r.sup_gap <= 0.04);
  CHECK(r.points_checked > 100);
}
