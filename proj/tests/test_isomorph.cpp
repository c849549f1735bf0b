#include <doctest.h>

#include <memory>

#include "spectrascope/isomorph.hpp"

using namespace spectrascope;

namespace {

std::shared_ptr<const MixtureModel> mix(std::vector<ModelPtr> comps,
                                        std::vector<double> weights) {
  return std::make_shared<MixtureModel>(std::move(comps), std::move(weights));
}

std::shared_ptr<const MixtureModel> demo_x() {
  return mix({make_bernoulli(0.1), make_bernoulli(0.5)}, {0.7, 0.3});
}

std::shared_ptr<const MixtureModel> demo_y() {
  return mix({make_bernoulli(0.9), make_bernoulli(0.5)}, {0.7, 0.3});
}

PastedCode demo_pasted(int classifier_window = 400) {
  std::vector<CodePair> codes{{binary_flip_code(), binary_flip_code()},
                              {identity_code(binary_alphabet()),
                               identity_code(binary_alphabet())}};
  return paste_codes(RegularMixturePair::make(demo_x(), demo_y()), std::move(codes),
                     classifier_window);
}

}  // namespace

TEST_CASE("ergodicity flags") {
  CHECK(ergodicity_flag(*make_bernoulli(0.3)) == ErgodicityFlag::Ergodic);
  CHECK(ergodicity_flag(*demo_x()) == ErgodicityFlag::NonErgodicMixture);
  auto degenerate = mix({make_bernoulli(0.1), make_bernoulli(0.5)}, {1.0, 0.0});
  CHECK(ergodicity_flag(*degenerate) == ErgodicityFlag::Ergodic);
}

TEST_CASE("regular mixture pairing matches components by rate and weight") {
  RegularMixturePair p = RegularMixturePair::make(demo_x(), demo_y());
  CHECK(p.kappa == std::vector<int>{0, 1});

  // permuted component order on the Y side still pairs correctly
  auto y_perm = mix({make_bernoulli(0.5), make_bernoulli(0.9)}, {0.3, 0.7});
  RegularMixturePair q = RegularMixturePair::make(demo_x(), y_perm);
  CHECK(q.kappa == std::vector<int>{1, 0});

  // regularity: two components with the same entropy rate are rejected
  auto irregular = mix({make_bernoulli(0.1), make_bernoulli(0.9)}, {0.5, 0.5});
  CHECK_THROWS_AS(RegularMixturePair::make(irregular, irregular), Error);

  // mismatched weights break the pairing even when rates agree
  auto y_badw = mix({make_bernoulli(0.9), make_bernoulli(0.5)}, {0.6, 0.4});
  CHECK_THROWS_AS(RegularMixturePair::make(demo_x(), y_badw), Error);
}

TEST_CASE("finite-window classification finds the sampled component") {
  auto m = demo_x();
  for (int truth : {0, 1}) {
    SamplePath p = sample(m->component(truth), 500, 100 + truth);
    Classification c = classify_component(*m, p.symbols, 400);
    CHECK(c.component == truth);
    CHECK(c.posterior > 0.99);
  }
  std::vector<int> shorty{0, 1};
  CHECK_THROWS_AS(classify_component(*m, shorty, 400), Error);
}

TEST_CASE("pasting validates code alphabets") {
  auto ternary = std::make_shared<Alphabet>(std::vector<std::string>{"a", "b", "c"});
  std::vector<CodePair> bad{{identity_code(ternary), identity_code(ternary)},
                            {identity_code(binary_alphabet()),
                             identity_code(binary_alphabet())}};
  CHECK_THROWS_AS(
      paste_codes(RegularMixturePair::make(demo_x(), demo_y()), std::move(bad), 100),
      Error);
}

TEST_CASE("pasted code round trip recovers the interior of the path") {
  PastedCode pasted = demo_pasted();
  auto m = demo_x();
  for (int truth : {0, 1}) {
    SamplePath x = sample(m->component(truth), 600, 7 + truth);
    x.alphabet = m->alphabet_ptr();
    PastedApplication fwd = apply_pasted_forward(pasted, x);
    CHECK(fwd.component == truth);
    PastedApplication back = apply_pasted_backward(pasted, fwd.image);
    CHECK(back.component == truth);
    int off = pasted.component_pairs[truth].forward->radius() +
              pasted.component_pairs[truth].backward->radius();
    for (size_t i = 0; i < back.image.symbols.size(); ++i)
      REQUIRE(back.image.symbols[i] == x.symbols[i + off]);
  }
}

TEST_CASE("isomorphism certificate on the bundled demo pair") {
  IsomorphismCertificate cert = verify_isomorphism(demo_pasted(), 800, 600, 3, 5);
  CHECK(cert.classification_accuracy == doctest::Approx(1.0));
  CHECK(cert.image_classification_agreement == doctest::Approx(1.0));
  CHECK(cert.round_trip_failures == 0);
  CHECK(cert.tv_distance < 0.05);
  CHECK(cert.confusion[0][0] + cert.confusion[1][1] == 600);
}

TEST_CASE("certificates are deterministic in the seed") {
  IsomorphismCertificate a = verify_isomorphism(demo_pasted(200), 300, 200, 3, 9);
  IsomorphismCertificate b = verify_isomorphism(demo_pasted(200), 300, 200, 3, 9);
  CHECK(a.tv_distance == b.tv_distance);
  CHECK(a.confusion == b.confusion);
}

TEST_CASE("obstruction analysis distinguishes the three verdicts") {
  // equal spectra, different ergodicity: not isomorphic despite the spectra
  auto split = mix({make_bernoulli(0.1), make_bernoulli(0.9)}, {0.5, 0.5});
  IsomorphismObstruction o = check_isomorphism_obstruction(*split, *make_bernoulli(0.1));
  CHECK(o.spectra_equal);
  CHECK(o.verdict == "non_isomorphic_by_ergodicity");

  IsomorphismObstruction d =
      check_isomorphism_obstruction(*make_bernoulli(0.1), *make_bernoulli(0.5));
  CHECK(d.verdict == "spectra_differ");

  IsomorphismObstruction n = check_isomorphism_obstruction(*demo_x(), *demo_y());
  CHECK(n.verdict == "no_obstruction");
}
