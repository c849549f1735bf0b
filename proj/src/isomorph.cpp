#include "spectrascope/isomorph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace spectrascope {

namespace {

constexpr double kRegularityGap = 1e-6;
constexpr double kMatchTol = 1e-9;

double component_rate(const Model& c) {
  if (c.kind() == ModelKind::Iid || c.kind() == ModelKind::Markov)
    return c.entropy_rate();
  throw Error("regular mixture pair: components need exact entropy rates");
}

}  // namespace

ErgodicityFlag ergodicity_flag(const Model& model) {
  if (model.kind() != ModelKind::Mixture) return ErgodicityFlag::Ergodic;
  const auto& mix = static_cast<const MixtureModel&>(model);
  int positive = 0;
  for (double w : mix.weights())
    if (w > 0.0) ++positive;
  return positive >= 2 ? ErgodicityFlag::NonErgodicMixture : ErgodicityFlag::Ergodic;
}

RegularMixturePair RegularMixturePair::make(std::shared_ptr<const MixtureModel> x,
                                            std::shared_ptr<const MixtureModel> y) {
  if (x->num_components() != y->num_components())
    throw Error("regular mixture pair: component counts differ");
  auto rates = [](const MixtureModel& m) {
    std::vector<double> r;
    for (size_t i = 0; i < m.num_components(); ++i)
      r.push_back(component_rate(m.component(i)));
    return r;
  };
  std::vector<double> rx = rates(*x), ry = rates(*y);
  auto check_regular = [](const std::vector<double>& r, const char* name) {
    for (size_t i = 0; i < r.size(); ++i)
      for (size_t j = i + 1; j < r.size(); ++j)
        if (std::abs(r[i] - r[j]) <= kRegularityGap)
          throw Error(std::string("mixture ") + name +
                      " violates regularity: two components share an entropy rate, so "
                      "identical spectra cannot certify an isomorphism");
  };
  check_regular(rx, "X");
  check_regular(ry, "Y");

  RegularMixturePair pair;
  pair.x = std::move(x);
  pair.y = std::move(y);
  pair.kappa.assign(rx.size(), -1);
  for (size_t i = 0; i < rx.size(); ++i) {
    for (size_t j = 0; j < ry.size(); ++j) {
      if (std::abs(rx[i] - ry[j]) <= kMatchTol &&
          std::abs(pair.x->weights()[i] - pair.y->weights()[j]) <= kMatchTol) {
        pair.kappa[i] = static_cast<int>(j);
        break;
      }
    }
    if (pair.kappa[i] < 0)
      throw Error("regular mixture pair: no matching component (entropy rate and "
                  "weight) for X component " + std::to_string(i));
  }
  return pair;
}

Classification classify_component(const MixtureModel& mixture,
                                  std::span<const int> path, int window) {
  if (static_cast<int>(path.size()) < window)
    throw Error("classify_component: path shorter than classifier window");
  auto prefix = path.subspan(0, window);
  std::vector<double> scores(mixture.num_components(), kNegInf);
  for (size_t i = 0; i < mixture.num_components(); ++i) {
    double w = mixture.weights()[i];
    if (w == 0.0) continue;
    scores[i] = std::log2(w) + mixture.component(i).log_probability(prefix);
  }
  int best = 0;
  for (size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  if (scores[best] == kNegInf)
    throw Error("classify_component: all components assign probability zero");
  double total = log2_sum(scores);
  return Classification{best, std::exp2(scores[best] - total)};
}

PastedCode paste_codes(RegularMixturePair pair, std::vector<CodePair> component_pairs,
                       int classifier_window) {
  if (component_pairs.size() != pair.x->num_components())
    throw Error("paste_codes: one code pair per component required");
  const Alphabet* out = nullptr;
  for (size_t i = 0; i < component_pairs.size(); ++i) {
    const auto& cp = component_pairs[i];
    if (!cp.forward || !cp.backward) throw Error("paste_codes: missing code");
    if (cp.forward->input() != pair.x->alphabet() ||
        cp.backward->output() != pair.x->alphabet() ||
        cp.forward->output() != pair.y->alphabet() ||
        cp.backward->input() != pair.y->alphabet())
      throw Error("paste_codes: code pair alphabets do not chain");
    if (out && cp.forward->output() != *out)
      throw Error("paste_codes: forward codes must share an output alphabet");
    out = &cp.forward->output();
  }
  PastedCode pasted;
  pasted.pair = std::move(pair);
  pasted.component_pairs = std::move(component_pairs);
  pasted.classifier_window = classifier_window;
  pasted.fallback_symbol = 0;
  return pasted;
}

PastedApplication apply_pasted_forward(const PastedCode& pasted, const SamplePath& path) {
  Classification c = classify_component(*pasted.pair.x, path.symbols,
                                        pasted.classifier_window);
  PastedApplication app;
  app.component = c.component;
  app.posterior = c.posterior;
  app.image = apply_code(*pasted.component_pairs[c.component].forward, path);
  return app;
}

PastedApplication apply_pasted_backward(const PastedCode& pasted, const SamplePath& path) {
  Classification c = classify_component(*pasted.pair.y, path.symbols,
                                        pasted.classifier_window);
  // map the Y-side component back through kappa
  int x_comp = 0;
  for (size_t i = 0; i < pasted.pair.kappa.size(); ++i)
    if (pasted.pair.kappa[i] == c.component) x_comp = static_cast<int>(i);
  PastedApplication app;
  app.component = x_comp;
  app.posterior = c.posterior;
  app.image = apply_code(*pasted.component_pairs[x_comp].backward, path);
  return app;
}

IsomorphismCertificate verify_isomorphism(const PastedCode& pasted, int n,
                                          long long num_samples, int k_block,
                                          std::uint64_t seed) {
  const MixtureModel& mx = *pasted.pair.x;
  const MixtureModel& my = *pasted.pair.y;
  int ay = my.alphabet().size();
  long long num_blocks = ipow(ay, k_block);
  check_cap(num_blocks, kDefaultCap, "verify_isomorphism k-block law");

  IsomorphismCertificate cert;
  cert.samples = num_samples;
  cert.path_length = n;
  cert.k_block = k_block;
  cert.seed = seed;
  cert.confusion.assign(mx.num_components(),
                        std::vector<long long>(mx.num_components(), 0));

  std::vector<double> block_counts(num_blocks, 0.0);
  double total_blocks = 0.0;
  long long image_agrees = 0;

  SamplePath x_path;
  x_path.alphabet = mx.alphabet_ptr();
  for (long long j = 0; j < num_samples; ++j) {
    x_path.symbols.clear();
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    int truth = mx.sample_with_component(x_path.symbols, n, rng);

    PastedApplication fwd = apply_pasted_forward(pasted, x_path);
    cert.confusion[truth][fwd.component] += 1;
    bool correct = fwd.component == truth;
    if (correct) ++cert.correctly_classified;

    // pooled overlapping k-blocks of the image
    const auto& y = fwd.image.symbols;
    for (int i = 0; i + k_block <= static_cast<int>(y.size()); ++i) {
      block_counts[word_to_index(std::span<const int>(y).subspan(i, k_block), ay)] += 1.0;
      total_blocks += 1.0;
    }

    Classification img_class =
        classify_component(my, y, std::min<int>(pasted.classifier_window,
                                                static_cast<int>(y.size())));
    if (img_class.component == pasted.pair.kappa[fwd.component]) ++image_agrees;

    PastedApplication back = apply_pasted_backward(pasted, fwd.image);
    if (correct) {
      // compare against the interior of the original path
      int lf = pasted.component_pairs[truth].forward->radius();
      int lb = pasted.component_pairs[truth].backward->radius();
      const auto& xr = back.image.symbols;
      bool mismatch = back.component != truth;
      for (size_t i = 0; i < xr.size() && !mismatch; ++i)
        if (xr[i] != x_path.symbols[i + lf + lb]) mismatch = true;
      if (mismatch) ++cert.round_trip_failures;
    }
  }

  cert.classification_accuracy =
      static_cast<double>(cert.correctly_classified) / static_cast<double>(num_samples);
  cert.image_classification_agreement =
      static_cast<double>(image_agrees) / static_cast<double>(num_samples);
  cert.round_trip_failure_rate =
      cert.correctly_classified == 0
          ? 0.0
          : static_cast<double>(cert.round_trip_failures) /
                static_cast<double>(cert.correctly_classified);

  // TV between pooled image k-blocks and the exact k-block law of Y
  double tv = 0.0;
  std::vector<int> word;
  for (long long b = 0; b < num_blocks; ++b) {
    index_to_word(b, k_block, ay, word);
    double exact = std::exp2(my.log_probability(word));
    tv += std::abs(block_counts[b] / total_blocks - exact);
  }
  cert.tv_distance = 0.5 * tv;
  return cert;
}

IsomorphismObstruction check_isomorphism_obstruction(const Model& x, const Model& y) {
  auto spectrum_of = [](const Model& m) {
    if (m.kind() == ModelKind::Mixture)
      return mixture_spectrum(static_cast<const MixtureModel&>(m));
    return StaircaseSpectrum{{{m.entropy_rate(), 1.0}}};
  };
  IsomorphismObstruction o;
  o.spectrum_x = spectrum_of(x);
  o.spectrum_y = spectrum_of(y);
  o.flag_x = ergodicity_flag(x);
  o.flag_y = ergodicity_flag(y);

  o.spectra_equal = o.spectrum_x.jumps.size() == o.spectrum_y.jumps.size();
  if (o.spectra_equal) {
    for (size_t i = 0; i < o.spectrum_x.jumps.size(); ++i) {
      if (std::abs(o.spectrum_x.jumps[i].first - o.spectrum_y.jumps[i].first) > 1e-9 ||
          std::abs(o.spectrum_x.jumps[i].second - o.spectrum_y.jumps[i].second) > 1e-9)
        o.spectra_equal = false;
    }
  }

  if (!o.spectra_equal)
    o.verdict = "spectra_differ";
  else if (o.flag_x != o.flag_y)
    o.verdict = "non_isomorphic_by_ergodicity";
  else
    o.verdict = "no_obstruction";
  return o;
}

}  // namespace spectrascope
