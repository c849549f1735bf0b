#pragma once

#include <memory>
#include <vector>

#include "spectrascope/coding.hpp"
#include "spectrascope/core.hpp"
#include "spectrascope/model.hpp"
#include "spectrascope/spectrum.hpp"

namespace spectrascope {

/// Forward/backward sliding-block codes with chained alphabets.
struct CodePair {
  CodePtr forward;   // X -> Y
  CodePtr backward;  // Y -> X
};

enum class ErgodicityFlag { Ergodic, NonErgodicMixture };

ErgodicityFlag ergodicity_flag(const Model& model);

/// Two mixtures with matched components: kappa pairs components with equal
/// entropy rate and equal weight (within 1e-9). Both mixtures must be
/// regular: component entropy rates pairwise distinct by more than 1e-6.
struct RegularMixturePair {
  std::shared_ptr<const MixtureModel> x;
  std::shared_ptr<const MixtureModel> y;
  std::vector<int> kappa;  // x component index -> y component index

  static RegularMixturePair make(std::shared_ptr<const MixtureModel> x,
                                 std::shared_ptr<const MixtureModel> y);
};

struct Classification {
  int component = 0;
  double posterior = 0.0;
};

/// argmax over theta of log2 w_theta + log2 P_theta(first n_c symbols); ties
/// broken toward the lowest index. Finite-window surrogate for the exact
/// shift-invariant component sets.
Classification classify_component(const MixtureModel& mixture,
                                  std::span<const int> path, int window);

struct PastedCode {
  RegularMixturePair pair;
  std::vector<CodePair> component_pairs;  // indexed like pair.x components
  int classifier_window = 1000;
  int fallback_symbol = 0;  // arbitrary constant output when nothing matches
};

PastedCode paste_codes(RegularMixturePair pair, std::vector<CodePair> component_pairs,
                       int classifier_window);

struct PastedApplication {
  SamplePath image;
  int component = 0;       // classified component of the input path
  double posterior = 0.0;
};

/// Classifies the path once, then applies that component's forward code at
/// every index (truncate boundary policy).
PastedApplication apply_pasted_forward(const PastedCode& pasted, const SamplePath& path);
PastedApplication apply_pasted_backward(const PastedCode& pasted, const SamplePath& path);

struct IsomorphismCertificate {
  long long samples = 0;
  int path_length = 0;
  int k_block = 0;
  long long correctly_classified = 0;
  long long round_trip_failures = 0;      // among correctly classified paths
  double round_trip_failure_rate = 0.0;
  double classification_accuracy = 0.0;   // vs the sampled true component
  double image_classification_agreement = 0.0;  // image classifies as kappa(theta)
  double tv_distance = 0.0;               // empirical image k-blocks vs exact law of Y
  std::vector<std::vector<long long>> confusion;  // true x-component -> classified
  std::uint64_t seed = 0;
};

IsomorphismCertificate verify_isomorphism(const PastedCode& pasted, int n,
                                          long long num_samples, int k_block,
                                          std::uint64_t seed);

/// Spectrum-vs-ergodicity comparison used by the regularity counterexample:
/// identical staircases do not imply isomorphism when ergodicity differs.
struct IsomorphismObstruction {
  StaircaseSpectrum spectrum_x;
  StaircaseSpectrum spectrum_y;
  bool spectra_equal = false;
  ErgodicityFlag flag_x = ErgodicityFlag::Ergodic;
  ErgodicityFlag flag_y = ErgodicityFlag::Ergodic;
  /// "non_isomorphic_by_ergodicity", "spectra_differ", or "no_obstruction"
  std::string verdict;
};

IsomorphismObstruction check_isomorphism_obstruction(const Model& x, const Model& y);

}  // namespace spectrascope
