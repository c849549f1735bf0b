#pragma once

#include <map>
#include <span>
#include <vector>

#include "spectrascope/core.hpp"
#include "spectrascope/model.hpp"

namespace spectrascope {

/// kth order Markov type: overlapping (k+1)-block counts of a sequence.
/// Counts are exact integers over n - k windows, so type equality is exact.
struct MarkovType {
  int k = 0;
  long long windows = 0;                   // n - k
  std::map<long long, long long> counts;   // (k+1)-block index -> count

  bool operator==(const MarkovType&) const = default;
};

MarkovType markov_type(std::span<const int> path, int k, int alphabet_size);
inline MarkovType markov_type(const SamplePath& path, int k) {
  return markov_type(path.symbols, k, path.alphabet->size());
}

/// All x^n with the given type; exhaustive filter, small n only.
std::vector<std::vector<int>> type_class(int n, int k, const MarkovType& type,
                                         int alphabet_size, long long cap = kDefaultCap);

/// Order-k conditional table P^(k)(x_{k+1}|x_1^k) built from a model's exact
/// (k+1)-block marginals. Rows whose conditioning block has probability zero
/// are left undefined.
struct MarkovApproximation {
  int k = 0;
  int alphabet_size = 0;
  std::vector<double> conditional;   // prefix * |X| + next, NaN where undefined
  std::vector<double> prefix_prob;   // over X^k

  bool defined(long long prefix) const { return prefix_prob[prefix] > 0.0; }
};

MarkovApproximation markov_approximation(const Model& model, int k,
                                         long long cap = kDefaultCap);

/// log2 P^(k)(x_{k+1}^n | x_1^k) under the product formula. Throws if a
/// conditioning block has probability zero.
double approx_log_probability(const MarkovApproximation& approx,
                              std::span<const int> path);

/// log2 of the mixture of component Markov approximations,
/// sum_theta w(theta) P_theta^(k)(x_{k+1}^n | x_1^k).
double mixture_approx_log_probability(const MixtureModel& mixture, int k,
                                      std::span<const int> path,
                                      long long cap = kDefaultCap);

struct TypeCountReport {
  long long observed = 0;
  double bound = 0.0;  // (n - k + 1)^(|X|^(k+1))
  bool pass = false;
};

TypeCountReport type_count_bound(int n, int k, int alphabet_size,
                                 long long cap = kDefaultCap);

}  // namespace spectrascope
