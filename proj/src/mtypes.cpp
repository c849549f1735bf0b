#include "spectrascope/mtypes.hpp"

#include <cmath>
#include <set>
#include <string>

namespace spectrascope {

MarkovType markov_type(std::span<const int> path, int k, int alphabet_size) {
  int n = static_cast<int>(path.size());
  if (n <= k) throw Error("markov_type: path length must exceed k");
  MarkovType type;
  type.k = k;
  type.windows = n - k;
  for (int i = 0; i + k < n; ++i) {
    long long idx = word_to_index(path.subspan(i, k + 1), alphabet_size);
    ++type.counts[idx];
  }
  return type;
}

std::vector<std::vector<int>> type_class(int n, int k, const MarkovType& type,
                                         int alphabet_size, long long cap) {
  check_cap(ipow(alphabet_size, n), cap, "type_class");
  std::vector<std::vector<int>> members;
  for_each_word(alphabet_size, n, [&](std::span<const int> word, long long) {
    if (markov_type(word, k, alphabet_size) == type)
      members.emplace_back(word.begin(), word.end());
  });
  return members;
}

MarkovApproximation markov_approximation(const Model& model, int k, long long cap) {
  if (k < 1) throw Error("markov_approximation: k must be >= 1");
  if (model.kind() == ModelKind::Mixture)
    throw Error("markov_approximation: model must be ergodic");
  int a = model.alphabet().size();
  long long prefixes = ipow(a, k);
  check_cap(prefixes * a, cap, "markov_approximation");
  MarkovApproximation approx;
  approx.k = k;
  approx.alphabet_size = a;
  approx.prefix_prob.resize(prefixes);
  approx.conditional.assign(prefixes * a, std::nan(""));
  std::vector<int> word;
  for (long long p = 0; p < prefixes; ++p) {
    index_to_word(p, k, a, word);
    double lp = model.log_probability(word);
    approx.prefix_prob[p] = lp == kNegInf ? 0.0 : std::exp2(lp);
    if (approx.prefix_prob[p] == 0.0) continue;
    word.push_back(0);
    for (int s = 0; s < a; ++s) {
      word[k] = s;
      double lb = model.log_probability(word);
      approx.conditional[p * a + s] =
          lb == kNegInf ? 0.0 : std::exp2(lb) / approx.prefix_prob[p];
    }
    word.pop_back();
  }
  return approx;
}

double approx_log_probability(const MarkovApproximation& approx,
                              std::span<const int> path) {
  int k = approx.k;
  int a = approx.alphabet_size;
  int n = static_cast<int>(path.size());
  if (n <= k) throw Error("approx_log_probability: path length must exceed k");
  long long prefix = word_to_index(path.subspan(0, k), a);
  long long suffix_mod = ipow(a, k - 1);
  double lp = 0.0;
  for (int i = k; i < n; ++i) {
    if (!approx.defined(prefix))
      throw Error("approx_log_probability: conditioning block has probability zero");
    double p = approx.conditional[prefix * a + path[i]];
    if (p == 0.0) return kNegInf;
    lp += std::log2(p);
    prefix = (prefix % suffix_mod) * a + path[i];
  }
  return lp;
}

double mixture_approx_log_probability(const MixtureModel& mixture, int k,
                                      std::span<const int> path, long long cap) {
  std::vector<double> terms;
  for (size_t i = 0; i < mixture.num_components(); ++i) {
    double w = mixture.weights()[i];
    if (w == 0.0) continue;
    auto approx = markov_approximation(mixture.component(i), k, cap);
    terms.push_back(std::log2(w) + approx_log_probability(approx, path));
  }
  return log2_sum(terms);
}

TypeCountReport type_count_bound(int n, int k, int alphabet_size, long long cap) {
  if (n <= k) throw Error("type_count_bound: n must exceed k");
  check_cap(ipow(alphabet_size, n), cap, "type_count_bound");
  TypeCountReport r;
  std::set<std::string> seen;
  for_each_word(alphabet_size, n, [&](std::span<const int> word, long long) {
    MarkovType t = markov_type(word, k, alphabet_size);
    std::string key;
    for (const auto& [block, count] : t.counts)
      key += std::to_string(block) + ":" + std::to_string(count) + ";";
    seen.insert(std::move(key));
  });
  r.observed = static_cast<long long>(seen.size());
  r.bound = std::pow(static_cast<double>(n - k + 1),
                     static_cast<double>(ipow(alphabet_size, k + 1)));
  r.pass = static_cast<double>(r.observed) <= r.bound;
  return r;
}

}  // namespace spectrascope
