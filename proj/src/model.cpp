#include "spectrascope/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spectrascope/coding.hpp"

namespace spectrascope {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;

void check_prob_vector(std::span<const double> probs, const char* what) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || p > 1.0 || !std::isfinite(p))
      throw Error(std::string(what) + ": entries must lie in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTol)
    throw Error(std::string(what) + ": probabilities sum to " + std::to_string(sum));
}

void check_path(const Model& model, std::span<const int> symbols) {
  if (symbols.empty()) throw Error("empty path");
  for (int s : symbols)
    if (s < 0 || s >= model.alphabet().size())
      throw Error("path symbol index out of range");
}

}  // namespace

double log_probability(const Model& model, const SamplePath& path) {
  if (!path.alphabet || *path.alphabet != model.alphabet())
    throw Error("path alphabet does not match model alphabet");
  check_path(model, path.symbols);
  return model.log_probability(path.symbols);
}

double self_information_rate(const Model& model, const SamplePath& path) {
  double lp = log_probability(model, path);
  if (lp == kNegInf) return kPosInf;
  return -lp / static_cast<double>(path.symbols.size());
}

SamplePath sample(const Model& model, int n, std::uint64_t seed) {
  if (n < 1) throw Error("sample: n must be >= 1");
  Rng rng(seed);
  SamplePath path;
  path.alphabet = model.alphabet_ptr();
  path.seed = seed;
  path.model_id = model.id();
  path.symbols.reserve(n);
  model.sample_into(path.symbols, n, rng);
  return path;
}

double conditional_entropy(const Model& model, int k, long long cap) {
  if (k < 0) throw Error("conditional_entropy: k must be >= 0");
  if (model.kind() == ModelKind::Mixture)
    throw Error("conditional_entropy requires an ergodic model, not a mixture");
  int a = model.alphabet().size();
  check_cap(ipow(a, k + 1), cap, "conditional_entropy");
  double h = 0.0;
  for_each_word(a, k + 1, [&](std::span<const int> word, long long) {
    double lp = model.log_probability(word);
    if (lp == kNegInf) return;
    double lp_prefix = k == 0 ? 0.0 : model.log_probability(word.subspan(0, k));
    h += std::exp2(lp) * (lp_prefix - lp);
  });
  return h;
}

// ---- IidModel ----

IidModel::IidModel(AlphabetPtr alphabet, std::vector<double> probs)
    : Model(std::move(alphabet)), probs_(std::move(probs)) {
  if (static_cast<int>(probs_.size()) != alphabet_->size())
    throw Error("iid: probability vector length must equal alphabet size");
  check_prob_vector(probs_, "iid probs");
}

double IidModel::log_probability(std::span<const int> symbols) const {
  check_path(*this, symbols);
  double lp = 0.0;
  for (int s : symbols) {
    if (probs_[s] == 0.0) return kNegInf;
    lp += std::log2(probs_[s]);
  }
  return lp;
}

void IidModel::sample_into(std::vector<int>& out, int n, Rng& rng) const {
  for (int i = 0; i < n; ++i) out.push_back(rng.next_discrete(probs_));
}

double IidModel::entropy_rate() const {
  double h = 0.0;
  for (double p : probs_)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

// ---- MarkovModel ----

MarkovModel::MarkovModel(AlphabetPtr alphabet, int order, std::vector<double> kernel)
    : Model(std::move(alphabet)), order_(order), kernel_(std::move(kernel)) {
  if (order_ < 1) throw Error("markov: order must be >= 1");
  int a = alphabet_->size();
  long long blocks = ipow(a, order_);
  check_cap(blocks, kDefaultCap, "markov state space");
  if (static_cast<long long>(kernel_.size()) != blocks * a)
    throw Error("markov: kernel must have |X|^k rows of |X| entries");
  for (long long b = 0; b < blocks; ++b)
    check_prob_vector(std::span<const double>(kernel_).subspan(b * a, a), "markov kernel row");
  check_ergodic_structure();

  // stationary k-block law by power iteration
  initial_.assign(blocks, 1.0 / static_cast<double>(blocks));
  std::vector<double> next(blocks);
  long long suffix_mod = ipow(a, order_ - 1);
  for (int iter = 0; iter < 200000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (long long b = 0; b < blocks; ++b) {
      if (initial_[b] == 0.0) continue;
      for (int s = 0; s < a; ++s) {
        double p = kernel_[b * a + s];
        if (p > 0.0) next[(b % suffix_mod) * a + s] += initial_[b] * p;
      }
    }
    double diff = 0.0;
    for (long long b = 0; b < blocks; ++b) diff += std::abs(next[b] - initial_[b]);
    initial_.swap(next);
    if (diff < 1e-14) break;
  }
  validate_stationary();
}

MarkovModel::MarkovModel(AlphabetPtr alphabet, int order, std::vector<double> kernel,
                         std::vector<double> initial)
    : Model(std::move(alphabet)), order_(order), kernel_(std::move(kernel)),
      initial_(std::move(initial)) {
  if (order_ < 1) throw Error("markov: order must be >= 1");
  int a = alphabet_->size();
  long long blocks = ipow(a, order_);
  if (static_cast<long long>(kernel_.size()) != blocks * a)
    throw Error("markov: kernel must have |X|^k rows of |X| entries");
  if (static_cast<long long>(initial_.size()) != blocks)
    throw Error("markov: initial distribution must cover X^k");
  for (long long b = 0; b < blocks; ++b)
    check_prob_vector(std::span<const double>(kernel_).subspan(b * a, a), "markov kernel row");
  check_prob_vector(initial_, "markov initial");
  check_ergodic_structure();
  validate_stationary();
}

void MarkovModel::validate_stationary() const {
  int a = alphabet_->size();
  long long blocks = static_cast<long long>(initial_.size());
  long long suffix_mod = blocks / a;
  std::vector<double> next(blocks, 0.0);
  for (long long b = 0; b < blocks; ++b)
    for (int s = 0; s < a; ++s)
      next[(b % suffix_mod) * a + s] += initial_[b] * kernel_[b * a + s];
  for (long long b = 0; b < blocks; ++b)
    if (std::abs(next[b] - initial_[b]) > kStationaryTol)
      throw Error("markov: initial distribution is not stationary for the kernel");
}

void MarkovModel::check_ergodic_structure() const {
  // The k-block graph must have exactly one closed communicating class and
  // that class must be aperiodic.
  int a = alphabet_->size();
  long long blocks = ipow(a, order_);
  long long suffix_mod = blocks / a;
  auto succ = [&](long long b, int s) { return (b % suffix_mod) * a + s; };

  // Kosaraju SCC on the positive-probability edge set.
  std::vector<std::vector<int>> radj(blocks);
  std::vector<int> order_stack;
  {
    std::vector<char> seen(blocks, 0);
    for (long long root = 0; root < blocks; ++root) {
      if (seen[root]) continue;
      std::vector<std::pair<long long, int>> stack{{root, 0}};
      seen[root] = 1;
      while (!stack.empty()) {
        auto& [b, si] = stack.back();
        if (si == a) {
          order_stack.push_back(static_cast<int>(b));
          stack.pop_back();
          continue;
        }
        int s = si++;
        if (kernel_[b * a + s] <= 0.0) continue;
        long long t = succ(b, s);
        radj[t].push_back(static_cast<int>(b));
        if (!seen[t]) {
          seen[t] = 1;
          stack.emplace_back(t, 0);
        }
      }
    }
  }
  std::vector<int> comp(blocks, -1);
  int num_comp = 0;
  for (auto it = order_stack.rbegin(); it != order_stack.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    std::vector<int> stack{*it};
    comp[*it] = num_comp;
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (int p : radj[b])
        if (comp[p] < 0) {
          comp[p] = num_comp;
          stack.push_back(p);
        }
    }
    ++num_comp;
  }
  std::vector<char> closed(num_comp, 1);
  for (long long b = 0; b < blocks; ++b)
    for (int s = 0; s < a; ++s)
      if (kernel_[b * a + s] > 0.0 && comp[succ(b, s)] != comp[b]) closed[comp[b]] = 0;
  int closed_count = 0, recurrent = -1;
  for (int c = 0; c < num_comp; ++c)
    if (closed[c]) {
      ++closed_count;
      recurrent = c;
    }
  if (closed_count != 1)
    throw Error("markov: kernel is not irreducible (multiple closed classes)");

  // period of the recurrent class via BFS level differences
  long long start = -1;
  for (long long b = 0; b < blocks && start < 0; ++b)
    if (comp[b] == recurrent) start = b;
  std::vector<long long> level(blocks, -1);
  level[start] = 0;
  std::vector<long long> queue{start};
  long long g = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    long long b = queue[qi];
    for (int s = 0; s < a; ++s) {
      if (kernel_[b * a + s] <= 0.0) continue;
      long long t = succ(b, s);
      if (comp[t] != recurrent) continue;
      if (level[t] < 0) {
        level[t] = level[b] + 1;
        queue.push_back(t);
      } else {
        g = std::gcd(g, std::abs(level[b] + 1 - level[t]));
      }
    }
  }
  if (g != 1) throw Error("markov: recurrent class is periodic; ergodicity required");
}

double MarkovModel::log_probability(std::span<const int> symbols) const {
  check_path(*this, symbols);
  int a = alphabet_->size();
  int n = static_cast<int>(symbols.size());
  if (n < order_) {
    // marginal of the initial k-block law over its first n coordinates;
    // blocks sharing a prefix are a contiguous index range
    long long tail = ipow(a, order_ - n);
    long long lo = word_to_index(symbols, a) * tail;
    double p = 0.0;
    for (long long b = lo; b < lo + tail; ++b) p += initial_[b];
    return p > 0.0 ? std::log2(p) : kNegInf;
  }
  long long prefix = word_to_index(symbols.subspan(0, order_), a);
  if (initial_[prefix] == 0.0) return kNegInf;
  double lp = std::log2(initial_[prefix]);
  long long suffix_mod = ipow(a, order_ - 1);
  for (int i = order_; i < n; ++i) {
    double p = kernel_[prefix * a + symbols[i]];
    if (p == 0.0) return kNegInf;
    lp += std::log2(p);
    prefix = (prefix % suffix_mod) * a + symbols[i];
  }
  return lp;
}

void MarkovModel::sample_into(std::vector<int>& out, int n, Rng& rng) const {
  int a = alphabet_->size();
  long long block = rng.next_discrete(initial_);
  std::vector<int> digits;
  index_to_word(block, order_, a, digits);
  for (int i = 0; i < std::min(n, order_); ++i) out.push_back(digits[i]);
  long long suffix_mod = ipow(a, order_ - 1);
  long long prefix = block;
  for (int i = order_; i < n; ++i) {
    int s = rng.next_discrete(std::span<const double>(kernel_).subspan(prefix * a, a));
    out.push_back(s);
    prefix = (prefix % suffix_mod) * a + s;
  }
}

double MarkovModel::entropy_rate() const {
  int a = alphabet_->size();
  double h = 0.0;
  for (size_t b = 0; b < initial_.size(); ++b) {
    if (initial_[b] == 0.0) continue;
    double row = 0.0;
    for (int s = 0; s < a; ++s) {
      double p = kernel_[b * a + s];
      if (p > 0.0) row -= p * std::log2(p);
    }
    h += initial_[b] * row;
  }
  return h;
}

// ---- FactorModel ----

FactorModel::FactorModel(ModelPtr base, std::shared_ptr<const SlidingBlockCode> code,
                         long long cap)
    : Model(code->output_ptr()), base_(std::move(base)), code_(std::move(code)) {
  if (base_->kind() != ModelKind::Iid && base_->kind() != ModelKind::Markov)
    throw Error("factor: base must be an iid or Markov model");
  if (base_->alphabet() != code_->input())
    throw Error("factor: code input alphabet must match base alphabet");
  int base_order = base_->kind() == ModelKind::Markov
                       ? static_cast<const MarkovModel&>(*base_).order()
                       : 0;
  window_ = std::max(code_->window_length(), base_order);
  int a = base_->alphabet().size();
  num_states_ = ipow(a, window_);
  check_cap(num_states_, cap, "factor lifted state space");

  init_state_log_.resize(num_states_);
  std::vector<int> word;
  for (long long s = 0; s < num_states_; ++s) {
    index_to_word(s, window_, a, word);
    init_state_log_[s] = base_->log_probability(word);
  }
}

int FactorModel::radius() const { return code_->radius(); }

int FactorModel::emit(long long state) const {
  // code window is the low-digit suffix of the lifted block
  return code_->map_window_index(state % code_->num_windows());
}

double FactorModel::step_prob(long long state, int next_symbol) const {
  int a = base_->alphabet().size();
  if (base_->kind() == ModelKind::Iid)
    return static_cast<const IidModel&>(*base_).probs()[next_symbol];
  const auto& markov = static_cast<const MarkovModel&>(*base_);
  long long prefix = state % ipow(a, markov.order());
  return markov.kernel_at(prefix, next_symbol);
}

double FactorModel::log_probability(std::span<const int> symbols) const {
  check_path(*this, symbols);
  int a = base_->alphabet().size();
  long long suffix_mod = num_states_ / a;
  std::vector<double> alpha(num_states_, kNegInf);
  for (long long s = 0; s < num_states_; ++s)
    if (emit(s) == symbols[0]) alpha[s] = init_state_log_[s];
  std::vector<double> next(num_states_);
  for (size_t i = 1; i < symbols.size(); ++i) {
    std::fill(next.begin(), next.end(), kNegInf);
    for (long long s = 0; s < num_states_; ++s) {
      if (alpha[s] == kNegInf) continue;
      long long stem = (s % suffix_mod) * a;
      for (int c = 0; c < a; ++c) {
        long long t = stem + c;
        if (emit(t) != symbols[i]) continue;
        double p = step_prob(s, c);
        if (p > 0.0) next[t] = log2_add(next[t], alpha[s] + std::log2(p));
      }
    }
    alpha.swap(next);
  }
  return log2_sum(alpha);
}

void FactorModel::sample_into(std::vector<int>& out, int n, Rng& rng) const {
  int l = code_->radius();
  std::vector<int> base_path;
  base_path.reserve(n + 2 * l);
  base_->sample_into(base_path, n + 2 * l, rng);
  int w = code_->window_length();
  for (int i = 0; i + w <= static_cast<int>(base_path.size()); ++i)
    out.push_back(code_->map_window(std::span<const int>(base_path).subspan(i, w)));
}

double FactorModel::conditional_block_log_prob(long long state,
                                               std::span<const int> y) const {
  if (y.empty()) return 0.0;
  if (emit(state) != y[0]) return kNegInf;
  int a = base_->alphabet().size();
  long long suffix_mod = num_states_ / a;
  std::vector<double> alpha(num_states_, kNegInf);
  alpha[state] = 0.0;
  std::vector<double> next(num_states_);
  for (size_t i = 1; i < y.size(); ++i) {
    std::fill(next.begin(), next.end(), kNegInf);
    for (long long s = 0; s < num_states_; ++s) {
      if (alpha[s] == kNegInf) continue;
      long long stem = (s % suffix_mod) * a;
      for (int c = 0; c < a; ++c) {
        long long t = stem + c;
        if (emit(t) != y[i]) continue;
        double p = step_prob(s, c);
        if (p > 0.0) next[t] = log2_add(next[t], alpha[s] + std::log2(p));
      }
    }
    alpha.swap(next);
  }
  return log2_sum(alpha);
}

EntropyBracket FactorModel::entropy_rate_bracket(int k, long long cap) const {
  double upper = conditional_entropy(*this, k, cap);
  // lower bound: condition additionally on the initial lifted base block
  int ay = alphabet_->size();
  check_cap(ipow(ay, k + 1) * num_states_, cap, "factor entropy bracket");
  double lower = 0.0;
  std::vector<int> word;
  for (long long s = 0; s < num_states_; ++s) {
    double ps = std::exp2(init_state_log_[s]);
    if (ps == 0.0) continue;
    for_each_word(ay, k + 1, [&](std::span<const int> y, long long) {
      double lp_full = conditional_block_log_prob(s, y);
      if (lp_full == kNegInf) return;
      double lp_prefix = k == 0 ? 0.0 : conditional_block_log_prob(s, y.subspan(0, k));
      lower += ps * std::exp2(lp_full) * (lp_prefix - lp_full);
    });
  }
  return EntropyBracket{lower, upper};
}

// ---- MixtureModel ----

MixtureModel::MixtureModel(std::vector<ModelPtr> components, std::vector<double> weights)
    : Model(components.empty() ? nullptr : components.front()->alphabet_ptr()),
      components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw Error("mixture: at least one component required");
  if (components_.size() != weights_.size())
    throw Error("mixture: component and weight counts differ");
  check_prob_vector(weights_, "mixture weights");
  for (const auto& c : components_) {
    if (c->kind() == ModelKind::Mixture)
      throw Error("mixture: components must be ergodic, not nested mixtures");
    if (c->alphabet() != *alphabet_)
      throw Error("mixture: all components must share one alphabet");
  }
}

double MixtureModel::log_probability(std::span<const int> symbols) const {
  check_path(*this, symbols);
  std::vector<double> terms;
  terms.reserve(components_.size());
  for (size_t i = 0; i < components_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    terms.push_back(std::log2(weights_[i]) + components_[i]->log_probability(symbols));
  }
  return log2_sum(terms);
}

int MixtureModel::sample_with_component(std::vector<int>& out, int n, Rng& rng) const {
  int theta = rng.next_discrete(weights_);
  components_[theta]->sample_into(out, n, rng);
  return theta;
}

void MixtureModel::sample_into(std::vector<int>& out, int n, Rng& rng) const {
  sample_with_component(out, n, rng);
}

// ---- convenience constructors ----

ModelPtr make_iid(std::vector<double> probs, AlphabetPtr alphabet) {
  if (!alphabet) {
    std::vector<std::string> labels;
    for (size_t i = 0; i < probs.size(); ++i) labels.push_back(std::to_string(i));
    alphabet = std::make_shared<Alphabet>(std::move(labels));
  }
  return std::make_shared<IidModel>(std::move(alphabet), std::move(probs));
}

ModelPtr make_bernoulli(double p_one) {
  return std::make_shared<IidModel>(binary_alphabet(),
                                    std::vector<double>{1.0 - p_one, p_one});
}

ModelPtr make_binary_flip_markov(double flip_prob) {
  double q = flip_prob;
  return std::make_shared<MarkovModel>(binary_alphabet(), 1,
                                       std::vector<double>{1.0 - q, q, q, 1.0 - q});
}

}  // namespace spectrascope
