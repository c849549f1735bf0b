#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectrascope/core.hpp"

namespace spectrascope {

class Model;
using ModelPtr = std::shared_ptr<const Model>;

enum class ModelKind { Iid, Markov, Factor, Mixture };

/// A finite-alphabet stationary process model. Immutable after construction;
/// safe to share across threads.
class Model {
 public:
  virtual ~Model() = default;

  const Alphabet& alphabet() const { return *alphabet_; }
  AlphabetPtr alphabet_ptr() const { return alphabet_; }
  virtual ModelKind kind() const = 0;
  virtual std::string id() const = 0;

  /// Exact log2 P(x_1^n), <= 0 or -inf.
  virtual double log_probability(std::span<const int> symbols) const = 0;

  /// Appends n symbols drawn from the stationary law.
  virtual void sample_into(std::vector<int>& out, int n, Rng& rng) const = 0;

  /// Exact entropy rate in bits. Throws for kinds without a closed form
  /// (Factor reports a bracket instead, Mixture goes through `spectrum`).
  virtual double entropy_rate() const = 0;

 protected:
  explicit Model(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}
  AlphabetPtr alphabet_;
};

double log_probability(const Model& model, const SamplePath& path);

/// Normalized self-information (1/n) log2 1/P(x_1^n); +inf iff probability 0.
double self_information_rate(const Model& model, const SamplePath& path);

SamplePath sample(const Model& model, int n, std::uint64_t seed);

/// H(X_{k+1} | X_1^k) by exact enumeration of X^(k+1). k = 0 gives H(X_1).
double conditional_entropy(const Model& model, int k, long long cap = kDefaultCap);

class IidModel final : public Model {
 public:
  IidModel(AlphabetPtr alphabet, std::vector<double> probs);

  ModelKind kind() const override { return ModelKind::Iid; }
  std::string id() const override { return "iid"; }
  double log_probability(std::span<const int> symbols) const override;
  void sample_into(std::vector<int>& out, int n, Rng& rng) const override;
  double entropy_rate() const override;

  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

class MarkovModel final : public Model {
 public:
  /// `kernel` is row-major: kernel[prefix_index * |X| + next]. The stationary
  /// initial distribution over X^k is solved by power iteration (tol 1e-12);
  /// kernels whose k-block graph has more than one closed communicating
  /// class, or a periodic one, are rejected.
  MarkovModel(AlphabetPtr alphabet, int order, std::vector<double> kernel);

  /// Explicit initial distribution; must satisfy the stationarity fixed
  /// point within 1e-10.
  MarkovModel(AlphabetPtr alphabet, int order, std::vector<double> kernel,
              std::vector<double> initial);

  ModelKind kind() const override { return ModelKind::Markov; }
  std::string id() const override { return "markov"; }
  double log_probability(std::span<const int> symbols) const override;
  void sample_into(std::vector<int>& out, int n, Rng& rng) const override;

  /// Sum over k-blocks of pi(b) * H(kernel row b); exact.
  double entropy_rate() const override;

  int order() const { return order_; }
  const std::vector<double>& kernel() const { return kernel_; }
  const std::vector<double>& initial() const { return initial_; }
  double kernel_at(long long prefix, int next) const {
    return kernel_[prefix * alphabet_->size() + next];
  }

 private:
  void validate_stationary() const;
  void check_ergodic_structure() const;

  int order_;
  std::vector<double> kernel_;
  std::vector<double> initial_;  // over X^order
};

class SlidingBlockCode;  // coding.hpp

struct EntropyBracket {
  double lower;
  double upper;
  double gap() const { return upper - lower; }
};

/// Sliding-block image of an i.i.d. or Markov base. Exact log-probabilities
/// via a log-domain forward recursion over lifted base blocks.
class FactorModel final : public Model {
 public:
  FactorModel(ModelPtr base, std::shared_ptr<const SlidingBlockCode> code,
              long long cap = kDefaultCap);

  ModelKind kind() const override { return ModelKind::Factor; }
  std::string id() const override { return "factor"; }
  double log_probability(std::span<const int> symbols) const override;
  void sample_into(std::vector<int>& out, int n, Rng& rng) const override;
  double entropy_rate() const override {
    throw Error("factor model has no closed-form entropy rate; use entropy_rate_bracket");
  }

  /// Certified bracket at order k: upper = H(Y_{k+1}|Y_1^k), lower =
  /// H(Y_{k+1}|Y_1^k, S_1) with S_1 the lifted base block at time 1.
  EntropyBracket entropy_rate_bracket(int k, long long cap = kDefaultCap) const;

  const Model& base() const { return *base_; }
  ModelPtr base_ptr() const { return base_; }
  const SlidingBlockCode& code() const { return *code_; }
  int radius() const;

  /// P(y_1^len | S_1 = state), forward recursion conditioned on the initial
  /// lifted block.
  double conditional_block_log_prob(long long state, std::span<const int> y) const;

 private:
  int emit(long long state) const;
  double step_prob(long long state, int next_symbol) const;

  ModelPtr base_;
  std::shared_ptr<const SlidingBlockCode> code_;
  int window_;             // lifted block length, max(2l+1, base order)
  long long num_states_;   // |X|^window
  std::vector<double> init_state_log_;  // stationary window-block law, log2
};

class MixtureModel final : public Model {
 public:
  /// One-level ergodic decomposition: components must not be mixtures.
  MixtureModel(std::vector<ModelPtr> components, std::vector<double> weights);

  ModelKind kind() const override { return ModelKind::Mixture; }
  std::string id() const override { return "mixture"; }

  /// log-sum-exp over components shifted by log2 weights.
  double log_probability(std::span<const int> symbols) const override;
  void sample_into(std::vector<int>& out, int n, Rng& rng) const override;
  double entropy_rate() const override {
    throw Error("entropy rate of a mixture is reported via the spectrum integral identity");
  }

  /// Draws theta ~ w, then samples that component; reports theta.
  int sample_with_component(std::vector<int>& out, int n, Rng& rng) const;

  size_t num_components() const { return components_.size(); }
  const Model& component(size_t i) const { return *components_.at(i); }
  ModelPtr component_ptr(size_t i) const { return components_.at(i); }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<ModelPtr> components_;
  std::vector<double> weights_;
};

// convenience constructors used all over the tests and bundled demos
ModelPtr make_iid(std::vector<double> probs, AlphabetPtr alphabet = nullptr);
ModelPtr make_bernoulli(double p_one);
/// Symmetric binary Markov chain: P(flip) = flip_prob.
ModelPtr make_binary_flip_markov(double flip_prob);

}  // namespace spectrascope
