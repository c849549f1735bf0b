#pragma once

#include <memory>
#include <span>
#include <vector>

#include "spectrascope/core.hpp"
#include "spectrascope/model.hpp"

namespace spectrascope {

/// Finite-window stationary coding: y_i = f(x_{i-l}^{i+l}). The table is
/// total over all |X|^(2l+1) windows, indexed with the leftmost window
/// symbol most significant.
class SlidingBlockCode {
 public:
  SlidingBlockCode(AlphabetPtr input, AlphabetPtr output, int radius,
                   std::vector<int> table);

  const Alphabet& input() const { return *input_; }
  const Alphabet& output() const { return *output_; }
  AlphabetPtr input_ptr() const { return input_; }
  AlphabetPtr output_ptr() const { return output_; }
  int radius() const { return radius_; }
  int window_length() const { return 2 * radius_ + 1; }
  long long num_windows() const { return static_cast<long long>(table_.size()); }

  int map_window_index(long long idx) const { return table_[idx]; }
  int map_window(std::span<const int> window) const {
    return table_[word_to_index(window, input_->size())];
  }

 private:
  AlphabetPtr input_;
  AlphabetPtr output_;
  int radius_;
  std::vector<int> table_;
};

using CodePtr = std::shared_ptr<const SlidingBlockCode>;

enum class BoundaryPolicy {
  Truncate,  // output length n - 2l
  Exact,     // caller supplied the 2l boundary symbols; same windows, but a
             // path shorter than 2l+1 is rejected with a distinct message
};

SamplePath apply_code(const SlidingBlockCode& code, const SamplePath& path,
                      BoundaryPolicy policy = BoundaryPolicy::Truncate);

/// Factor model whose log_probability implements exact P(y^n) by the forward
/// recursion over lifted base blocks.
ModelPtr pushforward_model(CodePtr code, ModelPtr base, long long cap = kDefaultCap);

/// Exact Pr over the stationary window law that the two codes disagree at
/// the origin symbol.
double mismatch_rate_exact(const SlidingBlockCode& code, const SlidingBlockCode& reference,
                           const Model& base, long long cap = kDefaultCap);

/// Monte Carlo estimate of the same probability.
double mismatch_rate_monte_carlo(const SlidingBlockCode& code,
                                 const SlidingBlockCode& reference, const Model& base,
                                 long long num_samples, std::uint64_t seed);

/// Exact joint law of (X_{-m}^m, Y_{-n}^n) with m = n + l, induced by a base
/// process and a deterministic sliding-block code. Enumerated at small scale.
struct Coupling {
  int n = 0;
  int m = 0;
  CodePtr code;
  ModelPtr base;
  std::vector<double> x_prob;       // over X^(2m+1), indexed by x word
  std::vector<long long> y_image;   // x word index -> image word index over Y^(2n+1)

  int x_block_length() const { return 2 * m + 1; }
  int y_block_length() const { return 2 * n + 1; }
};

Coupling build_coupling(ModelPtr base, CodePtr code, int n, long long cap = kDefaultCap);

/// Y-marginal of the coupling, as a map image word index -> probability
/// (equals the pushforward block distribution).
std::vector<std::pair<long long, double>> coupling_y_marginal(const Coupling& coupling);

struct ChangeOfMeasureReport {
  double lhs = 0.0;    // Pr under the component that (1/n) log P_theta/P <= -gamma
  double bound = 0.0;  // 2^(-n gamma)
  bool pass = false;
};

ChangeOfMeasureReport verify_change_of_measure(const Model& component,
                                               const MixtureModel& mixture, int n,
                                               double gamma, long long cap = kDefaultCap);

struct FiniteBoundReport {
  double lhs = 0.0;            // Pr((1/N) log 1/P_X(X_-m^m) <= tau + gamma)
  double rhs_spectrum = 0.0;   // Pr((1/N) log 1/P_Y(Y_-n^n) <= tau + 2 gamma)
  double rhs_mismatch = 0.0;   // epsilon / beta
  double rhs_counting = 0.0;   // 2^(-N(gamma - h(beta) - beta log2 |Y|))
  double exponent = 0.0;       // gamma - h(beta) - beta log2 |Y|
  bool trivially_pass = false; // counting term >= 1, bound uninformative
  bool pass = false;

  double rhs() const { return rhs_spectrum + rhs_mismatch + rhs_counting; }
};

/// Exhaustive check of the finite-n spectrum comparison bound, with Y the
/// exact image of the code (epsilon = 0 unless overridden).
FiniteBoundReport verify_finite_bound(const Coupling& coupling, double tau, double gamma,
                                      double beta, double epsilon = 0.0);

FiniteBoundReport verify_finite_bound(ModelPtr base, CodePtr code, int n, double tau,
                                      double gamma, double beta,
                                      long long cap = kDefaultCap);

struct HammingBallReport {
  long long count = 0;  // ball size, independent of the center
  double bound = 0.0;   // |Y|^(N beta) * 2^(N h(beta))
  bool pass = false;
};

HammingBallReport hamming_ball_bound_check(int block_length, double beta,
                                           int alphabet_size);

// common small codes
CodePtr identity_code(AlphabetPtr alphabet);
CodePtr binary_flip_code();
CodePtr constant_code(AlphabetPtr input, AlphabetPtr output, int symbol);
/// l = 1 window parity over a binary alphabet.
CodePtr xor3_code();

}  // namespace spectrascope
