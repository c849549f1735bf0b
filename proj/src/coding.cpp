#include "spectrascope/coding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spectrascope {

SlidingBlockCode::SlidingBlockCode(AlphabetPtr input, AlphabetPtr output, int radius,
                                   std::vector<int> table)
    : input_(std::move(input)), output_(std::move(output)), radius_(radius),
      table_(std::move(table)) {
  if (radius_ < 0) throw Error("code: radius must be >= 0");
  long long windows = ipow(input_->size(), 2 * radius_ + 1);
  if (static_cast<long long>(table_.size()) != windows)
    throw Error("code: table must be total over all |X|^(2l+1) windows");
  for (int y : table_)
    if (y < 0 || y >= output_->size()) throw Error("code: table output symbol out of range");
}

SamplePath apply_code(const SlidingBlockCode& code, const SamplePath& path,
                      BoundaryPolicy policy) {
  if (!path.alphabet || *path.alphabet != code.input())
    throw Error("apply_code: path alphabet does not match code input");
  int n = path.length();
  int w = code.window_length();
  if (n < w) {
    throw Error(policy == BoundaryPolicy::Exact
                    ? "apply_code: exact policy requires the 2l boundary symbols"
                    : "apply_code: path shorter than the code window");
  }
  SamplePath out;
  out.alphabet = code.output_ptr();
  out.seed = path.seed;
  out.model_id = path.model_id + ":coded";
  out.symbols.reserve(n - w + 1);
  for (int i = 0; i + w <= n; ++i)
    out.symbols.push_back(
        code.map_window(std::span<const int>(path.symbols).subspan(i, w)));
  return out;
}

ModelPtr pushforward_model(CodePtr code, ModelPtr base, long long cap) {
  return std::make_shared<FactorModel>(std::move(base), std::move(code), cap);
}

namespace {

// stationary probability of an input window, from the base model
double window_prob(const Model& base, std::span<const int> window) {
  double lp = base.log_probability(window);
  return lp == kNegInf ? 0.0 : std::exp2(lp);
}

int centered_symbol(const SlidingBlockCode& code, std::span<const int> window,
                    int full_radius) {
  int off = full_radius - code.radius();
  return code.map_window(window.subspan(off, code.window_length()));
}

}  // namespace

double mismatch_rate_exact(const SlidingBlockCode& code, const SlidingBlockCode& reference,
                           const Model& base, long long cap) {
  if (code.input() != reference.input())
    throw Error("mismatch_rate: codes have different input alphabets");
  if (base.alphabet() != code.input())
    throw Error("mismatch_rate: base alphabet does not match code input");
  int radius = std::max(code.radius(), reference.radius());
  int len = 2 * radius + 1;
  check_cap(ipow(base.alphabet().size(), len), cap, "mismatch_rate");
  double rate = 0.0;
  for_each_word(base.alphabet().size(), len, [&](std::span<const int> window, long long) {
    if (centered_symbol(code, window, radius) != centered_symbol(reference, window, radius))
      rate += window_prob(base, window);
  });
  return rate;
}

double mismatch_rate_monte_carlo(const SlidingBlockCode& code,
                                 const SlidingBlockCode& reference, const Model& base,
                                 long long num_samples, std::uint64_t seed) {
  if (code.input() != reference.input())
    throw Error("mismatch_rate: codes have different input alphabets");
  int radius = std::max(code.radius(), reference.radius());
  int len = 2 * radius + 1;
  long long mismatches = 0;
  std::vector<int> window;
  for (long long j = 0; j < num_samples; ++j) {
    window.clear();
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    base.sample_into(window, len, rng);
    if (centered_symbol(code, window, radius) != centered_symbol(reference, window, radius))
      ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(num_samples);
}

Coupling build_coupling(ModelPtr base, CodePtr code, int n, long long cap) {
  if (n < 0) throw Error("coupling: n must be >= 0");
  if (base->alphabet() != code->input())
    throw Error("coupling: base alphabet does not match code input");
  Coupling c;
  c.n = n;
  c.m = n + code->radius();
  c.base = base;
  c.code = code;
  int a = base->alphabet().size();
  int big = c.x_block_length();
  long long num_x = ipow(a, big);
  check_cap(num_x, cap, "coupling");
  c.x_prob.resize(num_x);
  c.y_image.resize(num_x);
  int w = code->window_length();
  int ay = code->output().size();
  for_each_word(a, big, [&](std::span<const int> x, long long idx) {
    c.x_prob[idx] = window_prob(*base, x);
    long long y = 0;
    for (int i = 0; i + w <= big; ++i) y = y * ay + code->map_window(x.subspan(i, w));
    c.y_image[idx] = y;
  });
  return c;
}

std::vector<std::pair<long long, double>> coupling_y_marginal(const Coupling& coupling) {
  std::map<long long, double> marg;
  for (size_t i = 0; i < coupling.x_prob.size(); ++i)
    if (coupling.x_prob[i] > 0.0) marg[coupling.y_image[i]] += coupling.x_prob[i];
  return {marg.begin(), marg.end()};
}

ChangeOfMeasureReport verify_change_of_measure(const Model& component,
                                               const MixtureModel& mixture, int n,
                                               double gamma, long long cap) {
  if (gamma <= 0.0) throw Error("change_of_measure: gamma must be positive");
  if (component.alphabet() != mixture.alphabet())
    throw Error("change_of_measure: alphabets differ");
  check_cap(ipow(mixture.alphabet().size(), n), cap, "change_of_measure");
  ChangeOfMeasureReport report;
  for_each_word(mixture.alphabet().size(), n, [&](std::span<const int> x, long long) {
    double lp_theta = component.log_probability(x);
    if (lp_theta == kNegInf) return;
    double lp_mix = mixture.log_probability(x);
    if ((lp_theta - lp_mix) / static_cast<double>(n) <= -gamma)
      report.lhs += std::exp2(lp_theta);
  });
  report.bound = std::exp2(-static_cast<double>(n) * gamma);
  report.pass = report.lhs <= report.bound + 1e-12;
  return report;
}

FiniteBoundReport verify_finite_bound(const Coupling& coupling, double tau, double gamma,
                                      double beta, double epsilon) {
  if (beta <= 0.0 || beta >= 0.5)
    throw Error("finite_bound: beta must lie in (0, 1/2)");
  if (gamma <= 0.0) throw Error("finite_bound: gamma must be positive");
  double n_out = static_cast<double>(coupling.y_block_length());
  FiniteBoundReport r;
  std::map<long long, double> y_marg;
  for (size_t i = 0; i < coupling.x_prob.size(); ++i) {
    double p = coupling.x_prob[i];
    if (p == 0.0) continue;
    if (-std::log2(p) / n_out <= tau + gamma) r.lhs += p;
    y_marg[coupling.y_image[i]] += p;
  }
  for (const auto& [y, p] : y_marg)
    if (-std::log2(p) / n_out <= tau + 2.0 * gamma) r.rhs_spectrum += p;
  r.rhs_mismatch = epsilon / beta;
  double log2_ay = std::log2(static_cast<double>(coupling.code->output().size()));
  r.exponent = gamma - binary_entropy(beta) - beta * log2_ay;
  r.rhs_counting = std::exp2(-n_out * r.exponent);
  r.trivially_pass = r.exponent <= 0.0;
  r.pass = r.lhs <= r.rhs() + 1e-12;
  return r;
}

FiniteBoundReport verify_finite_bound(ModelPtr base, CodePtr code, int n, double tau,
                                      double gamma, double beta, long long cap) {
  return verify_finite_bound(build_coupling(std::move(base), std::move(code), n, cap),
                             tau, gamma, beta);
}

HammingBallReport hamming_ball_bound_check(int block_length, double beta,
                                           int alphabet_size) {
  if (beta < 0.0 || beta >= 0.5) throw Error("hamming_ball: beta must lie in [0, 1/2)");
  if (block_length < 1 || block_length > 40)
    throw Error("hamming_ball: block length out of supported range");
  HammingBallReport r;
  long long radius = static_cast<long long>(std::floor(beta * block_length));
  long long binom = 1;  // C(N, i), updated incrementally
  long long surface = 1;
  r.count = 1;
  for (long long i = 1; i <= radius; ++i) {
    binom = binom * (block_length - i + 1) / i;
    surface = binom;
    for (long long j = 0; j < i; ++j) surface *= (alphabet_size - 1);
    r.count += surface;
  }
  r.bound = std::pow(static_cast<double>(alphabet_size),
                     static_cast<double>(block_length) * beta) *
            std::exp2(block_length * binary_entropy(beta));
  r.pass = static_cast<double>(r.count) <= r.bound * (1.0 + 1e-12);
  return r;
}

CodePtr identity_code(AlphabetPtr alphabet) {
  std::vector<int> table(alphabet->size());
  for (int i = 0; i < alphabet->size(); ++i) table[i] = i;
  return std::make_shared<SlidingBlockCode>(alphabet, alphabet, 0, std::move(table));
}

CodePtr binary_flip_code() {
  auto alpha = binary_alphabet();
  return std::make_shared<SlidingBlockCode>(alpha, alpha, 0, std::vector<int>{1, 0});
}

CodePtr constant_code(AlphabetPtr input, AlphabetPtr output, int symbol) {
  if (symbol < 0 || symbol >= output->size())
    throw Error("constant_code: symbol out of range");
  return std::make_shared<SlidingBlockCode>(
      input, output, 0, std::vector<int>(input->size(), symbol));
}

CodePtr xor3_code() {
  auto alpha = binary_alphabet();
  std::vector<int> table(8);
  for (int w = 0; w < 8; ++w)
    table[w] = ((w >> 2) ^ (w >> 1) ^ w) & 1;
  return std::make_shared<SlidingBlockCode>(alpha, alpha, 1, std::move(table));
}

}  // namespace spectrascope
