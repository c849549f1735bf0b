#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectrascope {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration would exceed the configured state cap.
struct CapExceeded : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr long long kDefaultCap = 1LL << 20;

/// Ordered finite symbol set with label <-> index bijection.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw Error("alphabet must have at least one symbol");
    for (size_t i = 0; i < labels_.size(); ++i)
      for (size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j]) throw Error("alphabet labels must be unique");
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  int index(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<int>(i);
    throw Error("unknown symbol label: " + label);
  }

  bool operator==(const Alphabet& o) const { return labels_ == o.labels_; }
  bool operator!=(const Alphabet& o) const { return !(*this == o); }

 private:
  std::vector<std::string> labels_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr binary_alphabet() {
  return std::make_shared<Alphabet>(std::vector<std::string>{"0", "1"});
}

/// Finite realization of a process, with sampling provenance.
struct SamplePath {
  AlphabetPtr alphabet;
  std::vector<int> symbols;
  std::uint64_t seed = 0;
  std::string model_id;

  int length() const { return static_cast<int>(symbols.size()); }
};

// ---- word indexing (most significant digit first) ----

inline long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1LL << 62) / (base > 0 ? base : 1)) throw Error("ipow overflow");
    r *= base;
  }
  return r;
}

inline long long word_to_index(std::span<const int> word, int alphabet_size) {
  long long idx = 0;
  for (int s : word) idx = idx * alphabet_size + s;
  return idx;
}

inline void index_to_word(long long idx, int len, int alphabet_size, std::vector<int>& out) {
  out.assign(len, 0);
  for (int i = len - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % alphabet_size);
    idx /= alphabet_size;
  }
}

/// Calls fn(word, index) for every word in {0..A-1}^len, lexicographic order.
template <typename F>
void for_each_word(int alphabet_size, int len, F&& fn) {
  std::vector<int> word(len, 0);
  long long total = ipow(alphabet_size, len);
  for (long long idx = 0; idx < total; ++idx) {
    fn(std::span<const int>(word), idx);
    for (int i = len - 1; i >= 0; --i) {
      if (++word[i] < alphabet_size) break;
      word[i] = 0;
    }
  }
}

inline void check_cap(long long states, long long cap, const char* what) {
  if (states > cap)
    throw CapExceeded(std::string(what) + ": " + std::to_string(states) +
                      " states exceeds cap " + std::to_string(cap));
}

// ---- log-domain arithmetic (base 2 throughout) ----

inline double log2_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log2(1.0 + std::exp2(b - a));
}

inline double log2_sum(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp2(x - m);
  return m + std::log2(s);
}

inline double binary_entropy(double beta) {
  if (beta < 0.0 || beta > 1.0) throw Error("binary_entropy: argument outside [0,1]");
  if (beta == 0.0 || beta == 1.0) return 0.0;
  return -beta * std::log2(beta) - (1.0 - beta) * std::log2(1.0 - beta);
}

inline int hamming_distance(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error("hamming_distance: length mismatch");
  int d = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) ++d;
  return d;
}

// ---- deterministic RNG with substream derivation ----
//
// Substream seeds are derived as splitmix64(seed ^ golden * (index + 1)), so
// any (seed, path index) pair maps to the same generator state regardless of
// how paths are distributed over workers.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

/// xoshiro-free minimal generator: splitmix64 sequence, enough for sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x853c49e6748fea9bULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Index drawn from an explicit probability vector by CDF walk.
  int next_discrete(std::span<const double> probs) {
    double u = next_double();
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

/// Rounds to 9 significant digits; all serialized floats go through this so
/// outputs are byte-identical across reruns.
inline double round9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace spectrascope
