#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace eex {

// Deterministic RNG helpers. All sampling used for generation and folding
// goes through these so that a seed pins the output bit-for-bit; we avoid
// std::uniform_int_distribution and friends because their output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return std::ldexp(static_cast<double>(next() >> 11), -53); }

  // Uniform in [0, n). Rejection sampling keeps it unbiased.
  uint64_t bounded(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Knuth's method; fine for the small means used here.
  int poisson(double mean) {
    const double limit = std::exp(-mean);
    double prod = 1.0;
    int k = 0;
    do {
      ++k;
      prod *= uniform();
    } while (prod > limit);
    return k - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[bounded(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Sampling from a fixed discrete distribution via its cumulative table.
class CumulativeSampler {
 public:
  explicit CumulativeSampler(const std::vector<double>& weights) {
    cdf_.reserve(weights.size());
    double total = 0.0;
    for (double w : weights) {
      total += w;
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
  }

  int sample(Rng& rng) const {
    const double u = rng.uniform();
    size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      const size_t mid = (lo + hi) / 2;
      if (cdf_[mid] <= u) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return static_cast<int>(lo);
  }

  const std::vector<double>& cdf() const { return cdf_; }

 private:
  std::vector<double> cdf_;
};

}  // namespace eex
