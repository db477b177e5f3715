#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gard {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a master seed and a key path,
/// e.g. derive_seed(master, {experiment, fraction_index, trial_index}).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

/// The single generator type used by every sampler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  /// Uniform on the open interval (lo, hi).
  double uniform_open(double lo, double hi);
  double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(engine_); }
  double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
  bool coin() { return std::bernoulli_distribution(0.5)(engine_); }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gard
