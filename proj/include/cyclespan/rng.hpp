#pragma once

#include <cstdint>
#include <random>

namespace cyclespan {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `master_seed`:
///   splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019))
constexpr std::uint64_t mix_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^
                    splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Random stream identified by (master_seed, stream_index). Two streams with
/// the same identity produce identical sequences.
class SeededStream {
 public:
  using engine_type = std::mt19937_64;

  explicit SeededStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
      : master_seed_(master_seed), stream_index_(stream_index),
        engine_(mix_stream_seed(master_seed, stream_index)) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  engine_type& engine() { return engine_; }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  /// Uniform real in [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Number of failures before the first success of Bernoulli(p) trials.
  /// Returns UINT64_MAX when p == 0.
  std::uint64_t geometric_gap(double p);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  engine_type engine_;
};

}  // namespace cyclespan
