#pragma once

/**
 * @file rng.hpp
 * @brief Counter-based random bits.
 *
 * Output k of the stream with key s is mix(s + (k + 1) * 0x9E3779B97F4A7C15)
 * where mix is the SplitMix64 finalizer. A stream is a pure function of
 * (key, counter), so replication i of a run draws from the key
 * derive_seed(master, i) no matter which worker executes it.
 */

#include <cstdint>
#include <limits>

namespace lep {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of replication `index` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index * kGolden + 0xD1B54A32D192ED03ULL));
}

/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t counter() const { return counter_; }
  /// Independent child stream, e.g. for one stage of a replication.
  constexpr CounterRng split(std::uint64_t tag) const { return CounterRng(derive_seed(key_, tag)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_{0};
};

}  // namespace lep
