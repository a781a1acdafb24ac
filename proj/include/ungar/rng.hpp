#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace ungar {

/// SplitMix64 output function. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child stream key from a parent seed and a path of indices.
///
/// Stream derivation used throughout the library:
///   replica r of a Monte Carlo batch     -> derive_seed(seed, {r})
///   named Bernoulli stream draw          -> derive_seed(seed, {stream, label, step})
///   corner decisions in coupled TASEP    -> derive_seed(seed, {row, col, step})
/// Every component is absorbed through mix64 with a position-dependent offset,
/// so permuting the path yields a different key.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

/// Maps a 64-bit word to a double in [0, 1) using its top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return to_unit_interval((*this)()); }

  /// Uniform on (0, 1].
  double uniform_positive() noexcept { return 1.0 - uniform(); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Geometric on {1, 2, ...} with P(X = k) = (1-p)^(k-1) p. Inversion sampling.
  std::uint64_t geometric(double p) noexcept;

 private:
  std::uint64_t state_;
};

/// Throws domain_error unless p lies in (0, 1].
void require_probability(double p);

}  // namespace ungar
