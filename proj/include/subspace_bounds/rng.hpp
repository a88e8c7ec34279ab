#pragma once

#include <cstdint>
#include <limits>

#include "subspace_bounds/matrix.hpp"

namespace sbounds {

/// xoshiro256** (Blackman and Vigna), 64-bit output, period 2^256 - 1.
/// The state is filled from the seed with SplitMix64, so every seed, zero
/// included, gives a valid non-zero state. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t s_[4];
};

/// One SplitMix64 output step applied to x.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent sub-seed for stream `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Deterministic sampling helpers on top of Xoshiro256. Distributions come
/// from Boost.Random, whose algorithms are fixed across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform on [lo, hi] (inclusive).
  std::size_t uniform_index(std::size_t lo, std::size_t hi);
  /// exp of a uniform draw on [log lo, log hi).
  double log_uniform(double lo, double hi);

  Xoshiro256& engine() { return engine_; }

 private:
  Xoshiro256 engine_;
};

/// GUE-type matrix: real N(0,1) diagonal, off-diagonal (N + iN)/sqrt(2).
HermitianMatrix random_hermitian(std::size_t dim, Rng& rng);

/// Eigenvector matrix of a random_hermitian draw.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

}  // namespace sbounds
