#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <gmpxx.h>

namespace dlog {

using Int = mpz_class;

// Deterministic random source for the whole library: std::mt19937_64 under an
// explicit 64-bit seed. Big integers are assembled from 64-bit draws with
// rejection sampling, so a seed produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n). n > 0.
  Int below(const Int& n);

  // Uniform in [lo, hi], inclusive. lo <= hi.
  Int range(const Int& lo, const Int& hi);

  // Uniform in [0, n), n > 0, plain machine word.
  std::uint64_t below_u64(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64-style mixer used to derive independent stream seeds from a base
// seed plus context words (per-trial, per-base-element, ...).
std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts);

}  // namespace dlog
