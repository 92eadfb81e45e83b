#include "dlog/rng.hpp"

#include <stdexcept>

namespace dlog {

Int Rng::below(const Int& n) {
  if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
  if (mpz_fits_ulong_p(n.get_mpz_t())) return Int(below_u64(mpz_get_ui(n.get_mpz_t())));

  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits - (words - 1) * 64);
  const std::uint64_t top_mask =
      top_bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);

  Int r;
  for (;;) {
    r = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = next_u64();
      if (w == 0) word &= top_mask;  // draws stay in [0, 2^bits)
      mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), 64);
      Int tmp;
      mpz_import(tmp.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
      r += tmp;
    }
    if (r < n) return r;
  }
}

Int Rng::range(const Int& lo, const Int& hi) {
  if (lo > hi) throw std::invalid_argument("Rng::range: lo > hi");
  return lo + below(hi - lo + 1);
}

std::uint64_t Rng::below_u64(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below_u64: n must be positive");
  // Rejection against the largest multiple of n, unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit || limit == 0) return v % n;
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = seed;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t part : parts) {
    state ^= part + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    out ^= splitmix64(state);
  }
  return out;
}

}  // namespace dlog
