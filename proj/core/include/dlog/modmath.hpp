#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dlog/rng.hpp"

namespace dlog {

// Complete factorization of `value`, primes ascending.
struct Factorization {
  Int value;
  std::vector<std::pair<Int, unsigned>> factors;
};

// base^exp mod modulus. modulus >= 2, exp >= 0. 0^0 is taken to be 1.
Int mod_pow(const Int& base, const Int& exp, const Int& modulus);

// Inverse of a mod n when gcd(a, n) = 1, otherwise nullopt.
std::optional<Int> mod_inv(const Int& a, const Int& n);

// Unique x in [0, prod(moduli)) with x = residues[i] (mod moduli[i]).
// Moduli must be pairwise coprime and the sequences the same nonzero length.
Int crt_combine(const std::vector<Int>& residues, const std::vector<Int>& moduli);

// Splits n into coprime n1*n2 with n1, n2 > 1, where n1 collects every
// prime-power component of n sharing a prime with `witness`. Computed by
// repeated gcd pumping, no factorization. Requires 1 < gcd(witness, n) < n.
// Returns nullopt when the pump swallows all of n (witness shares every
// prime of n).
std::optional<std::pair<Int, Int>> coprime_split(const Int& n, const Int& witness);

// All x in [0, n) with a*x = c (mod n), ascending. Empty iff gcd(a, n)
// does not divide c; gcd(a, n) solutions otherwise.
std::vector<Int> solve_linear_congruence(const Int& a, const Int& c, const Int& n);

// Miller-Rabin. Deterministic witness set below 2^64, 40 pseudo-random
// rounds above (false-positive rate below 4^-40).
bool is_probable_prime(const Int& n);

// Prime with exactly `bits` bits (top bit set), deterministic per rng state.
Int random_prime(unsigned bits, Rng& rng);
Int random_prime(unsigned bits, std::uint64_t seed);

// Trial division to 10^6 followed by Pollard rho with Brent cycling.
// Intended for inputs up to ~80 bits.
Factorization factor_integer(const Int& n);

// Smallest g in [2, p) generating Z_p^*. fact must factor p-1.
Int find_generator(const Int& p, const Factorization& fact_p_minus_1);

// Multiplicative order of a mod p, given the factorization of p-1.
Int multiplicative_order(const Int& a, const Int& p, const Factorization& fact_p_minus_1);

}  // namespace dlog
