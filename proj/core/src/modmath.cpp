#include "dlog/modmath.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace dlog {

Int mod_pow(const Int& base, const Int& exp, const Int& modulus) {
  if (modulus < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
  if (exp < 0) throw std::invalid_argument("mod_pow: exponent must be nonnegative");
  Int r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

std::optional<Int> mod_inv(const Int& a, const Int& n) {
  if (n < 2) throw std::invalid_argument("mod_inv: modulus must be >= 2");
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0) return std::nullopt;
  return r;
}

Int crt_combine(const std::vector<Int>& residues, const std::vector<Int>& moduli) {
  if (residues.size() != moduli.size())
    throw std::invalid_argument("crt_combine: length mismatch");
  if (residues.empty()) throw std::invalid_argument("crt_combine: empty input");

  Int x = residues[0];
  Int m = moduli[0];
  if (m < 2) throw std::invalid_argument("crt_combine: modulus must be >= 2");
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());

  for (std::size_t i = 1; i < moduli.size(); ++i) {
    const Int& mi = moduli[i];
    if (mi < 2) throw std::invalid_argument("crt_combine: modulus must be >= 2");
    Int g;
    mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), mi.get_mpz_t());
    if (g != 1) throw std::invalid_argument("crt_combine: moduli not pairwise coprime");
    // x' = x + m * ((r_i - x) * m^-1 mod m_i)
    auto inv = mod_inv(m % mi, mi);
    Int delta = ((residues[i] - x) % mi + mi) % mi;
    x += m * ((delta * *inv) % mi);
    m *= mi;
  }
  return x;
}

std::optional<std::pair<Int, Int>> coprime_split(const Int& n, const Int& witness) {
  if (n < 2) throw std::invalid_argument("coprime_split: n must be >= 2");
  Int g;
  mpz_gcd(g.get_mpz_t(), witness.get_mpz_t(), n.get_mpz_t());
  if (g <= 1 || g >= n)
    throw std::invalid_argument("coprime_split: gcd(witness, n) must be a proper divisor");

  // Pump the divisor until it absorbs every prime it shares with n:
  // g <- gcd(g^2, n) stabilizes at the product of the full prime-power
  // components of n touched by the witness.
  Int d = g;
  for (;;) {
    Int d2 = d * d;
    Int next;
    mpz_gcd(next.get_mpz_t(), d2.get_mpz_t(), n.get_mpz_t());
    if (next == d) break;
    d = next;
  }
  if (d == n) return std::nullopt;
  return std::make_pair(d, Int(n / d));
}

std::vector<Int> solve_linear_congruence(const Int& a, const Int& c, const Int& n) {
  if (n < 2) throw std::invalid_argument("solve_linear_congruence: modulus must be >= 2");
  Int ar = ((a % n) + n) % n;
  Int cr = ((c % n) + n) % n;
  Int g;
  mpz_gcd(g.get_mpz_t(), ar.get_mpz_t(), n.get_mpz_t());  // gcd(0, n) = n
  if (cr % g != 0) return {};

  std::vector<Int> out;
  Int step = n / g;
  Int x0;
  if (ar == 0) {
    x0 = 0;  // everything solves 0 = 0; step is 1
  } else {
    auto inv = mod_inv(ar / g, step);
    x0 = ((cr / g) * *inv) % step;
  }
  out.reserve(mpz_fits_ulong_p(g.get_mpz_t()) ? mpz_get_ui(g.get_mpz_t()) : 0);
  for (Int i = 0; i < g; ++i) out.push_back(x0 + i * step);
  return out;
}

namespace {

bool miller_rabin_round(const Int& n, const Int& n_minus_1, const Int& odd_part,
                        unsigned two_exp, const Int& witness) {
  Int w = witness % n;
  if (w == 0) return true;
  Int y = mod_pow(w, odd_part, n);
  if (y == 1 || y == n_minus_1) return true;
  for (unsigned i = 1; i < two_exp; ++i) {
    y = (y * y) % n;
    if (y == n_minus_1) return true;
  }
  return false;
}

}  // namespace

bool is_probable_prime(const Int& n) {
  if (n < 2) return false;
  static constexpr std::array<unsigned, 12> kSmall = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (unsigned q : kSmall) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }

  Int n_minus_1 = n - 1;
  Int odd = n_minus_1;
  unsigned two_exp = 0;
  while (mpz_even_p(odd.get_mpz_t())) {
    odd >>= 1;
    ++two_exp;
  }

  Int limit64;
  mpz_ui_pow_ui(limit64.get_mpz_t(), 2, 64);
  if (n < limit64) {
    // This witness set decides primality for every n < 2^64.
    for (unsigned w : kSmall)
      if (!miller_rabin_round(n, n_minus_1, odd, two_exp, Int(w))) return false;
    return true;
  }

  Rng rng(mix_seed(0x6d2b79f5u, {mpz_get_ui(n.get_mpz_t())}));
  for (int round = 0; round < 40; ++round) {
    Int w = rng.range(2, n - 2);
    if (!miller_rabin_round(n, n_minus_1, odd, two_exp, w)) return false;
  }
  return true;
}

Int random_prime(unsigned bits, Rng& rng) {
  if (bits < 3) throw std::invalid_argument("random_prime: bits must be >= 3");
  Int lo = Int(1) << (bits - 1);
  Int span = lo;  // candidates in [2^(bits-1), 2^bits)
  for (;;) {
    Int cand = lo + rng.below(span);
    mpz_setbit(cand.get_mpz_t(), 0);
    if (is_probable_prime(cand)) return cand;
  }
}

Int random_prime(unsigned bits, std::uint64_t seed) {
  Rng rng(seed);
  return random_prime(bits, rng);
}

namespace {

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t kLimit = 1'000'000;
    std::vector<bool> composite(kLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Brent's variant of Pollard rho; n must be odd, composite, not a prime power
// of a trial-division prime. Returns a nontrivial factor.
Int pollard_brent(const Int& n, Rng& rng) {
  for (;;) {
    Int y = rng.range(1, n - 1);
    Int c = rng.range(1, n - 1);
    Int m = 128;
    Int g = 1, r = 1, q = 1, x, ys;
    while (g == 1) {
      x = y;
      for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
      Int k = 0;
      while (k < r && g == 1) {
        ys = y;
        Int rem = r - k;
        Int chunk = std::min(m, rem);
        for (Int i = 0; i < chunk; ++i) {
          y = (y * y + c) % n;
          q = q * ((x - y) % n + n) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time to recover the factor lost in batching.
      do {
        ys = (ys * ys + c) % n;
        Int diff = ((x - ys) % n + n) % n;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
    // Degenerate cycle; retry with fresh parameters.
  }
}

void factor_rec(const Int& n, Rng& rng, std::map<Int, unsigned>& acc) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++acc[n];
    return;
  }
  // Perfect powers make rho slow; peel them off first.
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
      Int root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
        std::map<Int, unsigned> sub;
        factor_rec(root, rng, sub);
        for (auto& [p, e] : sub) acc[p] += e * k;
        return;
      }
    }
  }
  Int d = pollard_brent(n, rng);
  factor_rec(d, rng, acc);
  factor_rec(Int(n / d), rng, acc);
}

}  // namespace

Factorization factor_integer(const Int& n) {
  if (n < 2) throw std::invalid_argument("factor_integer: n must be >= 2");
  Factorization out;
  out.value = n;

  Int rest = n;
  std::map<Int, unsigned> acc;
  for (std::uint32_t q : small_primes()) {
    if (Int(q) * q > rest) break;
    while (rest % q == 0) {
      ++acc[Int(q)];
      rest /= q;
    }
    if (rest == 1) break;
  }
  if (rest > 1) {
    Rng rng(mix_seed(0x5eedULL, {mpz_get_ui(rest.get_mpz_t())}));
    factor_rec(rest, rng, acc);
  }
  out.factors.assign(acc.begin(), acc.end());
  return out;
}

Int find_generator(const Int& p, const Factorization& fact_p_minus_1) {
  if (p < 3) throw std::invalid_argument("find_generator: p must be >= 3");
  if (fact_p_minus_1.value != p - 1)
    throw std::invalid_argument("find_generator: factorization does not match p-1");
  Int n = p - 1;
  for (Int g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& [q, e] : fact_p_minus_1.factors) {
      if (mod_pow(g, n / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("find_generator: no generator found (p not prime?)");
}

Int multiplicative_order(const Int& a, const Int& p, const Factorization& fact_p_minus_1) {
  Int order = p - 1;
  for (const auto& [q, e] : fact_p_minus_1.factors) {
    for (unsigned i = 0; i < e; ++i) {
      Int reduced = order / q;
      if (mod_pow(a, reduced, p) == 1)
        order = reduced;
      else
        break;
    }
  }
  return order;
}

}  // namespace dlog
