#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "dlog/modmath.hpp"

using namespace dlog;

namespace {

// Trial-division primality, the independent oracle for the probabilistic test.
bool brute_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t brute_gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

}  // namespace

TEST_CASE("mod_pow basics and reference values") {
  CHECK(mod_pow(340003, 6, 1040483) == 50064);
  CHECK(mod_pow(2, 10, 1000) == 24);
  CHECK(mod_pow(0, 0, 7) == 1);  // 0^0 := 1
  CHECK(mod_pow(5, 0, 9) == 1);
  CHECK(mod_pow(-3, 2, 7) == 2);
  CHECK_THROWS_AS(mod_pow(2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(mod_pow(2, -1, 7), std::invalid_argument);
}

TEST_CASE("mod_pow homomorphism over random triples") {
  Rng rng(42);
  Int p(1040483);
  for (int i = 0; i < 1000; ++i) {
    Int g = rng.range(2, p - 1);
    Int a = rng.below(p - 1);
    Int b = rng.below(p - 1);
    CHECK(mod_pow(g, a, p) * mod_pow(g, b, p) % p == mod_pow(g, a + b, p));
  }
}

TEST_CASE("mod_inv against gcd for all small pairs") {
  CHECK(mod_inv(1, 7) == Int(1));
  CHECK(mod_inv(3, 10) == Int(7));
  CHECK(!mod_inv(2, 8).has_value());
  for (std::uint64_t n = 2; n <= 200; ++n) {
    for (std::uint64_t a = 0; a < n; ++a) {
      auto inv = mod_inv(Int(a), Int(n));
      if (brute_gcd(a, n) == 1) {
        REQUIRE(inv.has_value());
        CHECK((a * *inv) % n == 1);
      } else {
        CHECK(!inv.has_value());
      }
    }
  }
}

TEST_CASE("crt_combine examples and round-trip property") {
  CHECK(crt_combine({0, 0}, {3, 5}) == 0);

  // Independent oracle: scan 0..14 for the unique simultaneous residue.
  Int expected = -1;
  for (int x = 0; x < 15; ++x)
    if (x % 3 == 2 && x % 5 == 3) expected = x;
  REQUIRE(expected == 8);
  CHECK(crt_combine({2, 3}, {3, 5}) == expected);

  CHECK_THROWS_AS(crt_combine({1, 2}, {4, 6}), std::invalid_argument);
  CHECK_THROWS_AS(crt_combine({1}, {3, 5}), std::invalid_argument);
  CHECK_THROWS_AS(crt_combine({}, {}), std::invalid_argument);

  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Int> moduli{Int(2 + rng.below_u64(50))};
    while (moduli.size() < 3) {
      Int m(2 + rng.below_u64(50));
      bool coprime = true;
      for (const Int& other : moduli) {
        Int g;
        mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), other.get_mpz_t());
        if (g != 1) coprime = false;
      }
      if (coprime) moduli.push_back(m);
    }
    std::vector<Int> residues;
    for (const Int& m : moduli) residues.push_back(rng.below(m));
    Int x = crt_combine(residues, moduli);
    Int prod = moduli[0] * moduli[1] * moduli[2];
    CHECK(x >= 0);
    CHECK(x < prod);
    for (std::size_t i = 0; i < moduli.size(); ++i) CHECK(x % moduli[i] == residues[i]);
  }
}

TEST_CASE("coprime_split examples") {
  auto s1 = coprime_split(12, 2);
  REQUIRE(s1.has_value());
  CHECK(s1->first == 4);
  CHECK(s1->second == 3);

  auto s2 = coprime_split(15, 3);
  REQUIRE(s2.has_value());
  CHECK(s2->first == 3);
  CHECK(s2->second == 5);

  CHECK(!coprime_split(8, 2).has_value());  // prime power of the witness prime
  CHECK_THROWS_AS(coprime_split(12, 5), std::invalid_argument);   // gcd = 1
  CHECK_THROWS_AS(coprime_split(12, 12), std::invalid_argument);  // gcd = n
}

TEST_CASE("coprime_split factor properties on random inputs") {
  Rng rng(99);
  int split_count = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Int n(2 + rng.below_u64(100000));
    Int w(2 + rng.below_u64(100000));
    Int g;
    mpz_gcd(g.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
    if (g <= 1 || g >= n) continue;
    auto split = coprime_split(n, w);
    if (!split) continue;
    ++split_count;
    auto [n1, n2] = *split;
    CHECK(n1 > 1);
    CHECK(n2 > 1);
    CHECK(n1 * n2 == n);
    Int cg;
    mpz_gcd(cg.get_mpz_t(), n1.get_mpz_t(), n2.get_mpz_t());
    CHECK(cg == 1);
  }
  CHECK(split_count > 50);
}

TEST_CASE("solve_linear_congruence matches brute force for every n <= 200") {
  // Frozen examples first (brute forced by the loop below as well).
  CHECK(solve_linear_congruence(4, 2, 6) == std::vector<Int>{2, 5});
  CHECK(solve_linear_congruence(3, 1, 10) == std::vector<Int>{7});
  CHECK(solve_linear_congruence(2, 1, 4).empty());

  for (std::uint64_t n = 2; n <= 200; ++n) {
    for (std::uint64_t a = 0; a < n; ++a) {
      std::uint64_t g = brute_gcd(a, n);
      for (std::uint64_t c = 0; c < n; ++c) {
        auto sols = solve_linear_congruence(Int(a), Int(c), Int(n));
        std::vector<std::uint64_t> listed;
        listed.reserve(sols.size());
        for (const Int& s : sols) listed.push_back(mpz_get_ui(s.get_mpz_t()));

        std::size_t hits = 0, cursor = 0;
        bool mismatch = false;
        std::uint64_t ax = 0;  // a*x mod n, updated incrementally
        for (std::uint64_t x = 0; x < n; ++x) {
          if (ax == c) {
            if (cursor >= listed.size() || listed[cursor] != x) mismatch = true;
            ++cursor;
            ++hits;
          }
          ax += a;
          if (ax >= n) ax -= n;
        }
        REQUIRE(!mismatch);
        REQUIRE(cursor == listed.size());
        if (hits != 0) REQUIRE(hits == (g == 0 ? n : g));
      }
    }
  }
}

TEST_CASE("is_probable_prime matches trial division to 1e5") {
  CHECK(is_probable_prime(227));
  CHECK(!is_probable_prime(221));  // 13 * 17
  CHECK(!is_probable_prime(0));
  CHECK(!is_probable_prime(1));
  for (std::uint64_t n = 0; n <= 100000; ++n) CHECK(is_probable_prime(Int(n)) == brute_is_prime(n));
}

TEST_CASE("is_probable_prime on larger known values") {
  CHECK(is_probable_prime(Int("2305843009213693951")));  // 2^61 - 1
  CHECK(!is_probable_prime(Int("2305843009213693953")));
  CHECK(!is_probable_prime(Int(341)));                   // base-2 pseudoprime
  CHECK(!is_probable_prime(Int("3215031751")));          // strong pseudoprime to 2,3,5,7
  CHECK(is_probable_prime(Int(1040483)));
  CHECK(is_probable_prime(Int(520241)));
  // Above 64 bits: product of two primes vs a known prime.
  Int p1("18446744073709551629");  // smallest prime > 2^64
  CHECK(is_probable_prime(p1));
  CHECK(!is_probable_prime(p1 * 3));
}

TEST_CASE("random_prime contracts") {
  Rng a(123), b(123);
  Int p1 = random_prime(20, a);
  Int p2 = random_prime(20, b);
  CHECK(p1 == p2);  // determinism
  CHECK(random_prime(20, std::uint64_t{123}) == p1);

  Rng c(5);
  Int p8 = random_prime(8, c);
  CHECK(p8 >= 128);
  CHECK(p8 <= 255);

  Rng d(77);
  for (unsigned bits = 3; bits <= 32; ++bits) {
    Int p = random_prime(bits, d);
    CHECK(mpz_sizeinbase(p.get_mpz_t(), 2) == bits);
    CHECK(brute_is_prime(mpz_get_ui(p.get_mpz_t())));
  }
  CHECK_THROWS_AS(random_prime(2, d), std::invalid_argument);
}

TEST_CASE("factor_integer reference values and reconstruction") {
  Factorization f = factor_integer(226);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0] == std::pair<Int, unsigned>{2, 1});
  CHECK(f.factors[1] == std::pair<Int, unsigned>{113, 1});

  Factorization f2 = factor_integer(1024);
  REQUIRE(f2.factors.size() == 1);
  CHECK(f2.factors[0] == std::pair<Int, unsigned>{2, 10});

  CHECK_THROWS_AS(factor_integer(1), std::invalid_argument);

  auto reconstructs = [](const Factorization& fact) {
    Int prod = 1;
    Int last_prime = 1;
    for (const auto& [q, e] : fact.factors) {
      if (q <= last_prime) return false;  // strictly increasing primes
      if (!is_probable_prime(q)) return false;
      last_prime = q;
      for (unsigned i = 0; i < e; ++i) prod *= q;
    }
    return prod == fact.value;
  };
  CHECK(reconstructs(factor_integer(1040482)));

  Rng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    Int n = rng.range(2, Int("1000000000000"));
    CHECK(reconstructs(factor_integer(n)));
  }
  // A few shapes that stress the rho stage.
  CHECK(reconstructs(factor_integer(Int("614889782588491410"))));          // primorial-ish
  CHECK(reconstructs(factor_integer(Int(1000003) * Int(1000033))));        // semiprime
  CHECK(reconstructs(factor_integer(Int(1000003) * Int(1000003))));        // prime square
  CHECK(reconstructs(factor_integer((Int(1) << 79) - 1)));                 // 79-bit
}

TEST_CASE("find_generator smallest-generator values and order property") {
  CHECK(find_generator(11, factor_integer(10)) == 2);
  CHECK(find_generator(3, factor_integer(2)) == 2);
  CHECK_THROWS_AS(find_generator(2, factor_integer(2)), std::invalid_argument);

  // Brute-force order check for every prime p < 10^4.
  for (std::uint64_t p = 3; p < 10000; ++p) {
    if (!brute_is_prime(p)) continue;
    Factorization f = factor_integer(Int(p - 1));
    Int g = find_generator(Int(p), f);
    std::uint64_t gu = mpz_get_ui(g.get_mpz_t());
    std::uint64_t cur = gu % p;
    std::uint64_t order = 1;
    while (cur != 1) {
      cur = cur * gu % p;
      ++order;
    }
    REQUIRE(order == p - 1);
  }
}

TEST_CASE("multiplicative_order agrees with brute force") {
  Rng rng(271828);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint64_t p = 0;
    while (!brute_is_prime(p)) p = 3 + rng.below_u64(3000);
    std::uint64_t a = 2 + rng.below_u64(p - 2);
    Factorization f = factor_integer(Int(p - 1));
    Int ord = multiplicative_order(Int(a), Int(p), f);
    std::uint64_t cur = a % p, brute = 1;
    while (cur != 1) {
      cur = cur * a % p;
      ++brute;
    }
    CHECK(ord == brute);
  }
}

TEST_CASE("rng determinism and range contracts") {
  Rng a(987), b(987);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(2024);
  Int n("123456789123456789123456789");
  for (int i = 0; i < 200; ++i) {
    Int v = c.below(n);
    CHECK(v >= 0);
    CHECK(v < n);
  }
  for (int i = 0; i < 200; ++i) {
    Int v = c.range(5, 9);
    CHECK(v >= 5);
    CHECK(v <= 9);
  }
  CHECK(mix_seed(1, {2, 3}) != mix_seed(1, {3, 2}));
  CHECK(mix_seed(1, {2, 3}) == mix_seed(1, {2, 3}));
}
