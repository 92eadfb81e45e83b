#include <doctest.h>

#include "dlog/analysis.hpp"

using namespace dlog;

namespace {

// Literal triple-loop oracle for the layout count.
Int brute_nice_cases(unsigned k) {
  Int total = 0;
  for (unsigned i = 1; i <= k; ++i)
    for (unsigned j = 1; j + i <= k; ++j)
      for (unsigned m = 1; m + i <= k; ++m) {
        Int a, b, c;
        mpz_bin_uiui(a.get_mpz_t(), k, i);
        mpz_bin_uiui(b.get_mpz_t(), k - i, j);
        mpz_bin_uiui(c.get_mpz_t(), k - i, m);
        total += a * b * c;
      }
  return total;
}

}  // namespace

TEST_CASE("prob_lower_bound exact values") {
  CHECK(prob_lower_bound(1, 1) == mpq_class(1, 2));
  CHECK(prob_lower_bound(5, 5) == mpq_class(15, 16) + mpq_class(1, 1 << 25));
  CHECK_THROWS_AS(prob_lower_bound(0, 1), std::invalid_argument);
}

TEST_CASE("prob_lower_bound symmetry, range and monotonicity") {
  // At v = 1 the expression collapses to exactly 1/2 for every u, so
  // monotonicity in u is strict only from v = 2 upward.
  for (unsigned u = 1; u <= 16; ++u) CHECK(prob_lower_bound(u, 1) == mpq_class(1, 2));
  for (unsigned u = 1; u <= 16; ++u) {
    for (unsigned v = 1; v <= 16; ++v) {
      mpq_class p = prob_lower_bound(u, v);
      CHECK(p == prob_lower_bound(v, u));
      CHECK(p > 0);
      CHECK(p < 1);
      if (u > 1) {
        CHECK(p >= prob_lower_bound(u - 1, v));
        if (v > 1) CHECK(p > prob_lower_bound(u - 1, v));
      }
    }
  }
  // Tends to 1 for large tables.
  CHECK(prob_lower_bound(40, 40) > mpq_class(999999, 1000000));
}

TEST_CASE("nice_case_count matches the triple-loop oracle for k <= 10") {
  CHECK(nice_case_count(1) == 0);  // inner ranges are empty at k = 1
  CHECK(nice_case_count(2) == 2);
  CHECK(nice_case_count(3) == 30);
  for (unsigned k = 1; k <= 10; ++k) CHECK(nice_case_count(k) == brute_nice_cases(k));
  CHECK_THROWS_AS(nice_case_count(0), std::invalid_argument);
}

TEST_CASE("rational_to_decimal exact expansions") {
  CHECK(rational_to_decimal(mpq_class(1, 2)) == "0.5");
  CHECK(rational_to_decimal(mpq_class(15, 16) + mpq_class(1, 1 << 25)) ==
        "0.9375000298023223876953125");
  CHECK(rational_to_decimal(mpq_class(3, 1)) == "3");
  CHECK(rational_to_decimal(mpq_class(-1, 4)) == "-0.25");
  CHECK(rational_to_decimal(mpq_class(1, 10)) == "0.1");
  CHECK_THROWS_AS(rational_to_decimal(mpq_class(1, 3)), std::invalid_argument);
}
