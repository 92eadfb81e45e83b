#include "dlog/analysis.hpp"

#include <stdexcept>

namespace dlog {

mpq_class prob_lower_bound(unsigned u, unsigned v) {
  if (u < 1 || v < 1) throw std::invalid_argument("prob_lower_bound: u, v must be >= 1");
  auto half_pow = [](unsigned long e) {
    mpq_class q(1);
    mpz_mul_2exp(mpq_denref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()), e);
    return q;
  };
  mpq_class r = 1 + half_pow(static_cast<unsigned long>(u) * v) - half_pow(v) - half_pow(u);
  r.canonicalize();
  return r;
}

Int nice_case_count(unsigned k) {
  if (k < 1) throw std::invalid_argument("nice_case_count: k must be >= 1");
  Int total = 0;
  for (unsigned i = 1; i <= k; ++i) {
    unsigned rest = k - i;
    if (rest == 0) continue;  // inner index ranges are empty
    Int c_ki, inner = 0;
    mpz_bin_uiui(c_ki.get_mpz_t(), k, i);
    for (unsigned j = 1; j <= rest; ++j) {
      Int c;
      mpz_bin_uiui(c.get_mpz_t(), rest, j);
      inner += c;
    }
    total += c_ki * inner * inner;  // sum over j and m factorizes
  }
  return total;
}

std::string rational_to_decimal(const mpq_class& q) {
  mpq_class r = q;
  r.canonicalize();
  bool negative = r < 0;
  if (negative) r = -r;
  Int num = r.get_num();
  Int den = r.get_den();

  // Shift the denominator to a power of ten: den must be 2^a * 5^b.
  unsigned long twos = 0, fives = 0;
  Int d = den;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1)
    throw std::invalid_argument("rational_to_decimal: denominator is not 2^a * 5^b");
  unsigned long digits = std::max(twos, fives);
  Int scaled = num;
  for (unsigned long i = twos; i < digits; ++i) scaled *= 2;
  for (unsigned long i = fives; i < digits; ++i) scaled *= 5;

  std::string raw = scaled.get_str();
  std::string out;
  if (digits == 0) {
    out = raw;
  } else {
    if (raw.size() <= digits) raw.insert(0, digits - raw.size() + 1, '0');
    out = raw.substr(0, raw.size() - digits) + "." + raw.substr(raw.size() - digits);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (negative) out.insert(0, 1, '-');
  return out;
}

}  // namespace dlog
