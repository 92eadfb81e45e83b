#include "dlog/smooth.hpp"

#include <cmath>
#include <stdexcept>

namespace dlog {

FactorBase build_factor_base(std::uint64_t bound) {
  if (bound < 2) throw std::invalid_argument("build_factor_base: bound must be >= 2");
  if (bound > (std::uint64_t{1} << 31))
    throw std::invalid_argument("build_factor_base: bound too large to sieve");

  FactorBase fb;
  fb.bound = bound;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    fb.primes.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return fb;
}

long double bound_formula_value(const Int& p, BoundFormula formula) {
  if (p < 3) throw std::invalid_argument("bound_formula_value: p must be >= 3");
  // ln p from the mantissa/exponent split so 80-bit inputs lose nothing.
  signed long exp2;
  double mant = mpz_get_d_2exp(&exp2, p.get_mpz_t());
  long double ln_p = std::log(static_cast<long double>(mant)) +
                     static_cast<long double>(exp2) * 0.6931471805599453094172321214581766L;
  long double ln_ln_p = std::log(ln_p);
  switch (formula) {
    case BoundFormula::kSqrtHalf:
      return std::exp(std::sqrt(ln_p * ln_ln_p / 2.0L));
    case BoundFormula::kHalfSqrt:
      return std::exp(std::sqrt(ln_p * ln_ln_p) / 2.0L);
  }
  throw std::logic_error("bound_formula_value: unknown formula");
}

std::uint64_t smoothness_bound(const Int& p, const BoundSpec& spec) {
  if (spec.multiplier <= 0) throw std::invalid_argument("smoothness_bound: multiplier must be > 0");
  long double raw = static_cast<long double>(spec.multiplier) * bound_formula_value(p, spec.formula);
  long double rounded = std::floor(raw + 0.5L);  // half-up
  if (rounded < 2.0L) return 2;
  return static_cast<std::uint64_t>(rounded);
}

std::optional<std::vector<std::uint32_t>> factor_over_base(const Int& m, const FactorBase& base) {
  if (m < 1) throw std::invalid_argument("factor_over_base: m must be >= 1");
  std::vector<std::uint32_t> exps(base.size(), 0);

  if (mpz_fits_ulong_p(m.get_mpz_t())) {
    std::uint64_t v = mpz_get_ui(m.get_mpz_t());
    for (std::size_t i = 0; i < base.primes.size() && v > 1; ++i) {
      std::uint64_t q = base.primes[i];
      while (v % q == 0) {
        v /= q;
        ++exps[i];
      }
    }
    if (v != 1) return std::nullopt;
    return exps;
  }

  Int v = m;
  for (std::size_t i = 0; i < base.primes.size() && v > 1; ++i) {
    std::uint64_t q = base.primes[i];
    while (mpz_divisible_ui_p(v.get_mpz_t(), q)) {
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), q);
      ++exps[i];
    }
  }
  if (v != 1) return std::nullopt;
  return exps;
}

RelationBatch collect_relations(const Int& base_elem, const Int& p, const FactorBase& base,
                                std::size_t count, Rng& rng, const RelationSearchOptions& opts) {
  if (p < 3) throw std::invalid_argument("collect_relations: p must be >= 3");
  if (base_elem < 2 || base_elem >= p)
    throw std::invalid_argument("collect_relations: base element out of range");
  if (count < 1) throw std::invalid_argument("collect_relations: count must be >= 1");

  RelationBatch batch;
  Int t_lo = 1;
  Int t_hi = p - 2;
  while (batch.relations.size() < count) {
    if (batch.candidates_tested >= opts.max_candidates) {
      batch.budget_exhausted = true;
      break;
    }
    Int t = rng.range(t_lo, t_hi);
    ++batch.candidates_tested;
    Int residue = mod_pow(base_elem, t, p);
    auto exps = factor_over_base(residue, base);
    if (!exps) continue;
    batch.relations.push_back(Relation{t, std::move(*exps)});
  }
  return batch;
}

}  // namespace dlog
