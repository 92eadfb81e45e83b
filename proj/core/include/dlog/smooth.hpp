#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dlog/modmath.hpp"

namespace dlog {

// All primes <= bound, ascending (sieve-complete).
struct FactorBase {
  std::uint64_t bound = 0;
  std::vector<std::uint64_t> primes;

  std::size_t size() const { return primes.size(); }
};

enum class BoundFormula {
  kSqrtHalf,  // exp(sqrt(ln p * ln ln p / 2))
  kHalfSqrt,  // exp(sqrt(ln p * ln ln p) / 2)
};

struct BoundSpec {
  BoundFormula formula = BoundFormula::kSqrtHalf;
  double multiplier = 1.0;  // > 0
};

FactorBase build_factor_base(std::uint64_t bound);

// Raw formula value before multiplier/rounding, evaluated in long double.
long double bound_formula_value(const Int& p, BoundFormula formula);

// round(multiplier * formula(p)), half-up, clamped to >= 2.
std::uint64_t smoothness_bound(const Int& p, const BoundSpec& spec);

// Exponent vector (e_1..e_k) with m = prod p_i^{e_i} when m is B-smooth,
// nullopt otherwise. m >= 1.
std::optional<std::vector<std::uint32_t>> factor_over_base(const Int& m, const FactorBase& base);

// One smooth relation: base^t mod p = prod p_i^{exponents[i]}.
struct Relation {
  Int t;
  std::vector<std::uint32_t> exponents;
};

struct RelationSearchOptions {
  std::uint64_t max_candidates = 10'000'000;
};

struct RelationBatch {
  std::vector<Relation> relations;
  std::uint64_t candidates_tested = 0;
  bool budget_exhausted = false;  // stopped short of `count`
};

// Draws t uniformly from [1, p-2] and keeps those with base_elem^t mod p
// B-smooth, until `count` relations are found or the candidate budget runs
// out. Candidates are tested in draw order; duplicates are kept.
RelationBatch collect_relations(const Int& base_elem, const Int& p, const FactorBase& base,
                                std::size_t count, Rng& rng,
                                const RelationSearchOptions& opts = {});

}  // namespace dlog
