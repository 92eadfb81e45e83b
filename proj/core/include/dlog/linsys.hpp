#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "dlog/modmath.hpp"

namespace dlog {

// Rows of M*L = X over Z_n, entries kept reduced into [0, n).
struct EquationSystem {
  Int modulus;
  std::size_t columns = 0;
  std::vector<std::vector<Int>> coeffs;
  std::vector<Int> rhs;

  EquationSystem(Int n, std::size_t cols) : modulus(std::move(n)), columns(cols) {}
  void add_row(std::vector<Int> row_coeffs, Int row_rhs);
  std::size_t rows() const { return coeffs.size(); }
};

struct PartialSolution {
  // column index -> the unique value mod n, for exactly those unknowns whose
  // value agrees across every solution of the system.
  std::map<std::size_t, Int> determined;
  std::size_t rank_note = 0;    // pivot count of the largest component elimination
  bool inconsistent = false;    // system has no solutions; determined is empty
};

enum class Decomposition {
  kFactorize,  // split n into prime powers via factor_integer (exact)
  kGcdSplit,   // factorization-free: coprime gcd splitting driven by matrix
               // entries; may conservatively under-report determined unknowns
               // on components it cannot reduce to local form
};

// Returns every unknown uniquely determined mod n by the system and no
// unknown whose value is ambiguous. n is decomposed into pairwise-coprime
// components; per component an elimination with minimal-valuation pivoting
// runs over Z_{q^e}, and per-unknown uniqueness is read off the tracked
// kernel; unique component values are CRT-combined. `fact` may pass a
// precomputed factorization of the modulus to skip refactoring.
PartialSolution solve_partial(const EquationSystem& system,
                              Decomposition mode = Decomposition::kFactorize,
                              const Factorization* fact = nullptr);

}  // namespace dlog
