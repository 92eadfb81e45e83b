#pragma once

#include <string>

#include "dlog/modmath.hpp"

namespace dlog {

// 1 + 2^(-uv) - 2^(-v) - 2^(-u), exact. Lower bound on the probability that
// two independently filled prime-log tables of sizes u and v intersect.
mpq_class prob_lower_bound(unsigned u, unsigned v);

// sum over 1<=i<=k, 1<=j,m<=k-i of C(k,i)*C(k-i,j)*C(k-i,m), exact.
Int nice_case_count(unsigned k);

// Exact decimal expansion of a rational whose reduced denominator has no
// prime factors besides 2 and 5 (throws otherwise).
std::string rational_to_decimal(const mpq_class& q);

}  // namespace dlog
