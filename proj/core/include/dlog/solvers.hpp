#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "dlog/linsys.hpp"
#include "dlog/smooth.hpp"

namespace dlog {

struct DlpInstance {
  Int p;  // prime modulus
  Int g;  // base, 2 <= g < p
  Int b;  // target, 1 <= b < p
  std::optional<Int> expected_x;  // known answer, bench only
};

enum class SolveStatus {
  kOk,
  kBudgetExceeded,
  kGeneralityFailure,  // a factor-base prime has no log to this base
  kNoSolution,         // b outside <g>
  kDerivationFailure,  // matches found but no congruence solution verified
};

const char* to_string(SolveStatus status);

struct SolveCounters {
  std::uint64_t candidates_tested = 0;
  std::uint64_t smooth_found = 0;
  std::uint64_t rounds = 0;
  std::chrono::nanoseconds elapsed{0};
};

struct SolveResult {
  SolveStatus status = SolveStatus::kOk;
  Int x;
  std::string algorithm;
  SolveCounters counters;
  std::optional<std::uint64_t> matched_prime;  // double index calculus only

  bool ok() const { return status == SolveStatus::kOk; }
};

// Verified prime logs for one base element: base_elem^l mod p = prime holds
// for every entry (checked before insertion, never assumed).
struct PartialLogTable {
  Int base_elem;
  std::map<std::uint64_t, Int> entries;
};

struct SolveOptions {
  std::uint64_t max_candidates = 10'000'000;  // smoothness candidates per base
  std::uint64_t max_rounds = 50;
  std::uint64_t derive_scan_cap = 4096;   // congruence solutions tried per match
  std::uint64_t rho_max_restarts = 64;
  std::uint64_t bsgs_max_table = std::uint64_t{1} << 26;
  // Observed after every double-IC round: table sizes and whether the prime
  // tables intersect. Used by the pigeonhole/probability instrumentation.
  std::function<void(std::size_t table_g, std::size_t table_b, bool matched)> round_observer;
};

bool verify_solution(const DlpInstance& inst, const Int& x);

// Given g^alpha = b^beta (mod p) and n = p-1, solves beta*x = alpha (mod n)
// for a verified x with b = g^x; nullopt when nothing verifies. Invertible
// beta short-circuits to alpha*beta^-1. Up to scan_cap congruence solutions
// are enumerated ascending (so the smallest verifying one is returned);
// beyond the cap the solution lattice is searched through a discrete log in
// the subgroup of order gcd(beta, n), and callers reduce modulo ord(g) for
// the smallest representative.
std::optional<Int> derive_x_from_match(const Int& alpha, const Int& beta, const Int& n,
                                       const DlpInstance& inst,
                                       std::uint64_t scan_cap = 4096);

SolveResult solve_bsgs(const DlpInstance& inst, const std::optional<Int>& order_hint = {},
                       const SolveOptions& opts = {});

SolveResult solve_pollard_rho(const DlpInstance& inst, Rng& rng, const SolveOptions& opts = {});

SolveResult solve_pohlig_hellman(const DlpInstance& inst, const SolveOptions& opts = {});

SolveResult solve_index_calculus(const DlpInstance& inst, std::uint64_t bound, Rng& rng,
                                 const SolveOptions& opts = {});

// Algorithm: per round, collect k relations for base g and k for base b,
// partially solve both systems, verify candidate logs by exponentiation into
// the two tables, and stop as soon as the tables share a prime; x then comes
// from alpha*beta^-1 (or the congruence scan) on the matched prime. With
// `parallel` the two per-base pipelines run on separate threads with
// identical results for identical per-stream seeds.
SolveResult solve_double_index_calculus(const DlpInstance& inst, std::uint64_t bound,
                                        bool parallel, Rng& rng_g, Rng& rng_b,
                                        const SolveOptions& opts = {});

// Relation-at-a-time double-IC instrumentation: alternates single relations
// between the two bases, re-solving and verifying after each, and stops the
// moment the tables reach sizes (u, v). Reports whether they intersect.
struct TableSizeProbe {
  std::size_t size_g = 0;
  std::size_t size_b = 0;
  bool matched = false;
  bool reached_target = false;
};

TableSizeProbe probe_table_match(const DlpInstance& inst, std::uint64_t bound, std::size_t u,
                                 std::size_t v, Rng& rng_g, Rng& rng_b,
                                 const SolveOptions& opts = {});

}  // namespace dlog
