#include "dlog/solvers.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace dlog {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOk: return "ok";
    case SolveStatus::kBudgetExceeded: return "budget-exceeded";
    case SolveStatus::kGeneralityFailure: return "generality-failure";
    case SolveStatus::kNoSolution: return "no-solution";
    case SolveStatus::kDerivationFailure: return "derivation-failure";
  }
  return "unknown";
}

bool verify_solution(const DlpInstance& inst, const Int& x) {
  if (x < 0) return false;
  return mod_pow(inst.g, x, inst.p) == inst.b;
}

namespace {

void check_instance(const DlpInstance& inst) {
  if (inst.p < 3) throw std::invalid_argument("solver: p must be >= 3");
  if (inst.g < 2 || inst.g >= inst.p) throw std::invalid_argument("solver: g out of range");
  if (inst.b < 1 || inst.b >= inst.p) throw std::invalid_argument("solver: b out of range");
}

struct ElapsedGuard {
  SolveCounters& counters;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~ElapsedGuard() {
    counters.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - start);
  }
};

// Smallest nonnegative equivalent of a verified solution: exponents of g
// repeat with period ord(g).
Int reduce_mod_order(const DlpInstance& inst, const Int& x, const Factorization& fact_n) {
  Int ord = multiplicative_order(inst.g, inst.p, fact_n);
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), ord.get_mpz_t());
  return r;
}

struct MpzHash {
  std::size_t operator()(const Int& v) const {
    return mpz_fdiv_ui(v.get_mpz_t(), 0xFFFFFFFFFFFFFFC5ULL);
  }
};

}  // namespace

std::optional<Int> derive_x_from_match(const Int& alpha, const Int& beta, const Int& n,
                                       const DlpInstance& inst, std::uint64_t scan_cap) {
  if (n < 2) throw std::invalid_argument("derive_x_from_match: n must be >= 2");
  Int beta_r = ((beta % n) + n) % n;
  Int alpha_r = ((alpha % n) + n) % n;
  Int g;
  mpz_gcd(g.get_mpz_t(), beta_r.get_mpz_t(), n.get_mpz_t());

  if (g == 1) {
    Int x = (alpha_r * *mod_inv(beta_r, n)) % n;
    if (verify_solution(inst, x)) return x;
    return std::nullopt;
  }
  if (alpha_r % g != 0) return std::nullopt;

  if (g <= scan_cap) {
    for (const Int& x : solve_linear_congruence(beta_r, alpha_r, n))
      if (verify_solution(inst, x)) return x;
    return std::nullopt;
  }

  // Too many congruence solutions to enumerate. They form c + j*step with
  // step = n/g, and a solution verifies iff h^j = b * g^(-c) for h = g^step,
  // which is a discrete log in the small subgroup generated by h.
  Int step = n / g;
  Int c = (*mod_inv(beta_r / g, step) * (alpha_r / g)) % step;
  Int h = mod_pow(inst.g, step, inst.p);
  Int target = inst.b * *mod_inv(mod_pow(inst.g, c, inst.p), inst.p) % inst.p;
  if (h == 1) {
    if (verify_solution(inst, c)) return c;
    return std::nullopt;
  }
  SolveOptions sub_opts;
  sub_opts.bsgs_max_table = std::uint64_t{1} << 22;
  DlpInstance sub{inst.p, h, target, std::nullopt};
  SolveResult sub_res = solve_bsgs(sub, g, sub_opts);
  if (sub_res.ok()) {
    Int x = c + sub_res.x * step;
    if (verify_solution(inst, x)) return x;
  }
  return std::nullopt;
}

SolveResult solve_bsgs(const DlpInstance& inst, const std::optional<Int>& order_hint,
                       const SolveOptions& opts) {
  SolveResult res;
  res.algorithm = "bsgs";
  ElapsedGuard guard{res.counters};
  check_instance(inst);
  if (inst.b == 1) {
    res.x = 0;
    return res;
  }

  Int order = order_hint.value_or(inst.p - 1);
  Int m;
  mpz_sqrt(m.get_mpz_t(), order.get_mpz_t());
  if (m * m < order) ++m;
  if (m > opts.bsgs_max_table) {
    res.status = SolveStatus::kBudgetExceeded;
    return res;
  }
  const std::uint64_t steps = mpz_get_ui(m.get_mpz_t());

  std::unordered_map<Int, std::uint64_t, MpzHash> baby;
  baby.reserve(steps);
  Int cur = 1;
  for (std::uint64_t j = 0; j < steps; ++j) {
    baby.emplace(cur, j);  // keeps the smallest j when <g> is shorter than m
    cur = cur * inst.g % inst.p;
  }

  Int giant_inv = *mod_inv(mod_pow(inst.g, m, inst.p), inst.p);
  Int y = inst.b;
  Int giants = order / m + 1;
  for (Int i = 0; i <= giants; ++i) {
    ++res.counters.candidates_tested;
    auto it = baby.find(y);
    if (it != baby.end()) {
      Int x = i * m + it->second;
      if (verify_solution(inst, x)) {
        res.x = x;
        return res;
      }
    }
    y = y * giant_inv % inst.p;
  }
  res.status = SolveStatus::kNoSolution;
  return res;
}

SolveResult solve_pollard_rho(const DlpInstance& inst, Rng& rng, const SolveOptions& opts) {
  SolveResult res;
  res.algorithm = "rho";
  ElapsedGuard guard{res.counters};
  check_instance(inst);
  if (inst.b == 1) {
    res.x = 0;
    return res;
  }

  const Int n = inst.p - 1;
  const Factorization fact_n = factor_integer(n);

  // y = g^a * b^c; the walk is the usual 3-way partition on y mod 3.
  auto step = [&](Int& y, Int& a, Int& c) {
    switch (mpz_fdiv_ui(y.get_mpz_t(), 3)) {
      case 0:
        y = y * inst.b % inst.p;
        c = (c + 1) % n;
        break;
      case 1:
        y = y * y % inst.p;
        a = a * 2 % n;
        c = c * 2 % n;
        break;
      default:
        y = y * inst.g % inst.p;
        a = (a + 1) % n;
        break;
    }
  };

  Int iter_cap;
  mpz_sqrt(iter_cap.get_mpz_t(), n.get_mpz_t());
  iter_cap = iter_cap * 4 + 1000;

  for (std::uint64_t restart = 0; restart < opts.rho_max_restarts; ++restart) {
    Int a1 = rng.below(n), c1 = rng.below(n);
    Int y1 = mod_pow(inst.g, a1, inst.p) * mod_pow(inst.b, c1, inst.p) % inst.p;
    Int a2 = a1, c2 = c1, y2 = y1;

    for (Int it = 0; it < iter_cap; ++it) {
      step(y1, a1, c1);
      step(y2, a2, c2);
      step(y2, a2, c2);
      ++res.counters.candidates_tested;
      if (y1 != y2) continue;

      // g^{a1} b^{c1} = g^{a2} b^{c2}  =>  (c1 - c2) x = a2 - a1 (mod n)
      Int d = ((c1 - c2) % n + n) % n;
      Int rhs = ((a2 - a1) % n + n) % n;
      Int g0;
      mpz_gcd(g0.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      if (d == 0 || g0 > opts.derive_scan_cap) break;  // degenerate collision
      for (const Int& x : solve_linear_congruence(d, rhs, n)) {
        if (verify_solution(inst, x)) {
          res.x = reduce_mod_order(inst, x, fact_n);
          res.counters.rounds = restart + 1;
          return res;
        }
      }
      break;
    }
  }
  res.status = SolveStatus::kBudgetExceeded;
  return res;
}

SolveResult solve_pohlig_hellman(const DlpInstance& inst, const SolveOptions& opts) {
  SolveResult res;
  res.algorithm = "ph";
  ElapsedGuard guard{res.counters};
  check_instance(inst);
  if (inst.b == 1) {
    res.x = 0;
    return res;
  }

  const Int n = inst.p - 1;
  const Factorization fact_n = factor_integer(n);
  const Int ord = multiplicative_order(inst.g, inst.p, fact_n);
  if (mod_pow(inst.b, ord, inst.p) != 1) {
    res.status = SolveStatus::kNoSolution;
    return res;
  }

  std::vector<Int> residues, moduli;
  for (const auto& [q, e_max] : fact_n.factors) {
    unsigned e = 0;
    Int qe = 1;
    while (e < e_max && ord % (qe * q) == 0) {
      qe *= q;
      ++e;
    }
    if (e == 0) continue;

    const Int g_q = mod_pow(inst.g, ord / qe, inst.p);  // order q^e
    const Int b_q = mod_pow(inst.b, ord / qe, inst.p);
    const Int gamma = mod_pow(inst.g, ord / q, inst.p);  // order q

    // Digit-by-digit lift of x mod q^e.
    Int x_q = 0;
    Int q_pow = 1;
    for (unsigned i = 0; i < e; ++i) {
      Int shifted = b_q * *mod_inv(mod_pow(g_q, x_q, inst.p), inst.p) % inst.p;
      Int exponent = qe / (q_pow * q);
      Int h = mod_pow(shifted, exponent, inst.p);
      DlpInstance digit_inst{inst.p, gamma, h, std::nullopt};
      if (h == 1) {
        q_pow *= q;
        continue;  // digit 0
      }
      SolveResult digit = solve_bsgs(digit_inst, Int(q), opts);
      res.counters.candidates_tested += digit.counters.candidates_tested;
      if (!digit.ok()) {
        res.status = SolveStatus::kNoSolution;
        return res;
      }
      x_q += digit.x * q_pow;
      q_pow *= q;
    }
    residues.push_back(x_q);
    moduli.push_back(qe);
  }

  Int x = residues.empty() ? Int(0) : crt_combine(residues, moduli);
  if (!verify_solution(inst, x)) {
    res.status = SolveStatus::kNoSolution;
    return res;
  }
  res.x = x;
  return res;
}

namespace {

// Round machinery shared by index calculus, double index calculus and the
// table-size probe: accumulate relation rows for one base element, partially
// solve, and keep only exponentiation-verified prime logs.
//
// Systems are solved modulo ord(base_elem), the modulus the relations are
// actually true under. For a generator this is exactly p-1; for smaller
// orders the p-1 system would wedge itself: residues of base^t then live in
// a proper subgroup, every reachable exponent vector obeys the matching
// parity constraints, and prime logs stay forever ambiguous between their
// lifts even though any lift verifies.
class BasePipeline {
 public:
  BasePipeline(const DlpInstance& inst, const Int& base_elem, const FactorBase& fb,
               const Factorization& fact_n)
      : inst_(inst), fb_(fb) {
    table_.base_elem = base_elem;
    order_ = multiplicative_order(base_elem, inst.p, fact_n);
    fact_order_.value = order_;
    for (const auto& [q, e] : fact_n.factors) {
      unsigned ord_exp = 0;
      Int rest = order_;
      while (ord_exp < e && rest % q == 0) {
        rest /= q;
        ++ord_exp;
      }
      if (ord_exp > 0) fact_order_.factors.emplace_back(q, ord_exp);
    }
  }

  // Appends up to `count` fresh relations. Returns false once the cumulative
  // candidate budget for this base is exhausted.
  bool collect(std::size_t count, Rng& rng, std::uint64_t max_candidates) {
    if (candidates_ >= max_candidates) return false;
    RelationSearchOptions ropts;
    ropts.max_candidates = max_candidates - candidates_;
    RelationBatch batch = collect_relations(table_.base_elem, inst_.p, fb_, count, rng, ropts);
    candidates_ += batch.candidates_tested;
    smooth_ += batch.relations.size();
    for (Relation& rel : batch.relations) {
      // base^t = 1 rows carry only subgroup-order information; as rows over
      // Z_{p-1} they would poison the system whenever t != 0.
      bool all_zero = std::all_of(rel.exponents.begin(), rel.exponents.end(),
                                  [](std::uint32_t e) { return e == 0; });
      if (!all_zero) rows_.push_back(std::move(rel));
    }
    return !batch.budget_exhausted;
  }

  // Re-solves the accumulated system and folds newly determined, verified
  // logs into the table.
  void resolve() {
    if (rows_.empty()) return;
    PartialSolution sol = solve_partial_rows(rows_);
    if (sol.inconsistent) {
      prune_contradictions();
      if (rows_.empty()) return;
      sol = solve_partial_rows(rows_);
      if (sol.inconsistent) return;
    }
    for (const auto& [col, value] : sol.determined) {
      std::uint64_t prime = fb_.primes[col];
      if (table_.entries.count(prime)) continue;
      if (mod_pow(table_.base_elem, value, inst_.p) == prime)
        table_.entries.emplace(prime, value);
      else
        saw_verification_failure_ = true;
    }
  }

  const PartialLogTable& table() const { return table_; }
  std::uint64_t candidates() const { return candidates_; }
  std::uint64_t smooth() const { return smooth_; }
  bool saw_verification_failure() const { return saw_verification_failure_; }

 private:
  PartialSolution solve_partial_rows(const std::vector<Relation>& rows) const {
    EquationSystem sys(order_, fb_.size());
    for (const Relation& rel : rows) {
      std::vector<Int> coeffs(rel.exponents.begin(), rel.exponents.end());
      sys.add_row(std::move(coeffs), rel.t);
    }
    return solve_partial(sys, Decomposition::kFactorize, &fact_order_);
  }

  // Even modulo ord(base) a system can go inconsistent when factor-base
  // primes outside <base> combine into reachable products whose joint log
  // constraints admit no extension. Keep the earliest consistent subset and
  // drop the offenders for good.
  void prune_contradictions() {
    std::vector<Relation> kept;
    for (Relation& rel : rows_) {
      kept.push_back(std::move(rel));
      if (solve_partial_rows(kept).inconsistent) kept.pop_back();
    }
    rows_ = std::move(kept);
  }

  const DlpInstance& inst_;
  const FactorBase& fb_;
  Int order_;
  Factorization fact_order_;
  std::vector<Relation> rows_;
  PartialLogTable table_;
  std::uint64_t candidates_ = 0;
  std::uint64_t smooth_ = 0;
  bool saw_verification_failure_ = false;
};

std::vector<std::uint64_t> table_intersection(const PartialLogTable& a, const PartialLogTable& b) {
  std::vector<std::uint64_t> out;
  for (const auto& [prime, log] : a.entries)
    if (b.entries.count(prime)) out.push_back(prime);
  return out;
}

}  // namespace

SolveResult solve_index_calculus(const DlpInstance& inst, std::uint64_t bound, Rng& rng,
                                 const SolveOptions& opts) {
  SolveResult res;
  res.algorithm = "ic";
  ElapsedGuard guard{res.counters};
  check_instance(inst);
  if (inst.b == 1) {
    res.x = 0;
    return res;
  }

  const FactorBase fb = build_factor_base(bound);
  const std::size_t k = fb.size();
  const Int n = inst.p - 1;
  const Factorization fact_n = factor_integer(n);
  BasePipeline pipeline(inst, inst.g, fb, fact_n);

  bool logs_complete = false;
  for (std::uint64_t round = 1; round <= opts.max_rounds && !logs_complete; ++round) {
    res.counters.rounds = round;
    bool within_budget = pipeline.collect(k, rng, opts.max_candidates);
    pipeline.resolve();
    logs_complete = pipeline.table().entries.size() == k;
    if (!within_budget) break;
  }
  res.counters.candidates_tested = pipeline.candidates();
  res.counters.smooth_found = pipeline.smooth();

  if (!logs_complete) {
    res.status = pipeline.saw_verification_failure() ? SolveStatus::kGeneralityFailure
                                                     : SolveStatus::kBudgetExceeded;
    return res;
  }

  // Phase 2: find t with b*g^t smooth, then x = sum(e_i log_g p_i) - t.
  const auto& logs = pipeline.table().entries;
  while (res.counters.candidates_tested < opts.max_candidates) {
    Int t = rng.range(1, inst.p - 2);
    ++res.counters.candidates_tested;
    Int y = inst.b * mod_pow(inst.g, t, inst.p) % inst.p;
    auto exps = factor_over_base(y, fb);
    if (!exps) continue;
    ++res.counters.smooth_found;
    Int x = -t;
    for (std::size_t i = 0; i < k; ++i)
      if ((*exps)[i] != 0) x += Int((*exps)[i]) * logs.at(fb.primes[i]);
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    if (verify_solution(inst, x)) {
      res.x = reduce_mod_order(inst, x, fact_n);
      return res;
    }
  }
  res.status = SolveStatus::kBudgetExceeded;
  return res;
}

SolveResult solve_double_index_calculus(const DlpInstance& inst, std::uint64_t bound,
                                        bool parallel, Rng& rng_g, Rng& rng_b,
                                        const SolveOptions& opts) {
  SolveResult res;
  res.algorithm = parallel ? "dic-parallel" : "dic";
  ElapsedGuard guard{res.counters};
  check_instance(inst);
  if (inst.b == 1) {
    res.x = 0;
    return res;
  }

  const FactorBase fb = build_factor_base(bound);
  const std::size_t k = fb.size();
  const Int n = inst.p - 1;
  const Factorization fact_n = factor_integer(n);
  BasePipeline pipe_g(inst, inst.g, fb, fact_n);
  BasePipeline pipe_b(inst, inst.b, fb, fact_n);

  std::set<std::uint64_t> derive_failed;
  bool any_match_seen = false;

  for (std::uint64_t round = 1; round <= opts.max_rounds; ++round) {
    res.counters.rounds = round;
    bool budget_g = true, budget_b = true;
    auto round_g = [&] {
      budget_g = pipe_g.collect(k, rng_g, opts.max_candidates);
      pipe_g.resolve();
    };
    auto round_b = [&] {
      budget_b = pipe_b.collect(k, rng_b, opts.max_candidates);
      pipe_b.resolve();
    };
    if (parallel) {
      std::thread tg(round_g), tb(round_b);
      tg.join();
      tb.join();
    } else {
      round_g();
      round_b();
    }

    std::vector<std::uint64_t> matches = table_intersection(pipe_g.table(), pipe_b.table());
    if (opts.round_observer)
      opts.round_observer(pipe_g.table().entries.size(), pipe_b.table().entries.size(),
                          !matches.empty());

    for (std::uint64_t prime : matches) {  // ascending: std::set order
      if (derive_failed.count(prime)) continue;
      any_match_seen = true;
      const Int& alpha = pipe_g.table().entries.at(prime);
      const Int& beta = pipe_b.table().entries.at(prime);
      auto x = derive_x_from_match(alpha, beta, n, inst, opts.derive_scan_cap);
      if (x) {
        res.x = reduce_mod_order(inst, *x, fact_n);
        res.matched_prime = prime;
        res.counters.candidates_tested = pipe_g.candidates() + pipe_b.candidates();
        res.counters.smooth_found = pipe_g.smooth() + pipe_b.smooth();
        return res;
      }
      derive_failed.insert(prime);
    }
    if (!budget_g || !budget_b) break;
  }

  res.counters.candidates_tested = pipe_g.candidates() + pipe_b.candidates();
  res.counters.smooth_found = pipe_g.smooth() + pipe_b.smooth();
  res.status = any_match_seen ? SolveStatus::kDerivationFailure : SolveStatus::kBudgetExceeded;
  return res;
}

TableSizeProbe probe_table_match(const DlpInstance& inst, std::uint64_t bound, std::size_t u,
                                 std::size_t v, Rng& rng_g, Rng& rng_b,
                                 const SolveOptions& opts) {
  check_instance(inst);
  const FactorBase fb = build_factor_base(bound);
  const Factorization fact_n = factor_integer(inst.p - 1);
  BasePipeline pipe_g(inst, inst.g, fb, fact_n);
  BasePipeline pipe_b(inst, inst.b, fb, fact_n);

  TableSizeProbe probe;
  bool stuck = false;
  while (!stuck) {
    stuck = true;
    if (pipe_g.table().entries.size() < u) {
      if (pipe_g.collect(1, rng_g, opts.max_candidates)) stuck = false;
      pipe_g.resolve();
    }
    if (pipe_b.table().entries.size() < v) {
      if (pipe_b.collect(1, rng_b, opts.max_candidates)) stuck = false;
      pipe_b.resolve();
    }
    if (pipe_g.table().entries.size() >= u && pipe_b.table().entries.size() >= v) {
      probe.reached_target = true;
      break;
    }
  }
  probe.size_g = pipe_g.table().entries.size();
  probe.size_b = pipe_b.table().entries.size();
  probe.matched = !table_intersection(pipe_g.table(), pipe_b.table()).empty();
  return probe;
}

}  // namespace dlog
