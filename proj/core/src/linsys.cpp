#include "dlog/linsys.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace dlog {

void EquationSystem::add_row(std::vector<Int> row_coeffs, Int row_rhs) {
  if (row_coeffs.size() != columns)
    throw std::invalid_argument("EquationSystem::add_row: wrong coefficient count");
  for (Int& c : row_coeffs) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
  }
  mpz_fdiv_r(row_rhs.get_mpz_t(), row_rhs.get_mpz_t(), modulus.get_mpz_t());
  coeffs.push_back(std::move(row_coeffs));
  rhs.push_back(std::move(row_rhs));
}

namespace {

// Arithmetic over Z_m for one coprime component: machine-word path for
// m < 2^62, mpz fallback above.
struct U64Ops {
  using T = std::uint64_t;
  std::uint64_t m;

  T reduce(const Int& x) const { return mpz_fdiv_ui(x.get_mpz_t(), m); }
  T mul(T a, T b) const {
    if (m < (std::uint64_t{1} << 32)) return a * b % m;
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
  }
  T add(T a, T b) const {
    T s = a + b;  // both < m < 2^62, no overflow
    return s >= m ? s - m : s;
  }
  T sub(T a, T b) const { return a >= b ? a - b : a + (m - b); }
  bool is_zero(T a) const { return a == 0; }
  T inv_unit(T a) const {
    __int128 t = 0, nt = 1, r = m, nr = a;
    while (nr != 0) {
      __int128 q = r / nr;
      __int128 tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += m;
    return static_cast<T>(t);
  }
  bool divisible(T a, T d) const { return a % d == 0; }
  T divexact(T a, T d) const { return a / d; }
  Int to_int(T a) const { return Int(a); }
  bool is_unit(T a) const { return std::gcd(a, m) == 1; }
};

struct MpzOps {
  using T = Int;
  Int m;

  T reduce(const Int& x) const {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
  }
  T mul(const T& a, const T& b) const { return a * b % m; }
  T add(const T& a, const T& b) const {
    Int s = a + b;
    if (s >= m) s -= m;
    return s;
  }
  T sub(const T& a, const T& b) const { return a >= b ? Int(a - b) : Int(a + m - b); }
  bool is_zero(const T& a) const { return a == 0; }
  T inv_unit(const T& a) const { return *mod_inv(a, m); }
  bool divisible(const T& a, const T& d) const { return a % d == 0; }
  T divexact(const T& a, const T& d) const { return a / d; }
  Int to_int(const T& a) const { return a; }
  bool is_unit(const T& a) const {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return g == 1;
  }
};

struct ComponentOutcome {
  bool inconsistent = false;
  std::size_t pivots = 0;
  // One entry per column: the unique value mod the component modulus, or
  // nullopt when the column is ambiguous (or conservatively unresolved).
  std::vector<std::optional<Int>> values;
};

// Elimination with tracked column operations (x = V z). `local` means the
// modulus is a known prime power q^e: pivots are chosen by minimal
// q-valuation, which always succeeds on a nonzero block and gives the exact
// solution structure over the local ring Z_{q^e}. The generic mode (gcd-split
// components that resisted prime-power detection) pivots on units only and
// leaves whatever it cannot reach conservatively undetermined.
template <class Ops>
ComponentOutcome eliminate_component(const EquationSystem& sys, const Ops& ops, bool local,
                                     const typename Ops::T& q, unsigned e) {
  using T = typename Ops::T;
  const std::size_t n_rows = sys.rows();
  const std::size_t n_cols = sys.columns;

  std::vector<std::vector<T>> a(n_rows, std::vector<T>(n_cols));
  std::vector<T> t(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) a[i][j] = ops.reduce(sys.coeffs[i][j]);
    t[i] = ops.reduce(sys.rhs[i]);
  }

  std::vector<std::vector<T>> v(n_cols, std::vector<T>(n_cols, T(0)));
  for (std::size_t j = 0; j < n_cols; ++j) v[j][j] = T(1);

  // q^0 .. q^e as plain integers; q^e equals the component modulus.
  std::vector<T> qpow;
  if (local) {
    qpow.resize(e + 1);
    qpow[0] = T(1);
    for (unsigned i = 1; i <= e; ++i) qpow[i] = T(qpow[i - 1] * q);
  }
  auto valuation = [&](const T& x) -> unsigned {
    unsigned val = 0;
    T y = x;
    while (val < e && ops.divisible(y, q)) {
      y = ops.divexact(y, q);
      ++val;
    }
    return val;
  };

  std::vector<unsigned> pivot_vals;
  std::size_t pr = 0;
  for (std::size_t step = 0; step < n_cols && pr < n_rows; ++step) {
    std::size_t best_i = 0, best_j = 0;
    unsigned best_v = e + 1;
    bool found = false;
    for (std::size_t i = pr; i < n_rows && best_v > 0; ++i) {
      for (std::size_t j = step; j < n_cols; ++j) {
        if (ops.is_zero(a[i][j])) continue;
        if (local) {
          unsigned val = valuation(a[i][j]);
          if (val < best_v) {
            best_v = val;
            best_i = i;
            best_j = j;
            found = true;
            if (val == 0) break;
          }
        } else if (ops.is_unit(a[i][j])) {
          best_v = 0;
          best_i = i;
          best_j = j;
          found = true;
          break;
        }
      }
    }
    if (!found) break;

    std::swap(a[pr], a[best_i]);
    std::swap(t[pr], t[best_i]);
    if (best_j != step) {
      for (std::size_t i = 0; i < n_rows; ++i) std::swap(a[i][step], a[i][best_j]);
      for (std::size_t i = 0; i < n_cols; ++i) std::swap(v[i][step], v[i][best_j]);
    }

    const unsigned pv = best_v;
    // Scale the pivot row so the pivot becomes exactly q^pv (1 for units).
    T unit = pv == 0 ? a[pr][step] : ops.divexact(a[pr][step], qpow[pv]);
    T uinv = ops.inv_unit(unit);
    for (std::size_t j = step; j < n_cols; ++j) a[pr][j] = ops.mul(a[pr][j], uinv);
    t[pr] = ops.mul(t[pr], uinv);

    // Row operations clear the pivot column below; every entry there has
    // valuation >= pv, so the multiplier is exact.
    for (std::size_t i = pr + 1; i < n_rows; ++i) {
      if (ops.is_zero(a[i][step])) continue;
      T f = pv == 0 ? a[i][step] : ops.divexact(a[i][step], qpow[pv]);
      for (std::size_t j = step; j < n_cols; ++j)
        a[i][j] = ops.sub(a[i][j], ops.mul(f, a[pr][j]));
      t[i] = ops.sub(t[i], ops.mul(f, t[pr]));
      a[i][step] = T(0);
    }
    // Column operations clear the pivot row to the right (tracked in V).
    for (std::size_t j = step + 1; j < n_cols; ++j) {
      if (ops.is_zero(a[pr][j])) continue;
      T f = pv == 0 ? a[pr][j] : ops.divexact(a[pr][j], qpow[pv]);
      for (std::size_t i = 0; i < n_cols; ++i) v[i][j] = ops.sub(v[i][j], ops.mul(f, v[i][step]));
      a[pr][j] = T(0);
    }

    pivot_vals.push_back(pv);
    ++pr;
  }

  ComponentOutcome out;
  out.pivots = pr;
  out.values.assign(n_cols, std::nullopt);

  // In local mode the loop only stops on an all-zero block, so remaining rows
  // are pure consistency constraints. In generic mode a nonzero non-unit
  // block may survive; its rows cannot be checked and its columns stay free.
  for (std::size_t i = pr; i < n_rows; ++i) {
    bool zero_row = true;
    for (std::size_t j = 0; j < n_cols; ++j)
      if (!ops.is_zero(a[i][j])) {
        zero_row = false;
        break;
      }
    if (zero_row && !ops.is_zero(t[i])) {
      out.inconsistent = true;
      return out;
    }
  }

  // Pivot rows read q^pv * z_i = t_i: solvable iff q^pv divides t_i, and z_i
  // is then unique modulo q^(e-pv) (truly unique only for unit pivots).
  std::vector<T> z0(n_cols, T(0));
  for (std::size_t i = 0; i < pr; ++i) {
    if (pivot_vals[i] == 0) {
      z0[i] = t[i];
      continue;
    }
    const T& d = qpow[pivot_vals[i]];
    if (!ops.divisible(t[i], d)) {
      out.inconsistent = true;
      return out;
    }
    z0[i] = ops.divexact(t[i], d);
  }

  for (std::size_t row = 0; row < n_cols; ++row) {
    bool unique = true;
    // Kernel directions: q^(e-pv) along ramified pivot columns, whole lines
    // along free columns. x_row is pinned iff V annihilates all of them.
    for (std::size_t i = 0; i < pr && unique; ++i) {
      if (pivot_vals[i] == 0) continue;
      if (!ops.divisible(v[row][i], qpow[pivot_vals[i]])) unique = false;
    }
    for (std::size_t i = pr; i < n_cols && unique; ++i)
      if (!ops.is_zero(v[row][i])) unique = false;
    if (!unique) continue;
    T x0 = T(0);
    for (std::size_t i = 0; i < pr; ++i) x0 = ops.add(x0, ops.mul(v[row][i], z0[i]));
    out.values[row] = ops.to_int(x0);
  }
  return out;
}

ComponentOutcome solve_component(const EquationSystem& sys, const Int& m, const Int& q,
                                 unsigned e) {
  const bool local = q != 0;
  if (mpz_sizeinbase(m.get_mpz_t(), 2) <= 62) {
    U64Ops ops{mpz_get_ui(m.get_mpz_t())};
    std::uint64_t qq = local ? mpz_get_ui(q.get_mpz_t()) : 0;
    return eliminate_component(sys, ops, local, qq, e);
  }
  MpzOps ops{m};
  return eliminate_component(sys, ops, local, q, e);
}

// Prime-power shape test used by the gcd-split mode: root extraction only,
// no general factoring.
std::optional<std::pair<Int, unsigned>> as_prime_power(const Int& m) {
  if (is_probable_prime(m)) return std::make_pair(m, 1u);
  if (mpz_perfect_power_p(m.get_mpz_t()) == 0) return std::nullopt;
  for (unsigned k = 2; k <= mpz_sizeinbase(m.get_mpz_t(), 2); ++k) {
    Int root;
    if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) {
      if (is_probable_prime(root)) return std::make_pair(root, k);
      auto inner = as_prime_power(root);
      if (inner) return std::make_pair(inner->first, inner->second * k);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// Pairwise-coprime component moduli via gcd pumping against matrix entries.
std::vector<Int> gcd_split_components(const EquationSystem& sys) {
  std::vector<Int> components{sys.modulus};
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ci = 0; ci < components.size() && !changed; ++ci) {
      const Int& m = components[ci];
      if (m < 4 || is_probable_prime(m)) continue;
      for (const auto& row : sys.coeffs) {
        for (const Int& entry : row) {
          Int r;
          mpz_fdiv_r(r.get_mpz_t(), entry.get_mpz_t(), m.get_mpz_t());
          if (r == 0) continue;
          Int g;
          mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
          if (g == 1 || g == m) continue;
          auto split = coprime_split(m, r);
          if (!split) continue;
          components[ci] = split->first;
          components.push_back(split->second);
          changed = true;
          break;
        }
        if (changed) break;
      }
    }
  }
  std::sort(components.begin(), components.end());
  return components;
}

}  // namespace

PartialSolution solve_partial(const EquationSystem& system, Decomposition mode,
                              const Factorization* fact) {
  if (system.columns == 0) throw std::invalid_argument("solve_partial: zero columns");
  if (system.rows() == 0) throw std::invalid_argument("solve_partial: empty system");
  if (system.modulus < 2) throw std::invalid_argument("solve_partial: modulus must be >= 2");

  struct Component {
    Int m;
    Int q;       // 0 when not known to be a prime power
    unsigned e;  // meaningful only when q != 0
  };
  std::vector<Component> comps;

  if (mode == Decomposition::kFactorize) {
    Factorization local;
    const Factorization* f = fact;
    if (f == nullptr || f->value != system.modulus) {
      local = factor_integer(system.modulus);
      f = &local;
    }
    for (const auto& [q, e] : f->factors) {
      Int m;
      mpz_pow_ui(m.get_mpz_t(), q.get_mpz_t(), e);
      comps.push_back({m, q, e});
    }
  } else {
    for (const Int& m : gcd_split_components(system)) {
      auto pp = as_prime_power(m);
      if (pp)
        comps.push_back({m, pp->first, pp->second});
      else
        comps.push_back({m, Int(0), 1});
    }
  }

  PartialSolution out;
  std::vector<std::vector<std::optional<Int>>> per_comp;
  per_comp.reserve(comps.size());
  for (const auto& comp : comps) {
    ComponentOutcome res = solve_component(system, comp.m, comp.q, comp.e);
    if (res.inconsistent) {
      out.inconsistent = true;
      out.determined.clear();
      return out;
    }
    out.rank_note = std::max(out.rank_note, res.pivots);
    per_comp.push_back(std::move(res.values));
  }

  for (std::size_t col = 0; col < system.columns; ++col) {
    std::vector<Int> residues, moduli;
    bool everywhere = true;
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      if (!per_comp[ci][col]) {
        everywhere = false;
        break;
      }
      residues.push_back(*per_comp[ci][col]);
      moduli.push_back(comps[ci].m);
    }
    if (everywhere) out.determined.emplace(col, crt_combine(residues, moduli));
  }
  return out;
}

}  // namespace dlog
