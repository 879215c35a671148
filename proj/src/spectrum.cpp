#include "canspec/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "canspec/errors.hpp"
#include "canspec/numtheory.hpp"

namespace canspec::spectrum {

namespace {

// Exact test for delta > log(#B)/log(N): with delta = num/den this is
// N^num > #B^den on integers.
bool threshold_exceeds_dimension(const Rational& delta, long long digit_count,
                                 long long N) {
  const unsigned long num = mpz_get_ui(delta.num().get_mpz_t());
  const unsigned long den = mpz_get_ui(delta.den().get_mpz_t());
  BigInt lhs, rhs;
  mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(N), num);
  mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(digit_count), den);
  return lhs > rhs;
}

// Minimal witness order: denominator, then |numerator|, then value.
bool witness_before(const Rational& a, const Rational& b) {
  const int dc = mpz_cmp(a.den().get_mpz_t(), b.den().get_mpz_t());
  if (dc != 0) return dc < 0;
  const int nc = mpz_cmpabs(a.num().get_mpz_t(), b.num().get_mpz_t());
  if (nc != 0) return nc < 0;
  return a < b;
}

}  // namespace

selfsimilar::DigitSystem dual_system(const HadamardTriple& t, long long scale) {
  if (scale < 1) throw domain_error("digit scale must be positive");
  std::vector<Rational> digits;
  digits.reserve(t.L().size());
  for (long long l : t.L()) digits.emplace_back(scale * l);
  return selfsimilar::DigitSystem(t.N(), std::move(digits));
}

std::vector<ExtremeCycle> extreme_cycles(const HadamardTriple& t) {
  const selfsimilar::DigitSystem dual = dual_system(t);
  std::vector<Rational> cand;
  for (const Rational& x : selfsimilar::lattice_points(dual, t.d()))
    if (is_extremal(t, x)) cand.push_back(x);

  // Edges i -> j labeled l whenever (cand[i] + l)/N = cand[j].
  const std::size_t n = cand.size();
  const Rational base(t.N());
  std::vector<std::vector<std::pair<std::size_t, long long>>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (long long l : t.L()) {
      const Rational y = (cand[i] + Rational(l)) / base;
      const auto it = std::lower_bound(cand.begin(), cand.end(), y);
      if (it != cand.end() && *it == y)
        adj[i].push_back({static_cast<std::size_t>(it - cand.begin()), l});
    }

  // Simple cycles, each found once anchored at its smallest point: paths
  // from the anchor may only pass through larger indices.
  std::vector<ExtremeCycle> cycles;
  std::vector<std::size_t> path;
  std::vector<long long> labels;
  std::vector<char> on_path(n, 0);
  for (std::size_t anchor = 0; anchor < n; ++anchor) {
    auto dfs = [&](auto&& self, std::size_t v) -> void {
      for (const auto& [w, l] : adj[v]) {
        if (w == anchor) {
          ExtremeCycle c;
          for (std::size_t k : path) c.points.push_back(cand[k]);
          c.labels = labels;
          c.labels.push_back(l);
          cycles.push_back(std::move(c));
        } else if (w > anchor && !on_path[w]) {
          on_path[w] = 1;
          path.push_back(w);
          labels.push_back(l);
          self(self, w);
          labels.pop_back();
          path.pop_back();
          on_path[w] = 0;
        }
      }
    };
    path.assign(1, anchor);
    labels.clear();
    on_path[anchor] = 1;
    dfs(dfs, anchor);
    on_path[anchor] = 0;
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const ExtremeCycle& a, const ExtremeCycle& b) {
              return a.points < b.points;
            });
  return cycles;
}

SpectrumLevels canonical_levels(const HadamardTriple& t, unsigned n,
                                std::size_t budget) {
  const selfsimilar::DigitSystem dual = dual_system(t);
  std::vector<Rational> level0;
  for (const Rational& x : selfsimilar::lattice_points(dual, t.d()))
    level0.push_back(-x);
  std::sort(level0.begin(), level0.end());

  std::size_t projected = level0.size();
  for (unsigned k = 0; k < n; ++k) {
    if (projected > budget / t.L().size())
      throw resource_error("level growth exceeds the budget");
    projected *= t.L().size();
  }

  SpectrumLevels out{t, {std::move(level0)}};
  const Rational base(t.N());
  for (unsigned k = 1; k <= n; ++k) {
    std::set<Rational> next;
    for (const Rational& x : out.levels.back())
      for (long long l : t.L()) next.insert(x * base + Rational(l));
    out.levels.emplace_back(next.begin(), next.end());
  }
  return out;
}

std::vector<BigInt> lambda_NL(long long N, const std::vector<long long>& L,
                              unsigned n, std::size_t budget) {
  if (N < 2) throw domain_error("base must be at least 2");
  if (std::find(L.begin(), L.end(), 0) == L.end())
    throw domain_error("digit set must contain 0");
  // Horner over word length: after step k the set holds all sums of
  // k+1 digits; since 0 is a digit, shorter sums are already included.
  std::set<BigInt> cur;
  for (long long l : L) cur.insert(BigInt(static_cast<long>(l)));
  const BigInt base(static_cast<long>(N));
  for (unsigned k = 0; k < n; ++k) {
    if (cur.size() > budget / L.size())
      throw resource_error("expansion growth exceeds the budget");
    std::set<BigInt> next;
    for (const BigInt& s : cur)
      for (long long l : L) next.insert(s * base + static_cast<long>(l));
    cur = std::move(next);
  }
  return {cur.begin(), cur.end()};
}

EigenvalueVerdict is_spectral_eigenvalue(const HadamardTriple& t, long long q) {
  if (q <= 0) throw domain_error("scaling must be a positive integer");
  if (std::gcd(q, t.N()) != 1)
    throw domain_error("scaling must be coprime to the base");
  EigenvalueVerdict v;
  v.q = q;
  if (q == 1) {
    v.is_eigenvalue = true;
    v.methods_agreed = true;
    return v;
  }
  const long long d = t.d();
  if (d > std::numeric_limits<long long>::max() / q)
    throw resource_error("scaled slice denominator overflows");

  const selfsimilar::DigitSystem dual = dual_system(t);
  const std::vector<Rational> fine = selfsimilar::lattice_points(dual, q * d);
  const std::vector<Rational> coarse = selfsimilar::lattice_points(dual, d);
  const bool direct = fine == coarse;

  // Independent form: the d-scaled attractor compared at denominators q
  // and 1.  Scaling by d maps one slice pair onto the other, so the two
  // verdicts must coincide.
  const selfsimilar::DigitSystem scaled = dual_system(t, d);
  const bool rescaled = selfsimilar::lattice_points(scaled, q) ==
                        selfsimilar::lattice_points(scaled, 1);
  if (direct != rescaled)
    throw std::logic_error("eigenvalue decision forms disagree");
  v.methods_agreed = true;
  v.is_eigenvalue = direct;
  if (!direct) {
    std::vector<Rational> diff;
    std::set_difference(fine.begin(), fine.end(), coarse.begin(), coarse.end(),
                        std::back_inserter(diff));
    assert(!diff.empty());  // fine is a superset, inequality means strict
    v.witness = *std::min_element(diff.begin(), diff.end(), witness_before);
  }
  return v;
}

ScanReport eigenvalue_scan(const HadamardTriple& t, long long x,
                           unsigned workers) {
  if (x < 2) throw domain_error("scan bound must be at least 2");
  ScanReport rep;
  rep.x = x;
  std::vector<long long> ps;
  for (std::uint64_t p : numtheory::sieve_primes(static_cast<std::uint64_t>(x)))
    if (std::gcd(static_cast<long long>(p), t.N()) == 1)
      ps.push_back(static_cast<long long>(p));
  rep.rows.resize(ps.size());

  const Rational half(1, 2), strict(677, 1000);
  const auto scan_one = [&](std::size_t i) {
    const long long p = ps[i];
    ScanRow row;
    row.p = p;
    EigenvalueVerdict v = is_spectral_eigenvalue(t, p);
    row.is_eigenvalue = v.is_eigenvalue;
    row.witness = std::move(v.witness);
    const auto pu = static_cast<std::uint64_t>(p);
    const auto nu = static_cast<std::uint64_t>(t.N());
    row.ord = numtheory::multiplicative_order(nu, pu);
    row.in_a_half = numtheory::in_A(nu, half, pu);
    row.in_a_0677 = numtheory::in_A(nu, strict, pu);
    rep.rows[i] = std::move(row);
  };
  const unsigned nw = std::min<unsigned>(std::max(1u, workers),
                                         std::max<std::size_t>(ps.size(), 1));
  if (nw <= 1) {
    for (std::size_t i = 0; i < ps.size(); ++i) scan_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nw; ++w)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < ps.size();
             i = next.fetch_add(1))
          scan_one(i);
      });
    for (auto& th : pool) th.join();
  }

  for (const ScanRow& row : rep.rows)
    if (row.is_eigenvalue) ++rep.eigenvalue_count;
  rep.eigenvalue_fraction =
      rep.rows.empty() ? 0.0
                       : static_cast<double>(rep.eigenvalue_count) /
                             static_cast<double>(rep.rows.size());

  const long long digit_count = static_cast<long long>(t.B().size());
  for (const Rational& delta : {half, strict}) {
    DeltaCheck check;
    check.delta = delta;
    check.active = threshold_exceeds_dimension(delta, digit_count, t.N());
    for (const ScanRow& row : rep.rows) {
      const bool in_class = (delta == half) ? row.in_a_half : row.in_a_0677;
      if (in_class && !row.is_eigenvalue) check.violations.push_back(row.p);
    }
    rep.checks.push_back(std::move(check));
  }
  return rep;
}

PowerClosureReport power_closure_check(const HadamardTriple& t,
                                       std::vector<long long> primes,
                                       unsigned M, unsigned exponent_budget) {
  if (primes.empty()) throw domain_error("need at least one prime");
  if (M == 0) throw domain_error("scan depth must be positive");
  if (exponent_budget == 0) throw domain_error("exponent budget must be positive");
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    throw domain_error("primes must be distinct");
  long long product = 1;
  for (long long p : primes) {
    if (p < 2 || !numtheory::is_prime_u64(static_cast<std::uint64_t>(p)))
      throw domain_error("every entry must be prime");
    if (std::gcd(p, t.N()) != 1)
      throw domain_error("primes must be coprime to the base");
    if (product > std::numeric_limits<long long>::max() / p)
      throw resource_error("prime product overflows");
    product *= p;
  }

  PowerClosureReport rep;
  rep.primes = std::move(primes);
  rep.product = product;
  rep.levels = selfsimilar::dp_intersection(dual_system(t, t.d()), product, M);
  rep.stabilization_height = rep.levels.stabilization_index;
  if (!rep.stabilization_height) return rep;  // not observed within M

  __int128 base_q = 1;
  for (unsigned k = 0; k < *rep.stabilization_height; ++k) {
    base_q *= product;
    if (base_q > std::numeric_limits<long long>::max())
      throw resource_error("stabilized power overflows");
  }
  rep.base = is_spectral_eigenvalue(t, static_cast<long long>(base_q));
  if (!rep.base->is_eigenvalue) return rep;

  // Every product of the primes with total exponent in [1, budget].
  std::set<long long> targets;
  auto expand = [&](auto&& self, std::size_t i, long long cur,
                    unsigned remaining) -> void {
    if (i == rep.primes.size()) {
      if (cur > 1) targets.insert(cur);
      return;
    }
    self(self, i + 1, cur, remaining);
    long long scaled = cur;
    for (unsigned e = 1; e <= remaining; ++e) {
      if (scaled > std::numeric_limits<long long>::max() / rep.primes[i])
        throw resource_error("exponent budget overflows the scaling range");
      scaled *= rep.primes[i];
      self(self, i + 1, scaled, remaining - e);
    }
  };
  expand(expand, 0, 1, exponent_budget);
  for (long long q : targets) rep.products.push_back(is_spectral_eigenvalue(t, q));
  return rep;
}

}  // namespace canspec::spectrum
