#include "canspec/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>

namespace canspec {

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) {
  trim();
}

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::monomial(unsigned n, const BigInt& c) {
  std::vector<BigInt> v(n + 1, BigInt(0));
  v[n] = c;
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
  std::vector<BigInt> v(std::max(c_.size(), o.c_.size()), BigInt(0));
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const {
  std::vector<BigInt> v(std::max(c_.size(), o.c_.size()), BigInt(0));
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] -= o.c_[i];
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
  if (is_zero() || o.is_zero()) return IntPolynomial();
  std::vector<BigInt> v(c_.size() + o.c_.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return IntPolynomial(std::move(v));
}

PolyDivRem IntPolynomial::divrem_monic(const IntPolynomial& divisor) const {
  if (divisor.is_zero() || divisor.c_.back() != 1)
    throw domain_error("polynomial division requires a monic divisor");
  std::vector<BigInt> rem = c_;
  long dd = divisor.degree();
  if (degree() < dd) return {IntPolynomial(), *this};
  std::vector<BigInt> quot(degree() - dd + 1, BigInt(0));
  for (long k = degree(); k >= dd; --k) {
    BigInt lead = rem[k];
    if (lead == 0) continue;
    quot[k - dd] = lead;
    for (long j = 0; j <= dd; ++j) rem[k - dd + j] -= lead * divisor.c_[j];
  }
  return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

IntPolynomial IntPolynomial::mod_xn_minus_1(unsigned n) const {
  assert(n >= 1);
  std::vector<BigInt> v(n, BigInt(0));
  for (std::size_t k = 0; k < c_.size(); ++k) v[k % n] += c_[k];
  return IntPolynomial(std::move(v));
}

const IntPolynomial& cyclotomic(unsigned n) {
  if (n < 1) throw domain_error("cyclotomic index must be >= 1");
  static std::map<unsigned, IntPolynomial> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Phi_n = (x^n - 1) / prod of Phi_d over proper divisors d of n.
  std::vector<BigInt> xn(n + 1, BigInt(0));
  xn[0] = -1;
  xn[n] = 1;
  IntPolynomial p{std::move(xn)};
  for (unsigned d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto dit = cache.find(d);
    if (dit == cache.end()) {
      // Build proper-divisor polynomials iteratively to keep recursion flat.
      std::vector<BigInt> xd(d + 1, BigInt(0));
      xd[0] = -1;
      xd[d] = 1;
      IntPolynomial pd{std::move(xd)};
      for (unsigned e = 1; e < d; ++e) {
        if (d % e != 0) continue;
        auto [q, r] = pd.divrem_monic(cache.at(e));
        assert(r.is_zero());
        pd = std::move(q);
      }
      dit = cache.emplace(d, std::move(pd)).first;
    }
    auto [q, r] = p.divrem_monic(dit->second);
    assert(r.is_zero());
    p = std::move(q);
  }
  return cache.emplace(n, std::move(p)).first->second;
}

bool root_of_unity_sum_is_zero(const std::vector<long long>& exponents, unsigned n) {
  if (n < 1) throw domain_error("root of unity order must be >= 1");
  if (n > 1000000) throw resource_error("root-of-unity order too large for the cyclotomic test");
  std::vector<BigInt> v(n, BigInt(0));
  for (long long e : exponents) {
    long long r = e % static_cast<long long>(n);
    if (r < 0) r += n;
    v[static_cast<std::size_t>(r)] += 1;
  }
  IntPolynomial folded{std::move(v)};
  if (folded.is_zero()) return true;
  // The sum vanishes iff Phi_n divides the exponent polynomial (folding by
  // x^n = 1 first changes nothing since Phi_n | x^n - 1).
  auto [q, r] = folded.divrem_monic(cyclotomic(n));
  (void)q;
  return r.is_zero();
}

namespace {

using TermMap = std::map<BigInt, long long>;

// Exponents in [0, n); factorization of n sorted by prime ascending.
bool vanish_rec(TermMap terms, const BigInt& n,
                const std::vector<std::pair<BigInt, unsigned>>& fac) {
  for (auto it = terms.begin(); it != terms.end();)
    it = (it->second == 0) ? terms.erase(it) : std::next(it);
  if (terms.empty()) return true;
  if (n == 1) {
    long long s = 0;
    for (const auto& [e, c] : terms) s += c;
    return s == 0;
  }
  const BigInt& p = fac.front().first;
  unsigned a = fac.front().second;
  BigInt m = n / p;
  if (a >= 2) {
    // zeta^p is a primitive (n/p)-th root and 1, zeta, ..., zeta^(p-1) is a
    // basis of Q(zeta_n) over Q(zeta_{n/p}); every coordinate must vanish.
    std::map<BigInt, TermMap> buckets;
    for (const auto& [e, c] : terms) {
      BigInt s = e % p;
      buckets[s][(e - s) / p] += c;
    }
    auto fac2 = fac;
    fac2.front().second--;
    for (const auto& [s, b] : buckets)
      if (!vanish_rec(b, m, fac2)) return false;
    return true;
  }
  // p exactly divides n: writing zeta^e = omega^(e mod p) * eta^(e mod m)
  // with omega, eta primitive p-th and m-th roots (CRT), the sum vanishes
  // iff all p coordinate elements over Q(eta) are equal.
  std::map<BigInt, TermMap> buckets;
  for (const auto& [e, c] : terms) buckets[e % p][e % m] += c;
  std::vector<std::pair<BigInt, unsigned>> fac2(fac.begin() + 1, fac.end());
  if (BigInt(static_cast<unsigned long>(buckets.size())) < p) {
    // Some coordinate is empty, so all of them must vanish individually.
    for (const auto& [s, b] : buckets)
      if (!vanish_rec(b, m, fac2)) return false;
    return true;
  }
  const TermMap& ref = buckets.begin()->second;
  for (auto it = std::next(buckets.begin()); it != buckets.end(); ++it) {
    TermMap diff = it->second;
    for (const auto& [e, c] : ref) diff[e] -= c;
    if (!vanish_rec(diff, m, fac2)) return false;
  }
  return true;
}

}  // namespace

bool root_of_unity_combination_is_zero(
    const std::map<BigInt, long long>& terms, const BigInt& n,
    const std::vector<std::pair<BigInt, unsigned>>& n_factors) {
  if (n < 1) throw domain_error("root of unity order must be >= 1");
  BigInt check(1);
  auto fac = n_factors;
  std::sort(fac.begin(), fac.end());
  for (const auto& [p, a] : fac) {
    for (unsigned i = 0; i < a; ++i) check *= p;
  }
  if (check != n) throw domain_error("factorization does not multiply to n");
  TermMap folded;
  for (const auto& [e, c] : terms) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    folded[r] += c;
  }
  return vanish_rec(std::move(folded), n, fac);
}

}  // namespace canspec
