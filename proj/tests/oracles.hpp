#pragma once

// Test-only reference implementations.  Everything here is deliberately
// independent of the library internals: naive algorithms, separate data
// representations, no shared helpers.  Used to cross-check library results.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "canspec/rational.hpp"

namespace oracle {

// Long division of integer-coefficient polynomials (lowest degree first) by a
// monic divisor.  Returns {quotient, remainder}.
inline std::pair<std::vector<long long>, std::vector<long long>> poly_divrem(
    std::vector<long long> num, const std::vector<long long>& den) {
  auto deg = [](const std::vector<long long>& p) {
    long d = static_cast<long>(p.size()) - 1;
    while (d >= 0 && p[d] == 0) --d;
    return d;
  };
  long dn = deg(num), dd = deg(den);
  std::vector<long long> quot(dn >= dd ? dn - dd + 1 : 0, 0);
  for (long k = dn; k >= dd; --k) {
    long long lead = num[k];
    if (lead == 0) continue;
    quot[k - dd] = lead;
    for (long j = 0; j <= dd; ++j) num[k - dd + j] -= lead * den[j];
  }
  long dr = deg(num);
  num.resize(dr + 1);
  return {quot, num};
}

// Naive Euler phi.
inline unsigned long long phi(unsigned long long n) {
  unsigned long long count = 0;
  for (unsigned long long k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++count;
  return count;
}

// Floating-point sum of roots of unity; |sum| decides vanishing numerically.
inline double root_sum_abs(const std::vector<long long>& exponents, unsigned n) {
  std::complex<double> s{0.0, 0.0};
  const double tau = 6.283185307179586476925286766559;
  for (long long e : exponents) {
    long long r = ((e % n) + n) % n;
    s += std::polar(1.0, tau * static_cast<double>(r) / n);
  }
  return std::abs(s);
}

// Primes <= x by trial division.
inline std::vector<unsigned long long> trial_primes(unsigned long long x) {
  std::vector<unsigned long long> ps;
  for (unsigned long long n = 2; n <= x; ++n) {
    bool prime = true;
    for (unsigned long long d = 2; d * d <= n; ++d)
      if (n % d == 0) { prime = false; break; }
    if (prime) ps.push_back(n);
  }
  return ps;
}

// Multiplicative order of a mod p by direct power scan.
inline unsigned long long brute_order(unsigned long long a, unsigned long long p) {
  unsigned long long v = a % p, k = 1;
  while (v != 1) {
    v = (v * (a % p)) % p;
    ++k;
  }
  return k;
}

// Largest prime factor by trial division; 1 for n = 1.
inline unsigned long long brute_pplus(unsigned long long n) {
  unsigned long long best = 1;
  for (unsigned long long d = 2; d * d <= n; ++d)
    while (n % d == 0) { best = d; n /= d; }
  if (n > 1) best = n;
  return best;
}

}  // namespace oracle
