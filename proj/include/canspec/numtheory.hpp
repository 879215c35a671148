#pragma once

// Prime sieving, factorization, multiplicative orders, order-threshold
// densities, largest-prime-factor statistics of p-1, progression counts,
// the discrepancy sum over moduli, the Dickman function, and square-tower
// decomposition of integer bases.

#include <cstdint>
#include <map>
#include <vector>

#include "canspec/rational.hpp"

namespace canspec::numtheory {

// Seed used by every randomized routine unless the caller overrides it.
// Fixed so that repeated runs produce identical reports.
inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ULL;

// All primes <= x in increasing order.  Throws resource_error when the
// result would be unreasonably large for an in-memory vector.
std::vector<std::uint64_t> sieve_primes(std::uint64_t x);

// Deterministic primality test valid for the full 64-bit range.
bool is_prime_u64(std::uint64_t n);

// (a * b) mod m and (a^e) mod m without overflow.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// Prime-power factorization of n >= 1, sorted by prime.  n = 1 gives {}.
// Trial division below 10^6, then deterministic Miller-Rabin plus a seeded
// Brent-rho loop for the remaining <= 64-bit cofactors.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(
    std::uint64_t n, std::uint64_t seed = kDefaultSeed);

// Euler's totient, via factorize.
std::uint64_t euler_phi(std::uint64_t n, std::uint64_t seed = kDefaultSeed);

// Largest prime factor of n >= 1, with the convention that n = 1 gives 1.
std::uint64_t largest_prime_factor(std::uint64_t n,
                                   std::uint64_t seed = kDefaultSeed);

// Multiplicative order of a modulo the prime p.  Throws domain_error when
// p | a or p is not prime.  Computed by starting from p-1 and greedily
// removing prime factors while the power still fixes 1.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p,
                                   std::uint64_t seed = kDefaultSeed);

// Whether Ord_a(p) > p^delta, decided exactly: for delta = num/den the
// test is Ord^den > p^num in integer arithmetic, reached only when a
// cheap floating-point bound cannot already settle the comparison.
// Requires p prime, p not dividing a, and delta in (0,1).
bool in_A(std::uint64_t a, const Rational& delta, std::uint64_t p,
          std::uint64_t seed = kDefaultSeed);

// A counted ratio numerator/denominator at scan bound x.
struct DensityReport {
  std::uint64_t x = 0;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
  double ratio = 0.0;
};

// Fraction of primes p <= x (denominator = pi(x)) with p not dividing a
// and Ord_a(p) > p^delta.
DensityReport order_density(std::uint64_t a, const Rational& delta,
                            std::uint64_t x, std::uint64_t seed = kDefaultSeed);

// Fraction of primes p <= x whose p-1 has largest prime factor > x^delta.
DensityReport pplus_density(std::uint64_t x, const Rational& delta,
                            std::uint64_t seed = kDefaultSeed);

// Fraction of primes p <= x for which some prime q > sqrt(x) divides p-1
// but not Ord_a(p).  At most one such q can exist (q^2 > x >= p - 1), so
// the test is a single modular power against q = largest prime of p-1.
DensityReport goldfeld_exceptions(std::uint64_t a, std::uint64_t x,
                                  std::uint64_t seed = kDefaultSeed);

// Dickman rho at u >= 0, by marching the delay equation
// rho(u) = rho(k) - integral_k^u rho(t-1)/t dt across unit intervals with
// composite quadrature steps; steps_per_unit controls resolution.  At the
// default resolution the values stay positive and nonincreasing out to
// u = 10, where rho has decayed below 1e-10.
double dickman(double u, unsigned steps_per_unit = 4096);

// #{p <= x : p = a (mod q)}.  Throws domain_error unless gcd(a, q) = 1.
std::uint64_t prime_count_progression(std::uint64_t x, std::uint64_t q,
                                      long long a);

// Sum over moduli 1 <= q <= x^theta of
//   max_{y <= x} max_{gcd(a,q)=1} | pi(y; q, a) - pi(y)/phi(q) |,
// with the inner max over y evaluated at prime locations and the endpoint
// (the counts only change at primes, so this grid attains the true max).
double eh_discrepancy(std::uint64_t x, double theta, unsigned workers = 1);

// N written as base^(2^tower_height) with base not a perfect square.
struct ArtinDecomposition {
  std::uint64_t base = 0;
  unsigned tower_height = 0;
};
ArtinDecomposition artin_decompose(std::uint64_t n);

// Primes p <= x with p not dividing a and Ord_a(p) = p - 1.
std::vector<std::uint64_t> primitive_root_primes(
    std::uint64_t a, std::uint64_t x, std::uint64_t seed = kDefaultSeed);

// Per-prime summary: factorization of p-1, orders of requested bases
// (bases divisible by p are skipped), and the largest prime of p-1.
struct PrimeRecord {
  std::uint64_t p = 0;
  std::vector<std::pair<std::uint64_t, unsigned>> factorization_pm1;
  std::map<std::uint64_t, std::uint64_t> ord;
  std::uint64_t pplus = 1;
};
PrimeRecord make_prime_record(std::uint64_t p,
                              const std::vector<std::uint64_t>& bases,
                              std::uint64_t seed = kDefaultSeed);

}  // namespace canspec::numtheory
