#include "canspec/numtheory.hpp"

#include <gmp.h>

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "canspec/errors.hpp"

namespace canspec::numtheory {

namespace {

constexpr std::uint64_t kSieveCap = 300'000'000;
constexpr std::uint32_t kTrialBound = 1'000'000;

// Primes below the trial-division bound, built once.
const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialBound + 1, false);
    std::vector<std::uint32_t> ps;
    for (std::uint32_t i = 2; i <= kTrialBound; ++i) {
      if (composite[i]) continue;
      ps.push_back(i);
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= kTrialBound;
           j += i)
        composite[j] = true;
    }
    return ps;
  }();
  return primes;
}

// One nontrivial factor of an odd composite n, by Brent's cycle method.
std::uint64_t brent_rho(std::uint64_t n, std::uint64_t seed) {
  assert(n > 1 && n % 2 == 1);
  std::mt19937_64 rng(seed);
  while (true) {
    std::uint64_t y = rng() % (n - 1) + 1;
    std::uint64_t c = rng() % (n - 1) + 1;
    std::uint64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
    const std::uint64_t batch = 128;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
      for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
        ys = y;
        std::uint64_t lim = std::min(batch, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = (mulmod(y, y, n) + c) % n;
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (mulmod(ys, ys, n) + c) % n;
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

void require_prime(std::uint64_t p, const char* who) {
  if (!is_prime_u64(p))
    throw domain_error(std::string(who) + ": modulus must be prime");
}

// num/den of delta as machine words, with delta constrained to (0,1).
std::pair<unsigned long, unsigned long> delta_parts(const Rational& delta,
                                                    const char* who) {
  if (delta <= Rational(0) || delta >= Rational(1))
    throw domain_error(std::string(who) + ": delta must lie in (0,1)");
  BigInt num = delta.num(), den = delta.den();
  if (!num.fits_ulong_p() || !den.fits_ulong_p())
    throw resource_error(std::string(who) + ": delta has too many digits");
  return {num.get_ui(), den.get_ui()};
}

}  // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  assert(m > 0);
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) d >>= 1, ++s;
  // These twelve bases witness every 64-bit composite.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t x) {
  if (x > kSieveCap)
    throw resource_error("sieve_primes: bound exceeds the in-memory budget");
  std::vector<std::uint64_t> out;
  if (x < 2) return out;
  const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(double(x))) + 2;
  std::vector<std::uint32_t> base;
  {
    std::vector<bool> composite(root + 1, false);
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (composite[i]) continue;
      base.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j <= root; j += i) composite[j] = true;
    }
  }
  out.reserve(x > 20 ? static_cast<std::size_t>(
                           double(x) / (std::log(double(x)) - 1.1)) +
                           16
                     : 16);
  const std::uint64_t segment = 1u << 20;
  std::vector<bool> mark(segment);
  for (std::uint64_t lo = 2; lo <= x; lo += segment) {
    std::uint64_t hi = std::min(x, lo + segment - 1);
    std::fill(mark.begin(), mark.end(), false);
    for (std::uint32_t p : base) {
      std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) mark[j - lo] = true;
    }
    for (std::uint64_t v = lo; v <= hi; ++v)
      if (!mark[v - lo]) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n,
                                                          std::uint64_t seed) {
  if (n == 0) throw domain_error("factorize: n must be >= 1");
  std::map<std::uint64_t, unsigned> acc;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    while (n % p == 0) {
      ++acc[p];
      n /= p;
    }
  }
  std::vector<std::uint64_t> pending;
  if (n > 1) pending.push_back(n);
  while (!pending.empty()) {
    std::uint64_t m = pending.back();
    pending.pop_back();
    if (is_prime_u64(m)) {
      ++acc[m];
      continue;
    }
    std::uint64_t d = brent_rho(m, seed ^ m);
    pending.push_back(d);
    pending.push_back(m / d);
  }
  return {acc.begin(), acc.end()};
}

std::uint64_t euler_phi(std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw domain_error("euler_phi: n must be >= 1");
  std::uint64_t phi = 1;
  for (auto [p, e] : factorize(n, seed)) {
    phi *= p - 1;
    for (unsigned i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

std::uint64_t largest_prime_factor(std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw domain_error("largest_prime_factor: n must be >= 1");
  if (n == 1) return 1;
  auto fac = factorize(n, seed);
  return fac.back().first;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p,
                                   std::uint64_t seed) {
  if (a < 2) throw domain_error("multiplicative_order: base must be >= 2");
  require_prime(p, "multiplicative_order");
  if (a % p == 0)
    throw domain_error("multiplicative_order: base divisible by the modulus");
  std::uint64_t ord = p - 1;
  for (auto [q, e] : factorize(p - 1, seed)) {
    (void)e;
    while (ord % q == 0 && powmod(a, ord / q, p) == 1) ord /= q;
  }
  return ord;
}

bool in_A(std::uint64_t a, const Rational& delta, std::uint64_t p,
          std::uint64_t seed) {
  auto [num, den] = delta_parts(delta, "in_A");
  std::uint64_t ord = multiplicative_order(a, p, seed);
  // Ord > p^delta  <=>  Ord^den > p^num.  Floating bound first, exact
  // integer powers only when the bound is too close to call.
  long double lhs = den * std::log(static_cast<long double>(ord));
  long double rhs = num * std::log(static_cast<long double>(p));
  if (lhs > rhs + 1e-6L) return true;
  if (lhs < rhs - 1e-6L) return false;
  mpz_class big_ord, big_p;
  mpz_ui_pow_ui(big_ord.get_mpz_t(), ord, den);
  mpz_ui_pow_ui(big_p.get_mpz_t(), p, num);
  return big_ord > big_p;
}

DensityReport order_density(std::uint64_t a, const Rational& delta,
                            std::uint64_t x, std::uint64_t seed) {
  if (a < 2) throw domain_error("order_density: base must be >= 2");
  if (x < 2) throw domain_error("order_density: bound must be >= 2");
  delta_parts(delta, "order_density");
  auto primes = sieve_primes(x);
  std::uint64_t hits = 0;
  for (std::uint64_t p : primes)
    if (a % p != 0 && in_A(a, delta, p, seed)) ++hits;
  DensityReport r;
  r.x = x;
  r.numerator = hits;
  r.denominator = primes.size();
  r.ratio = static_cast<double>(hits) / static_cast<double>(primes.size());
  return r;
}

DensityReport pplus_density(std::uint64_t x, const Rational& delta,
                            std::uint64_t seed) {
  if (x < 3) throw domain_error("pplus_density: bound must be >= 3");
  auto [num, den] = delta_parts(delta, "pplus_density");
  // P > x^delta  <=>  P > trunc(x^{num/den}): the truncated root only
  // coincides with x^delta when the power is exact, and the comparison
  // stays strict either way.
  mpz_class threshold, power;
  mpz_ui_pow_ui(power.get_mpz_t(), x, num);
  mpz_root(threshold.get_mpz_t(), power.get_mpz_t(), den);
  auto primes = sieve_primes(x);
  std::uint64_t hits = 0;
  for (std::uint64_t p : primes) {
    std::uint64_t big = largest_prime_factor(p - 1, seed);
    if (mpz_cmp_ui(threshold.get_mpz_t(), big) < 0) ++hits;
  }
  DensityReport r;
  r.x = x;
  r.numerator = hits;
  r.denominator = primes.size();
  r.ratio = static_cast<double>(hits) / static_cast<double>(primes.size());
  return r;
}

DensityReport goldfeld_exceptions(std::uint64_t a, std::uint64_t x,
                                  std::uint64_t seed) {
  if (a < 2) throw domain_error("goldfeld_exceptions: base must be >= 2");
  if (x < 3) throw domain_error("goldfeld_exceptions: bound must be >= 3");
  auto primes = sieve_primes(x);
  std::uint64_t hits = 0;
  for (std::uint64_t p : primes) {
    // A prime q > sqrt(x) dividing p-1 is unique and equals the largest
    // prime factor (two of them would multiply past p-1), and q^2 > p-1
    // forces q to divide p-1 exactly once.  Then q divides Ord_a(p) iff
    // a^{(p-1)/q} is not 1 mod p.
    std::uint64_t q = largest_prime_factor(p - 1, seed);
    if (static_cast<unsigned __int128>(q) * q <= x) continue;
    if (powmod(a % p, (p - 1) / q, p) == 1) ++hits;
  }
  DensityReport r;
  r.x = x;
  r.numerator = hits;
  r.denominator = primes.size();
  r.ratio = static_cast<double>(hits) / static_cast<double>(primes.size());
  return r;
}

double dickman(double u, unsigned steps_per_unit) {
  if (!std::isfinite(u) || u < 0.0)
    throw domain_error("dickman: u must be a finite nonnegative real");
  if (steps_per_unit == 0)
    throw domain_error("dickman: resolution must be positive");
  if (u <= 1.0) return 1.0;
  const unsigned steps = steps_per_unit;
  const double h = 1.0 / steps;
  // Node values of rho on the previous unit interval; rho = 1 on [0,1].
  // Even nodes advance by cumulative Simpson (the late values of rho are
  // ~1e-11, far below what accumulated trapezoid truncation leaves alive);
  // odd nodes take a single local trapezoid step, whose O(h^3) error stays
  // local instead of compounding.
  std::vector<double> prev(steps + 1, 1.0), cur(steps + 1, 0.0);
  double left = 1.0;
  double rho_left = 1.0;
  auto f = [&](unsigned j, double base) { return prev[j] / (base + j * h); };
  while (left + 1.0 <= u) {
    cur[0] = rho_left;
    for (unsigned j = 1; j <= steps; ++j) {
      if (j % 2 == 0)
        cur[j] = cur[j - 2] - h / 3.0 *
                                  (f(j - 2, left) + 4.0 * f(j - 1, left) +
                                   f(j, left));
      else
        cur[j] = cur[j - 1] - 0.5 * h * (f(j - 1, left) + f(j, left));
    }
    rho_left = cur[steps];
    prev.swap(cur);
    left += 1.0;
  }
  if (u <= left) return rho_left;
  // Partial tail [left, u]: Simpson pairs, at most one trapezoid step, and
  // a sub-step fragment with the delayed argument interpolated linearly.
  double acc = rho_left;
  double span = (u - left) * steps;
  unsigned full = static_cast<unsigned>(std::floor(span));
  unsigned j = 0;
  for (; j + 2 <= full; j += 2)
    acc -= h / 3.0 * (f(j, left) + 4.0 * f(j + 1, left) + f(j + 2, left));
  if (j + 1 <= full) {
    acc -= 0.5 * h * (f(j, left) + f(j + 1, left));
    ++j;
  }
  double frac = span - full;
  if (frac > 0.0) {
    double t0 = left + full * h;
    unsigned hi = std::min(full + 1, steps);
    double rho_delayed = prev[full] * (1.0 - frac) + prev[hi] * frac;
    acc -= 0.5 * (u - t0) * (prev[full] / t0 + rho_delayed / u);
  }
  return acc;
}

std::uint64_t prime_count_progression(std::uint64_t x, std::uint64_t q,
                                      long long a) {
  if (q < 2) throw domain_error("prime_count_progression: modulus must be >= 2");
  std::uint64_t r = static_cast<std::uint64_t>(
      ((a % static_cast<long long>(q)) + static_cast<long long>(q)) %
      static_cast<long long>(q));
  if (std::gcd(r, q) != 1)
    throw domain_error(
        "prime_count_progression: residue not coprime to the modulus");
  auto primes = sieve_primes(x);
  std::uint64_t count = 0;
  for (std::uint64_t p : primes)
    if (p % q == r) ++count;
  return count;
}

namespace {

// Largest over the prime grid (and endpoint) of the worst coprime-residue
// deviation |pi(y;q,a) - pi(y)/phi(q)| for one modulus q.
double progression_deviation(const std::vector<std::uint64_t>& primes,
                             std::uint64_t q) {
  std::vector<std::uint32_t> count(q, 0);
  std::uint64_t phi = 0;
  for (std::uint64_t r = 0; r < q; ++r)
    if (std::gcd(r, q) == 1) ++phi;
  // Histogram of per-residue counts: counts only grow, so the minimum
  // pointer only moves up and the maximum updates on each increment.
  std::vector<std::uint32_t> hist(primes.size() + 2, 0);
  hist[0] = static_cast<std::uint32_t>(phi);
  std::uint64_t cmin = 0, cmax = 0, seen = 0;
  double best = 0.0;
  for (std::uint64_t p : primes) {
    ++seen;
    std::uint64_t r = p % q;
    if (std::gcd(r, q) == 1) {
      std::uint32_t v = count[r]++;
      --hist[v];
      ++hist[v + 1];
      if (v == cmin && hist[v] == 0) ++cmin;
      if (v + 1 > cmax) cmax = v + 1;
    }
    double target = static_cast<double>(seen) / static_cast<double>(phi);
    double dev = std::max(static_cast<double>(cmax) - target,
                          target - static_cast<double>(cmin));
    if (dev > best) best = dev;
  }
  return best;
}

}  // namespace

double eh_discrepancy(std::uint64_t x, double theta, unsigned workers) {
  if (x < 3) throw domain_error("eh_discrepancy: bound must be >= 3");
  if (!(theta > 0.0) || !(theta < 1.0))
    throw domain_error("eh_discrepancy: theta must lie in (0,1)");
  std::uint64_t qmax = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(x), theta) + 1e-9));
  if (qmax < 1) qmax = 1;
  if (qmax > 200'000)
    throw resource_error("eh_discrepancy: modulus range exceeds the budget");
  auto primes = sieve_primes(x);
  if (qmax * primes.size() > 2'000'000'000ull)
    throw resource_error("eh_discrepancy: scan size exceeds the budget");
  std::vector<double> per_q(qmax + 1, 0.0);
  unsigned nthreads = std::max(1u, workers);
  if (nthreads == 1) {
    for (std::uint64_t q = 1; q <= qmax; ++q)
      per_q[q] = progression_deviation(primes, q);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{1};
    for (unsigned t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        while (true) {
          std::uint64_t q = next.fetch_add(1);
          if (q > qmax) break;
          per_q[q] = progression_deviation(primes, q);
        }
      });
    for (auto& th : pool) th.join();
  }
  // Fixed summation order keeps the result independent of scheduling.
  double sum = 0.0;
  for (std::uint64_t q = 1; q <= qmax; ++q) sum += per_q[q];
  return sum;
}

ArtinDecomposition artin_decompose(std::uint64_t n) {
  if (n < 2) throw domain_error("artin_decompose: n must be >= 2");
  ArtinDecomposition d;
  mpz_class v(static_cast<unsigned long>(n));
  d.tower_height = 0;
  while (mpz_perfect_square_p(v.get_mpz_t())) {
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
    v = root;
    ++d.tower_height;
  }
  d.base = static_cast<std::uint64_t>(v.get_ui());
  return d;
}

std::vector<std::uint64_t> primitive_root_primes(std::uint64_t a,
                                                 std::uint64_t x,
                                                 std::uint64_t seed) {
  if (a < 2) throw domain_error("primitive_root_primes: base must be >= 2");
  if (x < 2) throw domain_error("primitive_root_primes: bound must be >= 2");
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : sieve_primes(x)) {
    if (a % p == 0) continue;
    if (multiplicative_order(a, p, seed) == p - 1) out.push_back(p);
  }
  return out;
}

PrimeRecord make_prime_record(std::uint64_t p,
                              const std::vector<std::uint64_t>& bases,
                              std::uint64_t seed) {
  require_prime(p, "make_prime_record");
  PrimeRecord rec;
  rec.p = p;
  rec.factorization_pm1 = factorize(p - 1, seed);
  rec.pplus =
      rec.factorization_pm1.empty() ? 1 : rec.factorization_pm1.back().first;
  for (std::uint64_t a : bases) {
    if (a % p == 0) continue;
    rec.ord[a] = multiplicative_order(a, p, seed);
  }
  return rec;
}

}  // namespace canspec::numtheory
