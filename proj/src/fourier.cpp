#include "canspec/fourier.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <thread>

#include "canspec/errors.hpp"
#include "canspec/numtheory.hpp"

namespace canspec::fourier {

namespace {

// Double-precision mask sample at a real point; no exactness tracking.
std::complex<double> mask_numeric(const std::vector<long long>& digits,
                                  double x) {
  std::complex<double> acc{0.0, 0.0};
  for (long long b : digits) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(b) * x;
    acc += std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc / static_cast<double>(digits.size());
}

// Primes that can ever divide den(xi / N^k): those of den(xi) and of N.
std::vector<BigInt> candidate_primes(const Rational& xi, long long N) {
  if (!xi.den().fits_ulong_p())
    throw resource_error("transform point denominator too large to factor");
  std::vector<BigInt> ps;
  for (const auto& [p, e] : numtheory::factorize(xi.den().get_ui()))
    ps.emplace_back(static_cast<unsigned long>(p));
  for (const auto& [p, e] : numtheory::factorize(static_cast<std::uint64_t>(N)))
    ps.emplace_back(static_cast<unsigned long>(p));
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

// Factorization of den over the candidate primes; exact by construction.
std::vector<std::pair<BigInt, unsigned>> den_factors(
    const BigInt& den, const std::vector<BigInt>& primes) {
  std::vector<std::pair<BigInt, unsigned>> fs;
  BigInt rest = den;
  for (const BigInt& p : primes) {
    BigInt stripped;
    const auto e = mpz_remove(stripped.get_mpz_t(), rest.get_mpz_t(),
                              p.get_mpz_t());
    if (e > 0) fs.emplace_back(p, static_cast<unsigned>(e));
    rest = stripped;
  }
  assert(rest == 1);
  return fs;
}

}  // namespace

TransformValue mu_hat(const HadamardTriple& t, const Rational& xi,
                      unsigned depth) {
  if (depth == 0) throw domain_error("mu_hat requires depth >= 1");
  const auto primes = candidate_primes(xi, t.N());
  const Rational base(static_cast<long long>(t.N()));
  TransformValue out;
  out.depth = depth;
  out.value = {1.0, 0.0};
  Rational x = xi;
  for (unsigned k = 1; k <= depth; ++k) {
    x /= base;
    const auto hint = den_factors(x.den(), primes);
    const MaskValue f = detail::mask_eval(t.B(), x, &hint);
    if (f.exact_zero) {
      out.exact_zero = true;
      out.value = {0.0, 0.0};
      return out;
    }
    out.value *= f.value;
  }
  return out;
}

double level_parseval(const HadamardTriple& t, double t0, unsigned n,
                      std::size_t budget) {
  if (n == 0) throw domain_error("level_parseval requires n >= 1");
  if (!std::isfinite(t0))
    throw domain_error("level_parseval requires a finite base point");
  const std::size_t fan = t.L().size();
  std::size_t words = 1;
  for (unsigned k = 0; k < n; ++k) {
    if (words > budget / fan)
      throw resource_error("level word count exceeds budget");
    words *= fan;
  }
  const double invN = 1.0 / static_cast<double>(t.N());
  double sum = 0.0;
  // DFS over L-words; the factor at level k depends only on the first k
  // letters, so prefixes share their partial products.
  auto walk = [&](auto&& self, double cur, double prod, unsigned k) -> void {
    if (k == n) {
      sum += prod;
      return;
    }
    for (long long l : t.L()) {
      const double next = (cur + static_cast<double>(l)) * invN;
      const double m = std::abs(mask_numeric(t.B(), next));
      self(self, next, prod * m * m, k + 1);
    }
  };
  walk(walk, t0, 1.0, 0);
  return sum;
}

GramReport gram_offdiag(const HadamardTriple& t,
                        const std::vector<Rational>& points, unsigned depth) {
  if (depth == 0) throw domain_error("gram_offdiag requires depth >= 1");
  GramReport rep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const TransformValue tv = mu_hat(t, points[j] - points[i], depth);
      GramPair pair;
      pair.a = points[i];
      pair.b = points[j];
      pair.exact_zero = tv.exact_zero;
      pair.magnitude = tv.exact_zero ? 0.0 : std::abs(tv.value);
      rep.max_offdiag = std::max(rep.max_offdiag, pair.magnitude);
      rep.pairs.push_back(std::move(pair));
    }
  }
  return rep;
}

std::vector<double> completeness_Q(const HadamardTriple& t,
                                   const std::vector<Rational>& spectrum_points,
                                   const std::vector<double>& grid,
                                   unsigned depth, unsigned workers) {
  if (depth == 0) throw domain_error("completeness_Q requires depth >= 1");
  for (double g : grid)
    if (!std::isfinite(g))
      throw domain_error("completeness_Q requires finite grid points");
  std::vector<double> lambdas;
  lambdas.reserve(spectrum_points.size());
  for (const Rational& p : spectrum_points) lambdas.push_back(p.to_double());
  const double invN = 1.0 / static_cast<double>(t.N());
  const auto q_at = [&](double t0) {
    double q = 0.0;
    for (double lam : lambdas) {
      double x = t0 + lam;
      double prod = 1.0;
      for (unsigned k = 0; k < depth; ++k) {
        x *= invN;
        const double m = std::abs(mask_numeric(t.B(), x));
        prod *= m * m;
        if (prod == 0.0) break;
      }
      q += prod;
    }
    return q;
  };
  std::vector<double> out(grid.size(), 0.0);
  const std::size_t nw =
      std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(grid.size(), 1));
  if (nw <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = q_at(grid[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < grid.size();
           i = next.fetch_add(1))
        out[i] = q_at(grid[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace canspec::fourier
