#include "canspec/hadamard.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>

#include "canspec/errors.hpp"
#include "canspec/numtheory.hpp"
#include "canspec/polynomial.hpp"

namespace canspec {

namespace detail {

bool root_sum_vanishes(const std::map<BigInt, long long>& terms,
                       const BigInt& u,
                       const std::vector<std::pair<BigInt, unsigned>>*
                           factor_hint) {
  if (u <= 0) throw domain_error("root_sum_vanishes: modulus must be positive");
  constexpr unsigned long kCyclotomicBound = 100000;
  if (factor_hint == nullptr && u.fits_ulong_p() &&
      u.get_ui() <= kCyclotomicBound) {
    // Multiplicities here come from digit collisions, so expansion is cheap.
    std::vector<long long> exps;
    for (const auto& [e, c] : terms) {
      if (c < 0 || e < 0)
        throw domain_error("root_sum_vanishes: terms must be folded");
      for (long long i = 0; i < c; ++i)
        exps.push_back(static_cast<long long>(e.get_si()));
    }
    return root_of_unity_sum_is_zero(exps, static_cast<unsigned>(u.get_ui()));
  }
  std::vector<std::pair<BigInt, unsigned>> factors;
  if (factor_hint != nullptr) {
    factors = *factor_hint;
  } else {
    if (!u.fits_ulong_p())
      throw resource_error(
          "root_sum_vanishes: modulus exceeds the machine-word factorization "
          "range and no factorization was supplied");
    for (auto [p, e] : numtheory::factorize(u.get_ui()))
      factors.emplace_back(BigInt(static_cast<unsigned long>(p)), e);
  }
  return root_of_unity_combination_is_zero(terms, u, factors);
}

MaskValue mask_eval(const std::vector<long long>& digits, const Rational& x,
                    const std::vector<std::pair<BigInt, unsigned>>*
                        den_factor_hint) {
  assert(!digits.empty());
  const BigInt v = x.num(), u = x.den();
  std::map<BigInt, long long> folded;
  long double re = 0.0L, im = 0.0L;
  const long double tau = 6.283185307179586476925286766559L;
  const long double den_ld = bigint_to_ld(u);
  for (long long b : digits) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), BigInt(v * static_cast<long>(b)).get_mpz_t(),
               u.get_mpz_t());
    ++folded[r];
    long double angle = tau * (bigint_to_ld(r) / den_ld);
    re += std::cos(angle);
    im += std::sin(angle);
  }
  MaskValue out;
  out.exact_zero = root_sum_vanishes(folded, u, den_factor_hint);
  if (out.exact_zero) {
    out.value = {0.0, 0.0};
  } else {
    long double inv = 1.0L / static_cast<long double>(digits.size());
    out.value = {static_cast<double>(re * inv), static_cast<double>(im * inv)};
  }
  return out;
}

}  // namespace detail

TripleVerdict verify_triple(long long N, const std::vector<long long>& B,
                            const std::vector<long long>& L) {
  if (N < 2) throw domain_error("verify_triple: base must be >= 2");
  if (B.empty() || L.empty())
    throw domain_error("verify_triple: digit sets must be nonempty");
  if (B.size() != L.size())
    throw domain_error("verify_triple: digit sets differ in size");
  const BigInt modulus(static_cast<long>(N));
  for (std::size_t i = 0; i < B.size(); ++i) {
    for (std::size_t j = i + 1; j < B.size(); ++j) {
      std::map<BigInt, long long> folded;
      for (long long l : L) {
        // (b - b') l can exceed 64 bits for extreme inputs; stay exact.
        BigInt prod = BigInt(static_cast<long>(B[i])) -
                      BigInt(static_cast<long>(B[j]));
        prod *= BigInt(static_cast<long>(l));
        BigInt r;
        mpz_fdiv_r(r.get_mpz_t(), prod.get_mpz_t(), modulus.get_mpz_t());
        ++folded[r];
      }
      if (!detail::root_sum_vanishes(folded, modulus)) {
        TripleVerdict verdict;
        verdict.is_hadamard = false;
        verdict.failing_pair = {std::min(B[i], B[j]), std::max(B[i], B[j])};
        return verdict;
      }
    }
  }
  TripleVerdict verdict;
  verdict.is_hadamard = true;
  return verdict;
}

HadamardTriple::HadamardTriple(long long N, std::vector<long long> B,
                               std::vector<long long> L)
    : N_(N), B_(std::move(B)), L_(std::move(L)) {
  if (N_ < 2) throw domain_error("HadamardTriple: base must be >= 2");
  std::sort(B_.begin(), B_.end());
  std::sort(L_.begin(), L_.end());
  if (B_.size() != L_.size())
    throw domain_error("HadamardTriple: digit sets differ in size");
  if (B_.size() < 2)
    throw domain_error("HadamardTriple: need at least two digits");
  if (!std::binary_search(B_.begin(), B_.end(), 0ll))
    throw domain_error("HadamardTriple: 0 must be a digit of B");
  if (!std::binary_search(L_.begin(), L_.end(), 0ll))
    throw domain_error("HadamardTriple: 0 must be a digit of L");
  if (std::adjacent_find(B_.begin(), B_.end()) != B_.end())
    throw domain_error("HadamardTriple: duplicate digit in B");
  if (std::adjacent_find(L_.begin(), L_.end()) != L_.end())
    throw domain_error("HadamardTriple: duplicate digit in L");
  std::set<long long> residues;
  for (long long b : B_)
    if (!residues.insert(((b % N_) + N_) % N_).second)
      throw domain_error("HadamardTriple: digits of B collide mod N");
  auto verdict = verify_triple(N_, B_, L_);
  if (!verdict.is_hadamard) {
    auto [b1, b2] = *verdict.failing_pair;
    throw domain_error("HadamardTriple: rows for digits " +
                       std::to_string(b1) + " and " + std::to_string(b2) +
                       " are not orthogonal");
  }
  d_ = 0;
  for (long long b : B_)
    if (b != 0) d_ = std::gcd(d_, b < 0 ? -b : b);
  assert(d_ >= 1);
}

MaskValue mask_value(const HadamardTriple& t, const Rational& x,
                     unsigned precision) {
  if (precision < 1)
    throw domain_error("mask_value: precision must be positive");
  // The accumulator carries 64 significand bits; higher requests are served
  // at that precision (the returned double holds 53 anyway).
  (void)precision;
  return detail::mask_eval(t.B(), x);
}

bool is_extremal(const HadamardTriple& t, const Rational& x) {
  BigInt d(static_cast<long>(t.d()));
  return mpz_divisible_p(d.get_mpz_t(), x.den().get_mpz_t()) != 0;
}

HadamardTriple scaled_triple(const HadamardTriple& t, long long q) {
  if (q < 2) throw domain_error("scaled_triple: factor must be >= 2");
  if (std::gcd(q, t.N()) != 1)
    throw domain_error(
        "scaled_triple: factor shares a divisor with the base, outside the "
        "scaling law");
  std::vector<long long> scaled;
  scaled.reserve(t.L().size());
  for (long long l : t.L()) {
    __int128 wide = static_cast<__int128>(q) * l;
    if (wide > INT64_MAX || wide < INT64_MIN)
      throw resource_error("scaled_triple: scaled digit overflows");
    scaled.push_back(static_cast<long long>(wide));
  }
  return HadamardTriple(t.N(), t.B(), std::move(scaled));
}

}  // namespace canspec
