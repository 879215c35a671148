#pragma once

#include <map>
#include <vector>

#include "canspec/rational.hpp"

namespace canspec {

struct PolyDivRem;

// Dense integer polynomial, coefficients lowest degree first.  The zero
// polynomial has an empty coefficient vector; otherwise the leading
// coefficient is nonzero.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);

  // x^n with unit coefficient.
  static IntPolynomial monomial(unsigned n, const BigInt& c = 1);

  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is -1 by convention.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<BigInt>& coeffs() const { return c_; }
  BigInt coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigInt(0); }

  IntPolynomial operator+(const IntPolynomial& o) const;
  IntPolynomial operator-(const IntPolynomial& o) const;
  IntPolynomial operator*(const IntPolynomial& o) const;
  bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }
  bool operator!=(const IntPolynomial& o) const { return c_ != o.c_; }

  // Division with remainder by a monic divisor.  Over the integers this is
  // exact: quotient and remainder have integer coefficients.  Throws
  // domain_error if the divisor is not monic.
  PolyDivRem divrem_monic(const IntPolynomial& divisor) const;

  // Remainder modulo x^n - 1: coefficient of x^k is folded onto x^(k mod n).
  IntPolynomial mod_xn_minus_1(unsigned n) const;

 private:
  void trim();
  std::vector<BigInt> c_;
};

struct PolyDivRem {
  IntPolynomial quot;
  IntPolynomial rem;
};

// n-th cyclotomic polynomial, computed by exact division of x^n - 1 by the
// cyclotomic polynomials of the proper divisors of n.  Memoized; n >= 1.
const IntPolynomial& cyclotomic(unsigned n);

// Decides exactly whether sum over the multiset of e^(2*pi*i*e/n) vanishes,
// i.e. whether Phi_n divides the folded exponent polynomial.  Exponents may
// be any integers; they are reduced mod n.  Requires n >= 1.
bool root_of_unity_sum_is_zero(const std::vector<long long>& exponents, unsigned n);

// Decides exactly whether sum of c_e * zeta^e vanishes, zeta a primitive
// n-th root of unity, for arbitrary-precision n with known factorization
// n = prod n_factors[i].first ^ n_factors[i].second.  Works by recursive
// descent through the prime tower instead of materializing Phi_n, so n may
// be astronomically large.  Exponents are reduced mod n; coefficients may be
// negative.
bool root_of_unity_combination_is_zero(
    const std::map<BigInt, long long>& terms, const BigInt& n,
    const std::vector<std::pair<BigInt, unsigned>>& n_factors);

}  // namespace canspec
