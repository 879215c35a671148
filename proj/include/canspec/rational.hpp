#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "canspec/errors.hpp"

namespace canspec {

using BigInt = mpz_class;

// Exact rational scalar, always stored reduced with positive denominator.
// All arithmetic is exact; there is no implicit rounding anywhere.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int v) : q_(v) {}
  Rational(long v) : q_(v) {}
  Rational(long long v) : q_(static_cast<long>(v)) {}
  Rational(const BigInt& v) : q_(v) {}
  Rational(const BigInt& num, const BigInt& den) : q_(num, den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    q_.canonicalize();
  }
  Rational(long long num, long long den)
      : Rational(BigInt(static_cast<long>(num)),
                 BigInt(static_cast<long>(den))) {}

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  bool is_integer() const { return q_.get_den() == 1; }
  bool is_zero() const { return q_ == 0; }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.q_ == 0) throw domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  double to_double() const { return q_.get_d(); }

  // "v" for integers, "v/u" otherwise.  Exact round-trip with parse_rational.
  std::string str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  explicit Rational(const mpq_class& q) : q_(q) {}
  mpq_class q_;
};

// floor(x) as an integer.
inline BigInt rational_floor(const Rational& x) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
  return q;
}

// ceil(x) as an integer.
inline BigInt rational_ceil(const Rational& x) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
  return q;
}

// Parses "-3", "22/7", "0.677", "-1.25" exactly.  Decimal strings become the
// exact fraction they denote (0.677 -> 677/1000).  Throws config_error on
// malformed input.
Rational parse_rational(const std::string& s);

// Nearest long double; exact for values with <= 64 significant bits, top-64-bit
// truncation otherwise (relative error <= 2^-64).
long double bigint_to_ld(const BigInt& z);
long double rational_to_ld(const Rational& x);

}  // namespace canspec
