#include "canspec/rational.hpp"

#include <cctype>
#include <cmath>

namespace canspec {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw config_error("empty rational literal");
  std::string t = s;
  bool neg = false;
  std::size_t i = 0;
  if (t[0] == '+' || t[0] == '-') {
    neg = (t[0] == '-');
    i = 1;
  }
  std::string intpart, fracpart, denpart;
  enum { INT, FRAC, DEN } st = INT;
  for (; i < t.size(); ++i) {
    char c = t[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      (st == INT ? intpart : st == FRAC ? fracpart : denpart) += c;
    } else if (c == '.' && st == INT) {
      st = FRAC;
    } else if (c == '/' && st == INT && !intpart.empty()) {
      st = DEN;
    } else {
      throw config_error("malformed rational literal: " + s);
    }
  }
  if (st == DEN) {
    if (denpart.empty()) throw config_error("malformed rational literal: " + s);
    BigInt num(intpart), den(denpart);
    if (den == 0) throw config_error("zero denominator in rational literal: " + s);
    Rational r(num, den);
    return neg ? -r : r;
  }
  if (intpart.empty() && fracpart.empty())
    throw config_error("malformed rational literal: " + s);
  if (intpart.empty()) intpart = "0";
  BigInt num(intpart);
  if (!fracpart.empty()) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fracpart.size());
    num = num * scale + BigInt(fracpart);
    Rational r(num, scale);
    return neg ? -r : r;
  }
  Rational r(num, BigInt(1));
  return neg ? -r : r;
}

long double bigint_to_ld(const BigInt& z) {
  // mpz_get_ui returns the low word; on LP64 unsigned long holds all 64 bits.
  static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long expected");
  if (z == 0) return 0.0L;
  BigInt a = z < 0 ? BigInt(-z) : z;
  std::size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
  long double r;
  if (bits <= 64) {
    r = static_cast<long double>(mpz_get_ui(a.get_mpz_t()));
  } else {
    long shift = static_cast<long>(bits) - 64;
    BigInt top = a >> shift;
    r = std::ldexp(static_cast<long double>(mpz_get_ui(top.get_mpz_t())),
                   static_cast<int>(shift));
  }
  return z < 0 ? -r : r;
}

long double rational_to_ld(const Rational& x) {
  return bigint_to_ld(x.num()) / bigint_to_ld(x.den());
}

}  // namespace canspec
