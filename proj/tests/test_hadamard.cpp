#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "canspec/errors.hpp"
#include "canspec/hadamard.hpp"
#include "doctest.h"
#include "oracles.hpp"

using canspec::BigInt;
using canspec::HadamardTriple;
using canspec::Rational;

namespace {

// Numerical unitarity oracle: Gram matrix of (1/sqrt m) e^{2 pi i b l / N}
// within tol of the identity.
bool gram_is_identity(long long N, const std::vector<long long>& B,
                      const std::vector<long long>& L, double tol) {
  const std::size_t m = B.size();
  const double tau = 6.283185307179586476925286766559;
  std::vector<std::vector<std::complex<double>>> M(
      m, std::vector<std::complex<double>>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      double r = std::fmod(double(B[i]) * double(L[k]), double(N));
      M[i][k] = std::polar(1.0 / std::sqrt(double(m)), tau * r / double(N));
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::complex<double> g{0.0, 0.0};
      for (std::size_t k = 0; k < m; ++k) g += M[i][k] * std::conj(M[j][k]);
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(g - std::complex<double>{want, 0.0}) > tol) return false;
    }
  return true;
}

std::vector<std::tuple<long long, std::vector<long long>, std::vector<long long>>>
corpus_triples() {
  std::vector<std::tuple<long long, std::vector<long long>, std::vector<long long>>>
      out;
  for (long long q : {2, 3, 4, 5}) {
    out.push_back({2 * q, {0, 1}, {0, q}});
    out.push_back({2 * q, {0, 1}, {-q, 0}});
  }
  for (auto [q, a, b] :
       {std::tuple{2ll, 1ll, 2ll}, {3ll, 1ll, 2ll}, {2ll, 2ll, 7ll}})
    out.push_back({3 * q, {0, a, b}, {0, q, 2 * q}});
  out.push_back({8, {0, 1, 2, 3}, {0, 2, 4, 6}});
  out.push_back({4, {0, 2}, {0, 1}});
  out.push_back({6, {0, 1}, {0, 3}});
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("hadamard");

TEST_CASE("unitarity verdicts on known instances") {
  CHECK(canspec::verify_triple(4, {0, 2}, {0, 1}).is_hadamard);
  CHECK(canspec::verify_triple(6, {0, 1}, {0, 3}).is_hadamard);
  auto bad = canspec::verify_triple(4, {0, 1}, {0, 1});
  CHECK_FALSE(bad.is_hadamard);
  REQUIRE(bad.failing_pair.has_value());
  CHECK(*bad.failing_pair == std::pair{0ll, 1ll});
  for (auto& [N, B, L] : corpus_triples()) {
    auto v = canspec::verify_triple(N, B, L);
    CHECK(v.is_hadamard);
    CHECK_FALSE(v.failing_pair.has_value());
  }
}

TEST_CASE("verdict errors") {
  CHECK_THROWS_AS(canspec::verify_triple(1, {0, 1}, {0, 1}),
                  canspec::domain_error);
  CHECK_THROWS_AS(canspec::verify_triple(4, {0, 2}, {0, 1, 2}),
                  canspec::domain_error);
  CHECK_THROWS_AS(canspec::verify_triple(4, {}, {}), canspec::domain_error);
}

TEST_CASE("exact verdict matches the numerical Gram oracle") {
  std::mt19937 rng(20260816);
  unsigned checked = 0, positives = 0;
  while (checked < 60) {
    long long N = 2 + rng() % 35;
    std::size_t m = 2 + rng() % std::min<std::size_t>(4, N - 1);
    std::vector<long long> B{0}, L{0};
    std::set<long long> bs{0}, ls{0};
    while (B.size() < m) {
      long long b = rng() % N;
      if (bs.insert(b).second) B.push_back(b);
    }
    while (L.size() < m) {
      long long l = static_cast<long long>(rng() % (2 * N)) - (long long)N;
      if (ls.insert(l).second) L.push_back(l);
    }
    std::sort(B.begin(), B.end());
    std::sort(L.begin(), L.end());
    bool exact = canspec::verify_triple(N, B, L).is_hadamard;
    CHECK(exact == gram_is_identity(N, B, L, 1e-10));
    if (exact) ++positives;
    ++checked;
  }
  // Random draws are nearly always negative; add the known positives so
  // both branches of the comparison are exercised.
  for (auto& [N, B, L] : corpus_triples()) {
    CHECK(gram_is_identity(N, B, L, 1e-10));
    CHECK(canspec::verify_triple(N, B, L).is_hadamard);
  }
}

TEST_CASE("construction validates and normalizes") {
  HadamardTriple t(4, {2, 0}, {1, 0});  // unsorted input is sorted
  CHECK(t.B() == std::vector<long long>{0, 2});
  CHECK(t.L() == std::vector<long long>{0, 1});
  CHECK(t.d() == 2);
  HadamardTriple neg(4, {0, 2}, {-1, 0});
  CHECK(neg.L() == std::vector<long long>{-1, 0});
  CHECK(HadamardTriple(6, {0, 2, 7}, {0, 2, 4}).d() == 1);
  CHECK(HadamardTriple(8, {0, 4}, {0, 1}).d() == 4);

  CHECK_THROWS_AS(HadamardTriple(4, {0, 1}, {0, 1}), canspec::domain_error);
  CHECK_THROWS_AS(HadamardTriple(4, {1, 2}, {0, 1}), canspec::domain_error);
  CHECK_THROWS_AS(HadamardTriple(4, {0, 2}, {1, 2}), canspec::domain_error);
  CHECK_THROWS_AS(HadamardTriple(4, {0}, {0}), canspec::domain_error);
  CHECK_THROWS_AS(HadamardTriple(1, {0, 1}, {0, 1}), canspec::domain_error);
  CHECK_THROWS_AS(HadamardTriple(4, {0, 2, 2}, {0, 1, 3}),
                  canspec::domain_error);
  // 4 and 0 collide mod 4 before unitarity is even consulted.
  CHECK_THROWS_AS(HadamardTriple(4, {0, 4}, {0, 1}), canspec::domain_error);
}

TEST_CASE("mask values at rational points") {
  HadamardTriple t(4, {0, 2}, {0, 1});
  auto at0 = canspec::mask_value(t, Rational(0));
  CHECK(at0.value.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at0.value.imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_FALSE(at0.exact_zero);

  auto quarter = canspec::mask_value(t, Rational(1, 4));
  CHECK(quarter.exact_zero);
  CHECK(quarter.value == std::complex<double>{0.0, 0.0});

  auto half = canspec::mask_value(t, Rational(1, 2));
  CHECK_FALSE(half.exact_zero);
  CHECK(std::abs(half.value - std::complex<double>{1.0, 0.0}) < 1e-14);

  auto third = canspec::mask_value(t, Rational(1, 3));
  CHECK_FALSE(third.exact_zero);
  // (1 + e^{4 pi i/3})/2 = (1/4, -sqrt(3)/4)
  CHECK(third.value.real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(third.value.imag() == doctest::Approx(-std::sqrt(3.0) / 4).epsilon(1e-12));

  CHECK_THROWS_AS(canspec::mask_value(t, Rational(1, 4), 0),
                  canspec::domain_error);
}

TEST_CASE("mask is 1-periodic") {
  std::mt19937 rng(7);
  for (auto& [N, B, L] : corpus_triples()) {
    HadamardTriple t(N, B, L);
    for (int i = 0; i < 25; ++i) {
      long long num = static_cast<long long>(rng() % 200) - 100;
      long long den = 1 + rng() % 40;
      Rational x(num, den);
      auto a = canspec::mask_value(t, x);
      auto b = canspec::mask_value(t, x + Rational(1));
      CHECK(a.exact_zero == b.exact_zero);
      CHECK(std::abs(a.value - b.value) < 1e-12);
    }
  }
}

TEST_CASE("mask agrees with direct floating evaluation") {
  std::mt19937 rng(11);
  const double tau = 6.283185307179586476925286766559;
  for (auto& [N, B, L] : corpus_triples()) {
    HadamardTriple t(N, B, L);
    for (int i = 0; i < 25; ++i) {
      long long num = static_cast<long long>(rng() % 200) - 100;
      long long den = 1 + rng() % 40;
      Rational x(num, den);
      std::complex<double> direct{0.0, 0.0};
      for (long long b : t.B())
        direct += std::polar(1.0, tau * double(b) * x.to_double());
      direct /= double(t.B().size());
      auto got = canspec::mask_value(t, x);
      CHECK(std::abs(got.value - direct) < 1e-9);
      if (got.exact_zero) CHECK(std::abs(direct) < 1e-9);
    }
  }
}

TEST_CASE("exact zeros with huge denominators") {
  // Scaled copy of the classic pair: (2^57, {0, 2^56}, {0, 1}).
  long long N = 1ll << 57;
  HadamardTriple big(N, {0, 1ll << 56}, {0, 1});
  Rational deep(1, BigInt(1) << 57);
  auto z = canspec::mask_value(big, deep);
  CHECK(z.exact_zero);
  CHECK(z.value == std::complex<double>{0.0, 0.0});
  Rational off(1, BigInt(3) * (BigInt(1) << 57));
  CHECK_FALSE(canspec::mask_value(big, off).exact_zero);
  // Denominator beyond the machine-word factorization range needs a hint.
  Rational huge(1, BigInt(1) << 80);
  CHECK_THROWS_AS(canspec::mask_value(big, huge), canspec::resource_error);
  std::vector<std::pair<BigInt, unsigned>> hint{{BigInt(2), 80}};
  auto hinted = canspec::detail::mask_eval(big.B(), huge, &hint);
  CHECK_FALSE(hinted.exact_zero);
  // Numeric value is still accurate: 1 + e^{2 pi i 2^56/2^80} ~ 2 to 1e-6.
  CHECK(std::abs(hinted.value - std::complex<double>{1.0, 0.0}) < 1e-6);
}

TEST_CASE("extremality is a divisor condition") {
  HadamardTriple t(4, {0, 2}, {0, 1});
  CHECK(canspec::is_extremal(t, Rational(0)));
  CHECK(canspec::is_extremal(t, Rational(1, 2)));
  CHECK_FALSE(canspec::is_extremal(t, Rational(1, 3)));
  CHECK(canspec::is_extremal(t, Rational(3, 2)));
  CHECK(canspec::is_extremal(t, Rational(-7)));
  for (auto& [N, B, L] : corpus_triples()) {
    HadamardTriple tr(N, B, L);
    for (long long den = 1; den <= 100; ++den) {
      for (long long num : {1ll, -3ll, 7ll}) {
        Rational x(num, den);
        bool flag = canspec::is_extremal(tr, x);
        BigInt d(static_cast<long>(tr.d()));
        bool divides = mpz_divisible_p(d.get_mpz_t(), x.den().get_mpz_t());
        CHECK(flag == divides);
        double mag = std::abs(canspec::mask_value(tr, x).value);
        CHECK(flag == (std::abs(mag - 1.0) < 1e-12));
      }
    }
  }
}

TEST_CASE("scaling the dual digits") {
  HadamardTriple t(4, {0, 2}, {0, 1});
  auto s3 = canspec::scaled_triple(t, 3);
  CHECK(s3.N() == 4);
  CHECK(s3.L() == std::vector<long long>{0, 3});
  auto s5 = canspec::scaled_triple(t, 5);
  CHECK(s5.L() == std::vector<long long>{0, 5});
  CHECK_THROWS_AS(canspec::scaled_triple(t, 2), canspec::domain_error);
  CHECK_THROWS_AS(canspec::scaled_triple(t, 1), canspec::domain_error);
  CHECK_THROWS_AS(canspec::scaled_triple(t, -3), canspec::domain_error);
  for (auto& [N, B, L] : corpus_triples()) {
    HadamardTriple tr(N, B, L);
    for (long long q = 2; q <= 50; ++q) {
      if (std::gcd(q, N) != 1) continue;
      auto scaled = canspec::scaled_triple(tr, q);
      CHECK(canspec::verify_triple(scaled.N(), scaled.B(), scaled.L())
                .is_hadamard);
    }
  }
}

TEST_SUITE_END();
