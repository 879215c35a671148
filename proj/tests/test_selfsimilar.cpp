#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "canspec/errors.hpp"
#include "canspec/rational.hpp"
#include "canspec/selfsimilar.hpp"
#include "doctest.h"

using canspec::BigInt;
using canspec::Rational;
using canspec::domain_error;
using canspec::resource_error;
using namespace canspec::selfsimilar;

namespace {

DigitSystem int_system(long long q, const std::vector<long long>& digits) {
  std::vector<Rational> ds;
  ds.reserve(digits.size());
  for (long long a : digits) ds.emplace_back(a);
  return DigitSystem(q, ds);
}

std::vector<Rational> rats(const std::vector<std::pair<long long, long long>>& vs) {
  std::vector<Rational> out;
  for (auto [n, d] : vs) out.emplace_back(n, d);
  return out;
}

// Independent enumeration oracle: every eventually periodic digit word
// with period <= max_per and preperiod <= max_pre, keeping only purely
// periodic tails whose denominator is at most den_cap (denominators of
// periodic values divide q^s - 1, and prepending digits never changes the
// part of the denominator coprime to q, so tails with larger denominators
// can never land on the target lattice).  Integer digits only.
std::set<Rational> oracle_values(const DigitSystem& sys, int max_pre, int max_per,
                                 long long den_cap) {
  const long long q = sys.q();
  std::vector<long long> A;
  for (const Rational& d : sys.digits()) {
    REQUIRE(d.is_integer());
    A.push_back(mpz_get_si(d.num().get_mpz_t()));
  }
  std::set<Rational> all;
  for (int s = 1; s <= max_per; ++s) {
    long long qs = 1;
    for (int j = 0; j < s; ++j) qs *= q;
    std::vector<std::size_t> word(static_cast<std::size_t>(s), 0);
    while (true) {
      long long num = 0;
      for (std::size_t j = 0; j < word.size(); ++j) num = num * q + A[word[j]];
      Rational v(num, qs - 1);
      if (v.den() <= static_cast<long>(den_cap)) all.insert(v);
      std::size_t k = word.size();
      while (k > 0 && word[k - 1] + 1 == A.size()) word[--k] = 0;
      if (k == 0) break;
      ++word[k - 1];
    }
  }
  std::vector<Rational> frontier(all.begin(), all.end());
  for (int r = 0; r < max_pre; ++r) {
    std::vector<Rational> next;
    for (const Rational& x : frontier)
      for (const Rational& a : sys.digits()) {
        Rational y = (x + a) / Rational(q);
        if (all.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return all;
}

std::vector<Rational> oracle_lattice(const std::set<Rational>& values, long long u) {
  BigInt ub(static_cast<long>(u));
  std::vector<Rational> out;
  for (const Rational& x : values)
    if (mpz_divisible_p(ub.get_mpz_t(), x.den().get_mpz_t())) out.push_back(x);
  return out;
}

unsigned long p_level(const Rational& x, long long p) {
  BigInt rest;
  return mpz_remove(rest.get_mpz_t(), x.den().get_mpz_t(),
                    BigInt(static_cast<long>(p)).get_mpz_t());
}

}  // namespace

TEST_SUITE_BEGIN("selfsimilar");

TEST_CASE("digit system validation and accessors") {
  CHECK_THROWS_AS(int_system(1, {0, 1}), domain_error);
  CHECK_THROWS_AS(DigitSystem(4, {}), domain_error);
  CHECK_THROWS_AS(int_system(4, {0, 3, 0}), domain_error);
  CHECK_THROWS_AS(DigitSystem(4, rats({{1, 2}, {2, 4}})), domain_error);

  DigitSystem half(4, rats({{1, 2}, {0, 1}}));
  CHECK(half.w() == 2);
  CHECK(half.scaled_digits() == std::vector<long long>{0, 1});
  CHECK(half.digits() == rats({{0, 1}, {1, 2}}));  // sorted
  CHECK(half.hull_min() == Rational(0));
  CHECK(half.hull_max() == Rational(1, 6));

  DigitSystem neg = int_system(4, {-1, 0});
  CHECK(neg.hull_min() == Rational(-1, 3));
  CHECK(neg.hull_max() == Rational(0));
  CHECK(neg.w() == 1);

  DigitSystem wide = int_system(2, {0, 3});
  CHECK(wide.hull_max() == Rational(3));
}

TEST_CASE("membership and codings at pinned points") {
  DigitSystem s41 = int_system(4, {0, 1});

  MemberResult third = member(s41, Rational(1, 3));
  REQUIRE(third.is_member);
  REQUIRE(third.certificate.has_value());
  CHECK(third.certificate->preperiod.empty());
  CHECK(third.certificate->period == std::vector<Rational>{Rational(1)});

  MemberResult zero = member(s41, Rational(0));
  REQUIRE(zero.is_member);
  CHECK(zero.certificate->preperiod.empty());
  CHECK(zero.certificate->period == std::vector<Rational>{Rational(0)});

  CHECK_FALSE(member(s41, Rational(1, 5)).is_member);
  CHECK_FALSE(member(s41, Rational(1, 5)).certificate.has_value());
  CHECK_FALSE(member(s41, Rational(-1, 12)).is_member);
  CHECK_FALSE(member(s41, Rational(2, 3)).is_member);  // above the hull

  // 1/12 = (0 + 1/3)/4 needs one preparatory digit before the loop.
  CodingCertificate c12 = coding(s41, Rational(1, 12));
  CHECK(c12.preperiod == std::vector<Rational>{Rational(0)});
  CHECK(c12.period == std::vector<Rational>{Rational(1)});

  CHECK(coding(int_system(4, {0, 3}), Rational(1)).period ==
        std::vector<Rational>{Rational(3)});
  CHECK(coding(int_system(4, {0, 3}), Rational(1)).preperiod.empty());
  CHECK(coding(int_system(4, {0, 2}), Rational(2, 3)).period ==
        std::vector<Rational>{Rational(2)});

  CHECK_THROWS_AS(coding(s41, Rational(1, 5)), domain_error);
}

TEST_CASE("lattice slices at small denominators") {
  DigitSystem s41 = int_system(4, {0, 1});
  CHECK(lattice_points(s41, 2) == std::vector<Rational>{Rational(0)});
  CHECK(lattice_points(s41, 6) == rats({{0, 1}, {1, 3}}));
  CHECK(lattice_points(s41, 10) == std::vector<Rational>{Rational(0)});
  CHECK_THROWS_AS(lattice_points(s41, 0), domain_error);
  CHECK_THROWS_AS(lattice_points(s41, -6), domain_error);
}

TEST_CASE("lattice slices agree with the word enumeration oracle") {
  const std::vector<std::pair<long long, std::vector<long long>>> systems = {
      {4, {0, 1}}, {4, {0, 3}}, {6, {0, 3}}, {6, {0, 1, 2}}};
  for (const auto& [q, digits] : systems) {
    DigitSystem sys = int_system(q, digits);
    std::set<Rational> values = oracle_values(sys, 6, 12, 40);
    for (long long u = 1; u <= 40; ++u) {
      CAPTURE(q);
      CAPTURE(u);
      CHECK(lattice_points(sys, u) == oracle_lattice(values, u));
    }
  }
}

TEST_CASE("certificates replay exactly and reconstruct the point") {
  const std::vector<std::pair<long long, std::vector<long long>>> systems = {
      {4, {0, 1}}, {4, {0, 3}}, {6, {0, 3}}, {6, {0, 1, 2}}};
  for (const auto& [q, digits] : systems) {
    DigitSystem sys = int_system(q, digits);
    for (long long u : {4, 7, 12, 15, 21, 36, 40}) {
      for (const Rational& x : lattice_points(sys, u)) {
        CAPTURE(q);
        CAPTURE(u);
        CodingCertificate cert = coding(sys, x);
        REQUIRE(!cert.period.empty());

        // Replay the shift: the preperiod lands on a point the period
        // returns to exactly.
        Rational y = x;
        for (const Rational& a : cert.preperiod) y = y * Rational(q) - a;
        Rational z = y;
        for (const Rational& a : cert.period) z = z * Rational(q) - a;
        CHECK(z == y);
        CHECK(y >= sys.hull_min());
        CHECK(y <= sys.hull_max());

        // Telescoping: the periodic word sums to y, and unwinding the
        // preperiod recovers x.
        Rational num(0);
        long long qs = 1;
        for (const Rational& a : cert.period) {
          num = num * Rational(q) + a;
          qs *= q;
        }
        Rational periodic = num / Rational(qs - 1);
        CHECK(periodic == y);
        Rational rec = periodic;
        for (auto it = cert.preperiod.rbegin(); it != cert.preperiod.rend(); ++it)
          rec = (rec + *it) / Rational(q);
        CHECK(rec == x);

        // The period is a cycle in the alive subgraph, so it can never be
        // longer than the number of surviving states.
        Rational scaled = x * Rational(sys.w());
        StateGraph g(sys, mpz_get_si(scaled.den().get_mpz_t()));
        CHECK(cert.period.size() <= g.alive_count());
      }
    }
  }
}

TEST_CASE("alive states always have an alive successor") {
  const std::vector<std::pair<long long, std::vector<long long>>> systems = {
      {4, {0, 1}}, {4, {0, 3}}, {6, {0, 1, 2}}, {5, {-2, 0, 3}}};
  for (const auto& [q, digits] : systems) {
    DigitSystem sys = int_system(q, digits);
    for (long long u : {12, 35, 36, 40}) {
      StateGraph g(sys, u);
      std::size_t alive_seen = 0;
      for (long long m = g.lo(); m <= g.hi(); ++m) {
        if (!g.alive(m)) continue;
        ++alive_seen;
        bool has = false;
        for (std::size_t i = 0; i < g.digit_count() && !has; ++i) {
          const auto t = g.target(m, i);
          has = t && g.alive(*t);
        }
        CHECK(has);
      }
      CHECK(alive_seen == g.alive_count());
    }
  }
}

TEST_CASE("p power level sets and stabilization") {
  DigitSystem s41 = int_system(4, {0, 1});

  LevelSets a = dp_intersection(s41, 3, 4);
  REQUIRE(a.levels.size() == 5);
  CHECK(a.levels[0] == std::vector<Rational>{Rational(0)});
  CHECK(a.levels[1] == std::vector<Rational>{Rational(1, 3)});
  CHECK(a.levels[2].empty());
  CHECK(a.levels[3].empty());
  CHECK(a.levels[4].empty());
  CHECK(a.stabilization_index == 1u);

  LevelSets b = dp_intersection(int_system(4, {0, 2}), 3, 5);
  CHECK(b.levels[0] == std::vector<Rational>{Rational(0)});
  CHECK(b.levels[1] == std::vector<Rational>{Rational(2, 3)});
  for (unsigned m = 2; m <= 5; ++m) CHECK(b.levels[m].empty());
  CHECK(b.stabilization_index == 1u);

  LevelSets c = dp_intersection(s41, 5, 3);
  CHECK(c.levels[0] == std::vector<Rational>{Rational(0)});
  for (unsigned m = 1; m <= 3; ++m) CHECK(c.levels[m].empty());
  CHECK(c.stabilization_index == 0u);

  // The top of the scan is still populated: stabilization not observable.
  CHECK_FALSE(dp_intersection(s41, 3, 1).stabilization_index.has_value());

  // Levels partition their union, and the retained shift keeps each level.
  LevelSets d = dp_intersection(int_system(6, {0, 1, 2}), 5, 3);
  std::set<Rational> seen;
  std::size_t total = 0;
  for (unsigned m = 0; m < d.levels.size(); ++m) {
    total += d.levels[m].size();
    for (const Rational& x : d.levels[m]) {
      seen.insert(x);
      CHECK(p_level(x, 5) == m);
      for (const Rational& digit : rats({{0, 1}, {1, 1}, {2, 1}})) {
        Rational y = x * Rational(6) - digit;
        if (member(int_system(6, {0, 1, 2}), y).is_member)
          CHECK(p_level(y, 5) == m);
      }
    }
  }
  CHECK(seen.size() == total);

  // Composite moduli classify by first divisibility p^m w, so the prime
  // scan at 3 and the prime-power scan at 9 see 1/3 at level 1.
  LevelSets e = dp_intersection(s41, 9, 2);
  CHECK(e.levels[0] == std::vector<Rational>{Rational(0)});
  CHECK(e.levels[1] == std::vector<Rational>{Rational(1, 3)});
  CHECK(e.levels[2].empty());
  CHECK(e.stabilization_index == 1u);
  // At p = 15 the denominators 3, 5, and 15 all enter at level 1; the
  // den-15 points 1/15 and 4/15 are purely periodic since 15 = 4^2 - 1.
  LevelSets f = dp_intersection(s41, 15, 2);
  CHECK(f.levels[0] == std::vector<Rational>{Rational(0)});
  CHECK(f.levels[1] == rats({{1, 15}, {4, 15}, {1, 3}}));
  CHECK(f.levels[2].empty());
  CHECK(f.stabilization_index == 1u);

  CHECK_THROWS_AS(dp_intersection(s41, 2, 3), domain_error);  // shares a factor with q
  CHECK_THROWS_AS(dp_intersection(s41, 6, 2), domain_error);  // shares a factor with q
  CHECK_THROWS_AS(dp_intersection(s41, 1, 2), domain_error);
}

TEST_CASE("rational digits reduce to the scaled integer system") {
  DigitSystem half(4, rats({{0, 1}, {1, 2}}));
  DigitSystem whole = int_system(4, {0, 1});

  // K(4, {0, 1/2}) is K(4, {0, 1}) shrunk by 2.
  for (long long u = 1; u <= 24; ++u)
    for (long long v = 0; v <= u / 6 + 1; ++v) {
      Rational x(v, u);
      if (x > half.hull_max()) continue;
      CAPTURE(u);
      CAPTURE(v);
      CHECK(member(half, x).is_member == member(whole, x * Rational(2)).is_member);
    }

  CHECK(lattice_points(half, 6) == rats({{0, 1}, {1, 6}}));
  CHECK(coding(half, Rational(1, 6)).period == std::vector<Rational>{Rational(1, 2)});
  CHECK(coding(half, Rational(1, 6)).preperiod.empty());

  // Single-digit system: the attractor is one fixed point.
  DigitSystem point(4, rats({{1, 2}}));
  CHECK(member(point, Rational(1, 6)).is_member);
  CHECK(coding(point, Rational(1, 6)).period == std::vector<Rational>{Rational(1, 2)});
  CHECK_FALSE(member(point, Rational(0)).is_member);
  CHECK(lattice_points(point, 6) == std::vector<Rational>{Rational(1, 6)});
  CHECK(lattice_points(point, 5).empty());
}

TEST_CASE("similarity dimension") {
  CHECK(similarity_dimension(int_system(4, {0, 1})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(similarity_dimension(int_system(6, {0, 3})) ==
        doctest::Approx(0.38685280723454163).epsilon(1e-12));
  CHECK(similarity_dimension(int_system(4, {0, 1, 2, 3})) == doctest::Approx(1.0));
  CHECK(similarity_dimension(DigitSystem(4, rats({{1, 2}}))) == doctest::Approx(0.0));
}

TEST_CASE("resource guards and the hull fast path") {
  DigitSystem s41 = int_system(4, {0, 1});
  CHECK_THROWS_AS(member(s41, Rational(1, 1000000000)), resource_error);

  // Far outside the hull: rejected before any state is built.
  BigInt big = BigInt(10);
  mpz_pow_ui(big.get_mpz_t(), big.get_mpz_t(), 30);
  CHECK_FALSE(member(s41, Rational(big + 1, big * 3)).is_member);
  CHECK_FALSE(member(s41, Rational(-1, big)).is_member);

  BigInt d2 = BigInt(1) << 40;
  BigInt d3 = BigInt(3);
  mpz_pow_ui(d3.get_mpz_t(), d3.get_mpz_t(), 40);
  CHECK_THROWS_AS(DigitSystem(4, {Rational(0), Rational(1, d2), Rational(1, d3)}),
                  resource_error);
}

TEST_SUITE_END();
