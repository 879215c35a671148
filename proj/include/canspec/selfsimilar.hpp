#pragma once

// Exact membership of rationals in the attractor K(q, A) of the maps
// x -> (x + a)/q, eventually-periodic coding certificates, lattice slices
// K intersect (Z/u), and level sets of p-power denominators inside K.

#include <optional>
#include <vector>

#include "canspec/rational.hpp"

namespace canspec::selfsimilar {

// Base q >= 2 with a finite set of rational digits sharing the common
// denominator w (the lcm of the digit denominators).  The attractor is
// contained in the hull [min(A)/(q-1), max(A)/(q-1)].
class DigitSystem {
 public:
  DigitSystem(long long q, std::vector<Rational> digits);

  long long q() const { return q_; }
  const std::vector<Rational>& digits() const { return digits_; }
  long long w() const { return w_; }
  // Digits scaled by w, in the same order as digits().
  const std::vector<long long>& scaled_digits() const { return scaled_; }
  const Rational& hull_min() const { return hull_min_; }
  const Rational& hull_max() const { return hull_max_; }

  friend bool operator==(const DigitSystem&, const DigitSystem&) = default;

 private:
  long long q_;
  std::vector<Rational> digits_;
  long long w_;
  std::vector<long long> scaled_;
  Rational hull_min_, hull_max_;
};

// Finite realization of the shift dynamics at a fixed denominator: states
// are the integers m with m/u inside the scaled hull (the scaled world
// multiplies digits and points by w, making every digit an integer), and
// each digit alpha maps m to q m - alpha u.  A state is alive when it has
// an infinite forward orbit, computed by greatest-fixed-point pruning:
// states without in-range successors are deleted until none remain.
class StateGraph {
 public:
  StateGraph(const DigitSystem& sys, long long u);

  long long denominator() const { return u_; }
  long long lo() const { return lo_; }
  long long hi() const { return hi_; }
  bool contains(long long m) const { return !empty_ && m >= lo_ && m <= hi_; }
  bool alive(long long m) const {
    return contains(m) && alive_[static_cast<std::size_t>(m - lo_)];
  }
  std::size_t digit_count() const { return alphas_.size(); }
  // Successor of m under digit index i, or nullopt when it leaves the
  // state range (the edge does not exist).
  std::optional<long long> target(long long m, std::size_t i) const;
  std::size_t alive_count() const { return alive_total_; }

 private:
  long long q_, u_, lo_, hi_;
  bool empty_;
  std::vector<long long> alphas_;
  std::vector<char> alive_;
  std::size_t alive_total_;
};

// Eventually periodic digit word: preperiod then period repeated forever.
// Digits are drawn from the system's digit set (x-world rationals).
struct CodingCertificate {
  std::vector<Rational> preperiod;
  std::vector<Rational> period;  // nonempty
};

struct MemberResult {
  bool is_member = false;
  std::optional<CodingCertificate> certificate;  // present iff is_member
};

// Whether x lies in K(q, A); membership comes with a replayable coding
// certificate whose period is the shortest cycle reachable in the alive
// subgraph.  Points outside the hull are rejected without building state.
MemberResult member(const DigitSystem& sys, const Rational& x);

// Certificate for a member; throws domain_error when x is not in K.
CodingCertificate coding(const DigitSystem& sys, const Rational& x);

// All points v/u (v integer) of the attractor, sorted increasing: the
// slice K intersect (Z/u) scanned densely across the hull.
std::vector<Rational> lattice_points(const DigitSystem& sys, long long u);

// Level sets of K at powers of p (any p >= 2 coprime to the base):
// levels[m] holds the members first visible at denominator p^m w, i.e.
// with den(x) | p^m w but den(x) not dividing p^(m-1) w.  For prime p
// and integer digits this is the p-adic valuation of the denominator.
// stabilization_index is the largest nonempty level
// when the top of the scan is empty, and disengaged ("none within M")
// when S_M itself is nonempty, since stabilization cannot be observed at
// the scan edge.  The index is empirical: valid only up to M.
struct LevelSets {
  std::vector<std::vector<Rational>> levels;
  std::optional<unsigned> stabilization_index;
};
LevelSets dp_intersection(const DigitSystem& sys, long long p, unsigned M);

// log(#A)/log(q): the similarity upper bound for the Hausdorff dimension.
double similarity_dimension(const DigitSystem& sys);

}  // namespace canspec::selfsimilar
