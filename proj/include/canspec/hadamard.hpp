#pragma once

// Exact verification of the unitarity data (N, B, L), evaluation of the
// digit-set mask, extremality of rational points, and scaling of the dual
// digit set by integers coprime to the base.

#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "canspec/rational.hpp"

namespace canspec {

// Outcome of the unitarity check; failing_pair is present exactly when the
// verdict is negative and names two digits whose rows fail orthogonality.
struct TripleVerdict {
  bool is_hadamard = false;
  std::optional<std::pair<long long, long long>> failing_pair;
};

// True iff #B = #L and, for every pair b != b' in B, the multiset
// {(b - b') l mod N : l in L} sums to zero as N-th roots of unity (row
// orthogonality of the normalized exponential matrix; row norms are
// automatically 1).  Throws domain_error when N < 2, when either set is
// empty, or when the sizes differ.
TripleVerdict verify_triple(long long N, const std::vector<long long>& B,
                            const std::vector<long long>& L);

// A verified triple: N >= 2, digit sets sorted with 0 in both, #B = #L >= 2,
// digits of B pairwise distinct mod N, unitarity holding, and d = gcd of the
// nonzero digits of B.  Immutable after construction; safe to share.
class HadamardTriple {
 public:
  HadamardTriple(long long N, std::vector<long long> B,
                 std::vector<long long> L);

  long long N() const { return N_; }
  const std::vector<long long>& B() const { return B_; }
  const std::vector<long long>& L() const { return L_; }
  long long d() const { return d_; }

  friend bool operator==(const HadamardTriple&, const HadamardTriple&) = default;

 private:
  long long N_;
  std::vector<long long> B_;
  std::vector<long long> L_;
  long long d_;
};

// Mask sample: the averaged exponential sum at a rational point, plus an
// exact flag.  When exact_zero is true the value is exactly 0.
struct MaskValue {
  std::complex<double> value;
  bool exact_zero = false;
};

// m_B(x) = (1/#B) sum_b e^{2 pi i b x} for x = v/u in lowest terms.  The
// numeric value carries `precision` bits (clamped to the 64 the extended-
// precision accumulator provides); exact_zero decides m_B(x) = 0 exactly
// via vanishing of the multiset {b v mod u} summed as u-th roots of unity.
MaskValue mask_value(const HadamardTriple& t, const Rational& x,
                     unsigned precision = 53);

// Whether |m_B(x)| = 1 exactly.  Because 0 is a digit, this happens iff
// every phase equals 1, i.e. den(x) divides d.
bool is_extremal(const HadamardTriple& t, const Rational& x);

// The triple (N, B, qL).  Throws domain_error when q < 2 and a dedicated
// coprimality error when gcd(q, N) > 1 (the scaling law requires it).
HadamardTriple scaled_triple(const HadamardTriple& t, long long q);

namespace detail {

// Exact vanishing of sum_e terms[e] * zeta^e for zeta = e^{2 pi i / u}.
// Small u goes through the cyclotomic divisibility test; larger u through
// the prime-tower descent, factoring u when it fits a machine word and
// otherwise requiring the caller-supplied factorization of u.
bool root_sum_vanishes(const std::map<BigInt, long long>& terms,
                       const BigInt& u,
                       const std::vector<std::pair<BigInt, unsigned>>*
                           factor_hint = nullptr);

// Mask evaluation on a bare digit list (no verified triple needed): used by
// the transform-product code, which tracks denominator factorizations
// incrementally and passes them as the hint.
MaskValue mask_eval(const std::vector<long long>& digits, const Rational& x,
                    const std::vector<std::pair<BigInt, unsigned>>*
                        den_factor_hint = nullptr);

}  // namespace detail

}  // namespace canspec
