#pragma once

// Numerics on the Fourier side: the truncated transform product, the
// level-wise Parseval identity, Gram off-diagonal orthogonality checks, and
// the completeness functional Q evaluated on grids of real points.  Exact
// zeros of the transform are detected algebraically; everything else is
// double-precision diagnostics.

#include <complex>
#include <vector>

#include "canspec/hadamard.hpp"
#include "canspec/rational.hpp"

namespace canspec::fourier {

// Truncated transform sample.  When exact_zero is true some factor of the
// product vanished exactly and value is exactly 0; otherwise value is the
// double-precision product of the first `depth` factors.  Each omitted
// factor has modulus <= 1, so truncation only overestimates the modulus
// while exact zeros are caught at any depth.
struct TransformValue {
  std::complex<double> value;
  bool exact_zero = false;
  unsigned depth = 1;
};

// Product of mask_value(xi / N^k) for k = 1..depth.  Throws domain_error
// when depth = 0 and resource_error when den(xi) is too large to factor
// (the factor denominators are tracked exactly across all depths).
TransformValue mu_hat(const HadamardTriple& t, const Rational& xi,
                      unsigned depth);

// Sum over words (l_1,...,l_n) in L^n of prod_{k=1..n} |m_B(t_k)|^2 where
// t_k = (t_{k-1} + l_k) / N starting from t_0.  Column orthonormality of
// the triple's matrix makes the exact value 1 for every real t0; the return
// differs from 1 only by rounding.  Throws domain_error when n = 0 or t0 is
// not finite, resource_error when (#L)^n exceeds the budget.
double level_parseval(const HadamardTriple& t, double t0, unsigned n,
                      std::size_t budget = 4'000'000);

// One unordered pair of spectrum candidates and the transform at their
// difference: magnitude is |mu_hat(b - a, depth)| (exactly 0 when the
// product vanishes algebraically).
struct GramPair {
  Rational a;
  Rational b;
  double magnitude = 0.0;
  bool exact_zero = false;
};

// Off-diagonal Gram data for a candidate point set.
struct GramReport {
  double max_offdiag = 0.0;
  std::vector<GramPair> pairs;  // all i < j pairs in input order
};

// Evaluates mu_hat at every pairwise difference of `points` and reports the
// largest off-diagonal magnitude; a maximum of exactly 0 with every pair
// flagged exact_zero certifies mutual orthogonality of the exponentials up
// to the truncation semantics above.  Throws domain_error when depth = 0.
GramReport gram_offdiag(const HadamardTriple& t,
                        const std::vector<Rational>& points, unsigned depth);

// For each grid point t0, the truncated completeness functional
// Q(t0) = sum over lambda in spectrum_points of |mu_hat(t0 + lambda)|^2,
// evaluated in double precision (no exact-zero tracking: grid points are
// reals).  Results are in grid order regardless of worker scheduling.
// Values lie in [0, 1 + eps] and grow as spectrum_points refines.  Throws
// domain_error when depth = 0 or a grid point is not finite.
std::vector<double> completeness_Q(const HadamardTriple& t,
                                   const std::vector<Rational>& spectrum_points,
                                   const std::vector<double>& grid,
                                   unsigned depth, unsigned workers = 1);

}  // namespace canspec::fourier
