#pragma once

// Canonical spectra of Hadamard triples: extreme cycles of the dual
// dynamics, the level construction of the canonical spectrum, the exact
// integer-scaling eigenvalue decision, prime scans, and the power-closure
// procedure for products of coprime primes.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "canspec/hadamard.hpp"
#include "canspec/rational.hpp"
#include "canspec/selfsimilar.hpp"

namespace canspec::spectrum {

// The digit system of the dual attractor K(N, scale * L).
selfsimilar::DigitSystem dual_system(const HadamardTriple& t, long long scale = 1);

// Cycle of the dual dynamics x -> (x + l)/N: points are cyclically
// ordered, labels[j] is the digit with (points[j] + labels[j])/N equal to
// points[(j+1) mod k], and every point has unit-modulus mask value.
struct ExtremeCycle {
  std::vector<Rational> points;
  std::vector<long long> labels;

  friend bool operator==(const ExtremeCycle&, const ExtremeCycle&) = default;
};

// Every cycle of the dual dynamics restricted to the candidate slice
// K(N, L) intersect Z/d, with all points extremal.  Cycles are simple,
// anchored at their smallest point, and sorted by their point lists.
std::vector<ExtremeCycle> extreme_cycles(const HadamardTriple& t);

// Levels of the canonical spectrum: levels[0] is -(K(N,L) intersect Z/d)
// and levels[k] = N * levels[k-1] + L, each sorted.  The projected size
// #levels[0] * (#L)^n must stay within budget.
struct SpectrumLevels {
  HadamardTriple triple;
  std::vector<std::vector<Rational>> levels;
};
SpectrumLevels canonical_levels(const HadamardTriple& t, unsigned n,
                                std::size_t budget = 4'000'000);

// All digit expansions sum_{k=0..m} l_k N^k for 0 <= m <= n, l_k in L,
// deduplicated and sorted.  Requires 0 in L (so shorter sums nest into
// longer ones).
std::vector<BigInt> lambda_NL(long long N, const std::vector<long long>& L,
                              unsigned n, std::size_t budget = 4'000'000);

// Decision for the integer scaling q: the scaled canonical spectrum stays
// a spectrum iff the lattice slice of K(N,L) at denominator q d equals
// the slice at d.  Decided through two independent forms (the direct
// slice comparison and the d-scaled system at denominator q) whose
// agreement is asserted.  When false, the witness is the difference
// element minimal in denominator, then absolute numerator, then value.
struct EigenvalueVerdict {
  long long q = 1;
  bool is_eigenvalue = false;
  std::optional<Rational> witness;  // present iff is_eigenvalue is false
  bool methods_agreed = false;

  friend bool operator==(const EigenvalueVerdict&, const EigenvalueVerdict&) = default;
};
EigenvalueVerdict is_spectral_eigenvalue(const HadamardTriple& t, long long q);

// One scanned prime: the verdict at q = p, the multiplicative order of N
// modulo p, and the two order-threshold classifications.
struct ScanRow {
  long long p = 0;
  bool is_eigenvalue = false;
  std::uint64_t ord = 0;         // Ord_N(p)
  bool in_a_half = false;        // Ord_N(p) > p^(1/2)
  bool in_a_0677 = false;        // Ord_N(p) > p^0.677
  std::optional<Rational> witness;

  friend bool operator==(const ScanRow&, const ScanRow&) = default;
};

// Cross-check for one threshold delta: active when delta strictly
// exceeds log(#B)/log(N) (decided exactly on integers), with the primes
// in the threshold class that fail to be eigenvalues.
struct DeltaCheck {
  Rational delta;
  bool active = false;
  std::vector<long long> violations;

  friend bool operator==(const DeltaCheck&, const DeltaCheck&) = default;
};

struct ScanReport {
  long long x = 0;
  std::vector<ScanRow> rows;              // sorted by p
  std::size_t eigenvalue_count = 0;
  double eigenvalue_fraction = 0.0;       // 0 when no prime qualifies
  std::vector<DeltaCheck> checks;         // delta = 1/2 and 677/1000
};

// Verdicts for every prime p <= x coprime to N, with order statistics
// and the threshold cross-checks.  Primes are distributed across workers;
// the report is deterministic and sorted by p.
ScanReport eigenvalue_scan(const HadamardTriple& t, long long x,
                           unsigned workers = 1);

// Level scan of K(N, dL) at the product of the given primes, the
// empirical stabilization height, the verdict at product^height, and --
// when that verdict holds -- verdicts for every product of prime powers
// with total exponent at most exponent_budget.
struct PowerClosureReport {
  std::vector<long long> primes;  // sorted
  long long product = 1;
  selfsimilar::LevelSets levels;
  std::optional<unsigned> stabilization_height;
  std::optional<EigenvalueVerdict> base;  // at q = product^height
  std::vector<EigenvalueVerdict> products;  // ascending q, when base holds
};
PowerClosureReport power_closure_check(const HadamardTriple& t,
                                       std::vector<long long> primes,
                                       unsigned M, unsigned exponent_budget);

}  // namespace canspec::spectrum
