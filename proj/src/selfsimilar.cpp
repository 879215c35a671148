#include "canspec/selfsimilar.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>

#include "canspec/errors.hpp"

namespace canspec::selfsimilar {

namespace {

constexpr long long kMaxStates = 20'000'000;

long long to_ll_or_throw(const BigInt& v, const char* what) {
  if (!v.fits_slong_p()) throw resource_error(what);
  return mpz_get_si(v.get_mpz_t());
}

}  // namespace

DigitSystem::DigitSystem(long long q, std::vector<Rational> digits)
    : q_(q), digits_(std::move(digits)) {
  if (q_ < 2) throw domain_error("digit system base must be at least 2");
  if (digits_.empty()) throw domain_error("digit set must be nonempty");
  std::sort(digits_.begin(), digits_.end());
  if (std::adjacent_find(digits_.begin(), digits_.end()) != digits_.end())
    throw domain_error("digits must be pairwise distinct");
  BigInt wb(1);
  for (const Rational& d : digits_)
    mpz_lcm(wb.get_mpz_t(), wb.get_mpz_t(), d.den().get_mpz_t());
  w_ = to_ll_or_throw(wb, "common digit denominator too large");
  scaled_.reserve(digits_.size());
  for (const Rational& d : digits_) {
    BigInt a = d.num() * (wb / d.den());
    scaled_.push_back(to_ll_or_throw(a, "scaled digit too large"));
  }
  Rational span(BigInt(static_cast<long>(q_ - 1)), BigInt(1));
  hull_min_ = digits_.front() / span;
  hull_max_ = digits_.back() / span;
}

StateGraph::StateGraph(const DigitSystem& sys, long long u)
    : q_(sys.q()), u_(u), alphas_(sys.scaled_digits()) {
  if (u_ <= 0) throw domain_error("state denominator must be positive");
  if (alphas_.size() > 60000) throw resource_error("too many digits");
  // State range: integers m with m/u in [alpha_min/(q-1), alpha_max/(q-1)].
  BigInt ub(static_cast<long>(u_));
  BigInt qm1(static_cast<long>(q_ - 1));
  BigInt lob = rational_ceil(Rational(ub * BigInt(static_cast<long>(alphas_.front())), qm1));
  BigInt hib = rational_floor(Rational(ub * BigInt(static_cast<long>(alphas_.back())), qm1));
  if (hib < lob) {
    empty_ = true;
    lo_ = 0;
    hi_ = -1;
    alive_total_ = 0;
    return;
  }
  empty_ = false;
  BigInt count = hib - lob + 1;
  if (count > static_cast<long>(kMaxStates)) throw resource_error("state graph too large");
  lo_ = to_ll_or_throw(lob, "state range endpoint too large");
  hi_ = to_ll_or_throw(hib, "state range endpoint too large");
  const std::size_t n = static_cast<std::size_t>(hi_ - lo_ + 1);

  auto edge_to = [&](long long m, std::size_t i) -> __int128 {
    return static_cast<__int128>(q_) * m - static_cast<__int128>(alphas_[i]) * u_;
  };
  std::vector<std::uint16_t> outdeg(n, 0);
  alive_.assign(n, 1);
  std::vector<long long> dead;
  for (std::size_t j = 0; j < n; ++j) {
    const long long m = lo_ + static_cast<long long>(j);
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      const __int128 t = edge_to(m, i);
      if (t >= lo_ && t <= hi_) ++outdeg[j];
    }
    if (outdeg[j] == 0) {
      alive_[j] = 0;
      dead.push_back(m);
    }
  }
  // Greatest fixed point: deleting a state may strand its predecessors.
  // Predecessors are recovered arithmetically: m' -> m under alpha means
  // m' = (m + alpha u)/q when the division is exact.
  while (!dead.empty()) {
    const long long m = dead.back();
    dead.pop_back();
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      const __int128 num = static_cast<__int128>(m) + static_cast<__int128>(alphas_[i]) * u_;
      if (num % q_ != 0) continue;
      const __int128 pm = num / q_;
      if (pm < lo_ || pm > hi_) continue;
      const std::size_t pj = static_cast<std::size_t>(static_cast<long long>(pm) - lo_);
      if (!alive_[pj]) continue;
      assert(outdeg[pj] > 0);
      if (--outdeg[pj] == 0) {
        alive_[pj] = 0;
        dead.push_back(static_cast<long long>(pm));
      }
    }
  }
  alive_total_ = static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), char(1)));
}

std::optional<long long> StateGraph::target(long long m, std::size_t i) const {
  assert(contains(m) && i < alphas_.size());
  const __int128 t = static_cast<__int128>(q_) * m - static_cast<__int128>(alphas_[i]) * u_;
  if (t < lo_ || t > hi_) return std::nullopt;
  return static_cast<long long>(t);
}

namespace {

struct BfsTree {
  std::vector<long long> dist;      // -1 = unreached (graph-local index)
  std::vector<long long> parent;    // graph-local index, -1 at source
  std::vector<int> pdigit;          // digit index on the tree edge
};

// Breadth-first search over alive states only, exploring digits in
// ascending order so tree paths are deterministic.  Nodes at distance
// max_dist are reached but not expanded.
BfsTree bfs_alive(const StateGraph& g, long long src, long long max_dist) {
  const std::size_t n = static_cast<std::size_t>(g.hi() - g.lo() + 1);
  BfsTree t{std::vector<long long>(n, -1), std::vector<long long>(n, -1),
            std::vector<int>(n, -1)};
  auto idx = [&](long long m) { return static_cast<std::size_t>(m - g.lo()); };
  std::deque<long long> queue{src};
  t.dist[idx(src)] = 0;
  while (!queue.empty()) {
    const long long m = queue.front();
    queue.pop_front();
    const long long d = t.dist[idx(m)];
    if (d >= max_dist) continue;
    for (std::size_t i = 0; i < g.digit_count(); ++i) {
      const auto nxt = g.target(m, i);
      if (!nxt || !g.alive(*nxt)) continue;
      auto& dn = t.dist[idx(*nxt)];
      if (dn >= 0) continue;
      dn = d + 1;
      t.parent[idx(*nxt)] = m;
      t.pdigit[idx(*nxt)] = static_cast<int>(i);
      queue.push_back(*nxt);
    }
  }
  return t;
}

// Digit indices along the tree path src -> dst.
std::vector<int> tree_path(const StateGraph& g, const BfsTree& t, long long dst) {
  std::vector<int> word;
  auto idx = [&](long long m) { return static_cast<std::size_t>(m - g.lo()); };
  for (long long m = dst; t.dist[idx(m)] > 0; m = t.parent[idx(m)])
    word.push_back(t.pdigit[idx(m)]);
  std::reverse(word.begin(), word.end());
  return word;
}

// Certificate for the alive state m0: the period is a shortest cycle in
// the alive subgraph reachable from m0, anchored deterministically.
CodingCertificate extract_certificate(const DigitSystem& sys, const StateGraph& g,
                                      long long m0) {
  const long long n = g.hi() - g.lo() + 1;
  auto idx = [&](long long m) { return static_cast<std::size_t>(m - g.lo()); };
  const BfsTree from_start = bfs_alive(g, m0, n + 1);

  // Shortest cycle through y: 1 + min dist(y -> z) over alive z with an
  // edge z -> y.  The search is cut off at the best length found so far.
  long long best_len = n + 1, best_dist = -1, best_y = 0;
  // Self-loops settle the minimum without any per-node search.
  for (long long y = g.lo(); y <= g.hi(); ++y) {
    if (!g.alive(y) || from_start.dist[idx(y)] < 0) continue;
    for (std::size_t i = 0; i < g.digit_count(); ++i) {
      const auto t = g.target(y, i);
      if (!t || *t != y) continue;
      const long long dy = from_start.dist[idx(y)];
      if (best_len > 1 || dy < best_dist) {
        best_len = 1;
        best_dist = dy;
        best_y = y;
      }
      break;
    }
  }
  for (long long y = g.lo(); best_len > 1 && y <= g.hi(); ++y) {
    if (!g.alive(y) || from_start.dist[idx(y)] < 0) continue;
    const BfsTree back = bfs_alive(g, y, best_len - 1);
    long long len = -1;
    for (long long z = g.lo(); z <= g.hi(); ++z) {
      if (!g.alive(z) || back.dist[idx(z)] < 0) continue;
      for (std::size_t i = 0; i < g.digit_count(); ++i) {
        const auto t = g.target(z, i);
        if (t && *t == y) {
          const long long cand = back.dist[idx(z)] + 1;
          if (len < 0 || cand < len) len = cand;
        }
      }
    }
    if (len < 0) continue;
    const long long dy = from_start.dist[idx(y)];
    if (len < best_len || (len == best_len && (dy < best_dist || (dy == best_dist && y < best_y)))) {
      best_len = len;
      best_dist = dy;
      best_y = y;
    }
  }
  assert(best_len <= n);  // finite alive graph always closes a cycle

  // Period word: path y* -> z* plus the closing edge z* -> y*.
  const BfsTree around = bfs_alive(g, best_y, best_len - 1);
  long long best_z = -1;
  int close_digit = -1;
  for (long long z = g.lo(); z <= g.hi(); ++z) {
    if (!g.alive(z) || around.dist[idx(z)] != best_len - 1) continue;
    for (std::size_t i = 0; i < g.digit_count(); ++i) {
      const auto t = g.target(z, i);
      if (t && *t == best_y) {
        if (best_z < 0 || z < best_z) {
          best_z = z;
          close_digit = static_cast<int>(i);
        }
        break;  // digits ascend, first hit is the smallest
      }
    }
  }
  assert(best_z >= 0);
  std::vector<int> period_word = tree_path(g, around, best_z);
  period_word.push_back(close_digit);

  CodingCertificate cert;
  for (int i : tree_path(g, from_start, best_y)) cert.preperiod.push_back(sys.digits()[static_cast<std::size_t>(i)]);
  for (int i : period_word) cert.period.push_back(sys.digits()[static_cast<std::size_t>(i)]);
  assert(!cert.period.empty());
  return cert;
}

}  // namespace

MemberResult member(const DigitSystem& sys, const Rational& x) {
  if (x < sys.hull_min() || x > sys.hull_max()) return {};
  // Scale to the integer-digit world: y = w x evolves by y -> q y - alpha.
  const Rational y = x * Rational(sys.w());
  const long long u = to_ll_or_throw(y.den(), "membership denominator too large");
  const long long m0 = to_ll_or_throw(y.num(), "membership numerator too large");
  StateGraph g(sys, u);
  if (!g.alive(m0)) return {};
  MemberResult r;
  r.is_member = true;
  r.certificate = extract_certificate(sys, g, m0);
  return r;
}

CodingCertificate coding(const DigitSystem& sys, const Rational& x) {
  MemberResult r = member(sys, x);
  if (!r.is_member) throw domain_error("point is not in the attractor");
  return *std::move(r.certificate);
}

std::vector<Rational> lattice_points(const DigitSystem& sys, long long u) {
  if (u <= 0) throw domain_error("lattice denominator must be positive");
  // x = v/u corresponds to the scaled state m = w v at denominator u.
  StateGraph g(sys, u);
  BigInt ub(static_cast<long>(u));
  const BigInt vlob = rational_ceil(sys.hull_min() * Rational(ub, BigInt(1)));
  const BigInt vhib = rational_floor(sys.hull_max() * Rational(ub, BigInt(1)));
  std::vector<Rational> out;
  if (vhib < vlob) return out;
  const long long vlo = to_ll_or_throw(vlob, "lattice range too large");
  const long long vhi = to_ll_or_throw(vhib, "lattice range too large");
  for (long long v = vlo; v <= vhi; ++v) {
    const long long m = v * sys.w();
    if (g.alive(m)) out.emplace_back(BigInt(static_cast<long>(v)), ub);
  }
  return out;
}

LevelSets dp_intersection(const DigitSystem& sys, long long p, unsigned M) {
  if (p < 2) throw domain_error("level modulus must be at least 2");
  if (std::gcd(p, sys.q()) != 1) throw domain_error("level modulus must be coprime to the base");
  const BigInt pb(static_cast<long>(p));
  const BigInt wb(static_cast<long>(sys.w()));
  // Exact level of x: the first scan that can see it, i.e. the least k
  // with den(x) | p^k w.
  const auto level_of = [&](const Rational& x) {
    BigInt t = x.den() / gcd(x.den(), wb);
    unsigned k = 0;
    while (t != 1) {
      BigInt g = gcd(t, pb);
      assert(g != 1);
      t /= g;
      ++k;
    }
    return k;
  };
  LevelSets out;
  out.levels.resize(M + 1);
  long long scale = sys.w();
  for (unsigned m = 0; m <= M; ++m) {
    if (m > 0) {
      if (scale > std::numeric_limits<long long>::max() / p)
        throw resource_error("level denominator overflows");
      scale *= p;
    }
    for (const Rational& x : lattice_points(sys, scale))
      if (level_of(x) == m) out.levels[m].push_back(x);
  }
  // Largest nonempty level, observable only when the scan top is empty.
  if (out.levels[M].empty()) {
    unsigned last = 0;
    for (unsigned m = 0; m <= M; ++m)
      if (!out.levels[m].empty()) last = m;
    out.stabilization_index = last;
  }
  return out;
}

double similarity_dimension(const DigitSystem& sys) {
  return std::log(static_cast<double>(sys.digits().size())) /
         std::log(static_cast<double>(sys.q()));
}

}  // namespace canspec::selfsimilar
