// Copyright 2026 The twosq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWOSQ_ANALYSIS_HPP_
#define TWOSQ_ANALYSIS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "twosq/arith.hpp"

namespace twosq {

// --------------------------------------------------------------------------
// Admissibility constant C(rho)
// --------------------------------------------------------------------------

// f(delta) = 6 * 10^(2 delta) / ln(1/(2 delta)), strictly increasing on
// (0, 1/2), running from 0 to +inf. Natural logarithm throughout.
inline double f_rho(double delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw std::domain_error("f_rho: delta must lie in (0, 1/2)");
  return 6.0 * std::exp(2.0 * delta * std::log(10.0)) / (-std::log(2.0 * delta));
}

// The unique delta with f(delta) == rho, bisected until the bracket's image
// under f is narrower than tol. Returns the midpoint of the final bracket.
inline double compute_C(double rho, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("compute_C: tol must be positive");
  if (!(rho > 0.0)) throw std::domain_error("compute_C: no admissible delta");
  double lo = 1e-9;
  while (!(f_rho(lo) < rho)) {
    lo /= 2.0;
    if (lo < 1e-300) throw std::domain_error("compute_C: no admissible delta");
  }
  double hi = 0.5 - 1e-12;
  for (int it = 0; it < 500; ++it) {
    if (f_rho(hi) - f_rho(lo) <= tol) break;
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at double resolution
    if (f_rho(mid) < rho) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// --------------------------------------------------------------------------
// sigma products over class primes
// --------------------------------------------------------------------------

inline mpq_class sigma_range_exact(uint64_t z_lo, uint64_t x_hi, PrimeClass pc) {
  mpq_class prod(1);
  if (x_hi <= z_lo) return prod;
  for (uint64_t q : sieve_primes_q(z_lo, x_hi, pc)) {
    if (q <= 2) throw std::logic_error("sigma: class prime <= 2 cannot occur");
    prod *= mpq_class(q - 2, q);
  }
  prod.canonicalize();
  return prod;
}

inline mpq_class sigma_product_exact(uint64_t x_hi, PrimeClass pc) {
  return sigma_range_exact(0, x_hi, pc);
}

inline double sigma_range(uint64_t z_lo, uint64_t x_hi, PrimeClass pc) {
  return sigma_range_exact(z_lo, x_hi, pc).get_d();
}

inline double sigma_product(uint64_t x_hi, PrimeClass pc) {
  return sigma_range_exact(0, x_hi, pc).get_d();
}

// --------------------------------------------------------------------------
// H-grid and Q-blocks
// --------------------------------------------------------------------------

enum class Side { Primed, DoublePrimed };

// Geometric ladder H = xi^j with 2y/x <= H <= y/(xi z). Even exponents feed
// the primed side, odd the doubleprimed side. The asymptotic-regime bound
// (log x)^delta <= H <= sqrt(log x)/loglog x is recorded as a flag, not
// enforced: it is unsatisfiable at desk scale.
struct HGrid {
  double xi = 2.0;
  std::vector<double> members;   // ascending
  std::vector<int> exponents;    // j per member
  bool h_range_satisfied = false;

  bool empty() const { return members.empty(); }
};

inline HGrid build_h_grid(uint64_t y, uint64_t x, uint64_t z, double xi, double delta) {
  if (!(xi > 1.0)) throw std::invalid_argument("build_h_grid: xi must exceed 1");
  HGrid grid;
  grid.xi = xi;
  double lo = 2.0 * static_cast<double>(y) / static_cast<double>(x);
  double hi = static_cast<double>(y) / (xi * static_cast<double>(z));
  double H = 1.0;
  for (int j = 0; H <= hi; ++j, H *= xi) {
    if (H >= lo) {
      grid.members.push_back(H);
      grid.exponents.push_back(j);
    }
  }
  double lx = std::log(static_cast<double>(x));
  double asym_lo = std::pow(lx, delta);
  double asym_hi = x > 15 ? std::sqrt(lx) / std::log(lx) : 0.0;
  grid.h_range_satisfied = !grid.members.empty();
  for (double m : grid.members)
    if (!(m >= asym_lo && m <= asym_hi)) grid.h_range_satisfied = false;
  return grid;
}

// Q_H = class primes in (y/(xi H), y/H]. Blocks for distinct H are disjoint
// by construction: adjacent blocks share the identical boundary value.
struct QBlock {
  double H = 1.0;
  int exponent = 0;
  Side side = Side::Primed;
  std::vector<uint64_t> primes;
};

inline std::vector<QBlock> build_q_blocks(const HGrid& grid, uint64_t y, PrimeClass pc) {
  std::vector<QBlock> blocks;
  if (grid.empty()) return blocks;
  std::vector<uint64_t> all = sieve_primes_q(0, y, pc);
  for (size_t i = 0; i < grid.members.size(); ++i) {
    QBlock b;
    b.H = grid.members[i];
    b.exponent = grid.exponents[i];
    b.side = (b.exponent % 2 == 0) ? Side::Primed : Side::DoublePrimed;
    double hi = static_cast<double>(y) / b.H;
    double lo = static_cast<double>(y) / (grid.xi * b.H);
    for (uint64_t q : all) {
      double qd = static_cast<double>(q);
      if (qd > lo && qd <= hi) b.primes.push_back(q);
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

// --------------------------------------------------------------------------
// Weight machinery: E_A, N(v), subset survival, lambda
// --------------------------------------------------------------------------

// The prime window (H^M, z] with its sieved residue pairs I_q = {0, c_q},
// and sigma_2 = sigma(H^M, z). Immutable once built; shareable.
struct WeightContext {
  int64_t a = 2;
  int64_t b = 1;
  std::vector<uint64_t> primes;  // ascending
  std::vector<uint64_t> cq;      // c_q per window prime
  mpq_class sigma2_exact = 1;
  double sigma2 = 1.0;

  size_t size() const { return primes.size(); }
};

inline WeightContext make_weight_context(int64_t a, int64_t b, double hm, uint64_t z) {
  WeightContext ctx;
  ctx.a = a;
  ctx.b = b;
  PrimeClass pc = prime_class_for(a, b);
  if (hm < static_cast<double>(z)) {
    uint64_t lo = hm < 0 ? 0 : static_cast<uint64_t>(hm);
    for (uint64_t q : sieve_primes_q(lo, z, pc)) {
      if (static_cast<double>(q) <= hm) continue;  // boundary: window is (hm, z]
      ctx.primes.push_back(q);
      ctx.cq.push_back(solve_cq(a, b, q));
      ctx.sigma2_exact *= mpq_class(q - 2, q);
    }
    ctx.sigma2_exact.canonicalize();
  }
  ctx.sigma2 = ctx.sigma2_exact.get_d();
  return ctx;
}

namespace detail {

// m mod q lies in I_q - I_q = {0, c_q, q - c_q}?
inline bool in_difference_set(int64_t m, uint64_t q, uint64_t c) {
  uint64_t r = static_cast<uint64_t>(mod_i64(m, q));
  return r == 0 || r == c || r == q - c;
}

inline bool in_difference_set(const mpz_class& m, uint64_t q, uint64_t c) {
  uint64_t r = mod_mpz(m, q);
  return r == 0 || r == c || r == q - c;
}

}  // namespace detail

// E_A(m; H) over squarefree products of window primes, via the
// multiplicative identity prod_q (1 + A*1[m in I_q - I_q]/q) - 1.
// Exact for squarefree supports; zero when m == 0.
inline mpq_class e_weight_exact(const mpq_class& A, const mpz_class& m,
                                const WeightContext& ctx) {
  if (m == 0) return mpq_class(0);
  mpq_class prod(1);
  for (size_t i = 0; i < ctx.size(); ++i) {
    if (detail::in_difference_set(m, ctx.primes[i], ctx.cq[i]))
      prod *= mpq_class(1) + A / mpq_class(static_cast<unsigned long>(ctx.primes[i]));
  }
  prod -= 1;
  prod.canonicalize();
  return prod;
}

inline double e_weight(double A, int64_t m, const WeightContext& ctx) {
  if (A < 0) throw std::invalid_argument("e_weight: A must be nonnegative");
  if (m == 0) return 0.0;
  double prod = 1.0;
  for (size_t i = 0; i < ctx.size(); ++i) {
    if (detail::in_difference_set(m, ctx.primes[i], ctx.cq[i]))
      prod *= 1.0 + A / static_cast<double>(ctx.primes[i]);
  }
  return prod - 1.0;
}

// N(v) = number of class primes q with v mod q in I_q - I_q; equivalently
// the class primes dividing F(v) = v (a v + b)(-a v + b).
inline int count_N(int64_t v, int64_t a, int64_t b, PrimeClass pc) {
  if (v == 0) throw std::invalid_argument("count_N: v must be nonzero");
  std::set<uint64_t> qs;
  auto collect = [&](int64_t w) {
    if (w == 0) return;
    uint64_t u = static_cast<uint64_t>(w < 0 ? -w : w);
    for (auto [p, e] : factorize(u))
      if (pc.contains(p)) qs.insert(p);
  };
  collect(v);
  collect(a * v + b);
  collect(a * v - b);
  return static_cast<int>(qs.size());
}

// Exact probability over uniform d_2 that U is contained in S_2(d_2):
// prod over window primes of (1 - #(U - I_q)/q).
inline mpq_class prob_subset_exact(const std::vector<int64_t>& U, const WeightContext& ctx) {
  mpq_class prod(1);
  for (size_t i = 0; i < ctx.size(); ++i) {
    uint64_t q = ctx.primes[i];
    uint64_t c = ctx.cq[i];
    std::vector<bool> hit(q, false);
    for (int64_t u : U) {
      uint64_t r = static_cast<uint64_t>(mod_i64(u, q));
      hit[r] = true;
      hit[(r + q - c % q) % q] = true;
    }
    uint64_t k = 0;
    for (bool h : hit) k += h;
    if (k >= q)
      throw std::invalid_argument("prob_subset: window prime too small for set");
    prod *= mpq_class(q - k, q);
  }
  prod.canonicalize();
  return prod;
}

inline double prob_subset(const std::vector<int64_t>& U, const WeightContext& ctx) {
  return prob_subset_exact(U, ctx).get_d();
}

// AP'(J; q, n) (primed) or AP''(J; q, n) (doubleprimed): the two arithmetic
// arms {n + alpha + qh : h = 1..J} (alpha in {0, c_q}; -qh on the
// doubleprimed side) intersected with the stage-1 survivor set S_1 given by
// the d1 residue system (S''_1 uses the -N-d1 translate).
inline std::vector<int64_t> ap_elements(const WeightContext& ctx, uint64_t q, int64_t n,
                                        int64_t J, Side side, const CrtValue& d1,
                                        const mpz_class& N) {
  uint64_t c_q = solve_cq(ctx.a, ctx.b, q);
  std::vector<std::pair<uint64_t, uint64_t>> small;  // (p, c_p) for d1 primes
  small.reserve(d1.residues.size());
  for (const auto& [p, r] : d1.residues) small.emplace_back(p, solve_cq(ctx.a, ctx.b, p));

  auto survives_s1 = [&](int64_t t) {
    for (size_t i = 0; i < d1.residues.size(); ++i) {
      uint64_t p = d1.residues[i].first;
      uint64_t r = d1.residues[i].second;
      uint64_t cp = small[i].second;
      uint64_t tm;
      if (side == Side::Primed) {
        tm = static_cast<uint64_t>(mod_i64(t - static_cast<int64_t>(r), p));
      } else {
        mpz_class shifted = t + N + static_cast<unsigned long>(r);
        tm = mod_mpz(shifted, p);
      }
      if (tm == 0 || tm == cp) return false;
    }
    return true;
  };

  std::vector<int64_t> ap;
  for (uint64_t alpha : {uint64_t{0}, c_q}) {
    for (int64_t h = 1; h <= J; ++h) {
      int64_t t = side == Side::Primed
                      ? n + static_cast<int64_t>(alpha) + static_cast<int64_t>(q) * h
                      : n + static_cast<int64_t>(alpha) - static_cast<int64_t>(q) * h;
      if (survives_s1(t)) ap.push_back(t);
    }
  }
  std::sort(ap.begin(), ap.end());
  return ap;
}

namespace detail {

inline void check_disjoint_systems(const CrtValue& d1, const CrtValue& d2) {
  for (const auto& [p, _] : d1.residues)
    for (const auto& [q, __] : d2.residues)
      if (p == q)
        throw std::invalid_argument("lambda_weight: residue systems share a prime");
}

// AP subset of S_2 under the d2 residue system?
inline bool ap_in_s2(const std::vector<int64_t>& ap, Side side, const CrtValue& d2,
                     const WeightContext& ctx, const mpz_class& N) {
  for (size_t i = 0; i < ctx.size(); ++i) {
    uint64_t p = ctx.primes[i];
    uint64_t cp = ctx.cq[i];
    uint64_t r = d2.residue_of(p);
    for (int64_t t : ap) {
      uint64_t tm;
      if (side == Side::Primed) {
        tm = static_cast<uint64_t>(mod_i64(t - static_cast<int64_t>(r), p));
      } else {
        mpz_class shifted = t + N + static_cast<unsigned long>(r);
        tm = mod_mpz(shifted, p);
      }
      if (tm == 0 || tm == cp) return false;
    }
  }
  return true;
}

}  // namespace detail

// lambda(H; q, n) = 1[AP(KH; q, n) in S_2] / sigma_2^#AP. An empty AP gives 1.
inline mpq_class lambda_weight_exact(double H, uint64_t q, int64_t n, Side side,
                                     const CrtValue& d1, const CrtValue& d2,
                                     const WeightContext& ctx, const mpz_class& N,
                                     double K) {
  detail::check_disjoint_systems(d1, d2);
  int64_t J = static_cast<int64_t>(std::floor(K * H));
  std::vector<int64_t> ap = ap_elements(ctx, q, n, J, side, d1, N);
  if (!detail::ap_in_s2(ap, side, d2, ctx, N)) return mpq_class(0);
  mpq_class w(1);
  for (size_t i = 0; i < ap.size(); ++i) w /= ctx.sigma2_exact;
  w.canonicalize();
  return w;
}

inline double lambda_weight(double H, uint64_t q, int64_t n, Side side,
                            const CrtValue& d1, const CrtValue& d2,
                            const WeightContext& ctx, const mpz_class& N, double K) {
  return lambda_weight_exact(H, q, n, side, d1, d2, ctx, N, K).get_d();
}

// --------------------------------------------------------------------------
// Covering density estimate
// --------------------------------------------------------------------------

// C' ~ K/(4(K+2)M) * (1 - 1/xi)/log(xi) * log(1/(2 delta)).
// Evaluated with log1p so the xi -> 1+ regime keeps full precision.
inline double estimate_Cprime(double K, double M, double xi, double delta) {
  if (!(K > 0)) throw std::domain_error("estimate_Cprime: K must be positive");
  if (!(M > 6.0 && M <= 7.0)) throw std::domain_error("estimate_Cprime: need 6 < M <= 7");
  if (!(xi > 1.0)) throw std::domain_error("estimate_Cprime: need xi > 1");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::domain_error("estimate_Cprime: need 0 < delta < 1/2");
  double u = xi - 1.0;
  double xi_factor = (u / xi) / std::log1p(u);
  return K / (4.0 * (K + 2.0) * M) * xi_factor * (-std::log(2.0 * delta));
}

}  // namespace twosq

#endif  // TWOSQ_ANALYSIS_HPP_
