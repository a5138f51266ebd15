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

#ifndef TWOSQ_CONSTRUCT_HPP_
#define TWOSQ_CONSTRUCT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twosq/analysis.hpp"
#include "twosq/arith.hpp"
#include "twosq/membership.hpp"
#include "twosq/rng.hpp"

namespace twosq {

enum class Mode { Paper, Free };
enum class Strategy { Greedy, Randomized };

// Construction failures that reflect an infeasible instance rather than a
// bug: stage-3 deficits, interval placement, stage-1 retry exhaustion.
class ConstructInfeasible : public std::runtime_error {
 public:
  ConstructInfeasible(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// --------------------------------------------------------------------------
// Parameters
// --------------------------------------------------------------------------

struct SieveParams {
  int64_t a = 2;
  int64_t b = 1;
  double delta = 0.05;
  uint64_t x = 0;
  uint64_t y = 0;
  uint64_t z = 0;
  double K = 2.0;
  double M = 6.5;
  double xi = 1.5;
  double epsilon = 0.05;
  mpz_class N = 0;
  uint64_t seed = 0;
  Mode mode = Mode::Free;

  HGrid grid;
  std::vector<QBlock> blocks;
  bool no_medium_room = false;  // paper-mode z >= x/2: grid stays empty

  PrimeClass pc() const { return prime_class_for(a, b); }
};

// Populates y, z (paper mode: y = [x (ln x)^delta], z = [y lnln x / sqrt(ln x)];
// free mode: explicit overrides) and precomputes the H-grid and Q-blocks.
inline SieveParams derive_params(int64_t a, int64_t b, double delta, uint64_t x,
                                 double K, double M, double xi, double epsilon,
                                 mpz_class N, uint64_t seed, Mode mode,
                                 std::optional<uint64_t> y_override = std::nullopt,
                                 std::optional<uint64_t> z_override = std::nullopt) {
  if (a <= 0) throw std::invalid_argument("derive_params: a must be positive");
  if (b % a == 0) throw std::invalid_argument("derive_params: a divides b");
  if (!(delta > 1e-6 && delta < 0.5))
    throw std::invalid_argument("derive_params: delta must lie in (1e-6, 1/2)");
  if (!(M > 6.0 && M <= 7.0)) throw std::invalid_argument("derive_params: need 6 < M <= 7");
  if (!(xi > 1.0)) throw std::invalid_argument("derive_params: need xi > 1");
  if (!(K > 0.0)) throw std::invalid_argument("derive_params: need K > 0");
  if (!(epsilon > 0.0 && epsilon < (M - 6.0) / 7.0))
    throw std::invalid_argument("derive_params: need 0 < epsilon < (M-6)/7");

  SieveParams p;
  p.a = a; p.b = b; p.delta = delta; p.x = x;
  p.K = K; p.M = M; p.xi = xi; p.epsilon = epsilon;
  p.N = std::move(N); p.seed = seed; p.mode = mode;

  if (mode == Mode::Paper) {
    if (x < 16) throw std::invalid_argument("derive_params: paper mode needs x >= 16");
    double lx = std::log(static_cast<double>(x));
    p.y = static_cast<uint64_t>(std::floor(static_cast<double>(x) * std::pow(lx, delta)));
    p.z = static_cast<uint64_t>(std::floor(static_cast<double>(p.y) * std::log(lx) /
                                           std::sqrt(lx)));
    if (p.z < 1) p.z = 1;
    // At desk scale z < x/2 is unattainable in paper mode; record it and run
    // with an empty medium range instead of refusing.
    if (2 * p.z >= x) p.no_medium_room = true;
  } else {
    if (!y_override || !z_override)
      throw std::invalid_argument("derive_params: free mode requires y and z");
    p.y = *y_override;
    p.z = *z_override;
    if (p.z < 1 || 2 * p.z >= x)
      throw std::invalid_argument("derive_params: no medium-prime room (need 1 <= z < x/2)");
    if (p.z >= p.y) throw std::invalid_argument("derive_params: need z < y");
  }
  if (p.N != 0 && p.N <= 5 * mpz_class(static_cast<unsigned long>(p.y)))
    throw std::invalid_argument("derive_params: N must exceed 5y");

  if (!p.no_medium_room) {
    p.grid = build_h_grid(p.y, p.x, p.z, p.xi, p.delta);
    p.blocks = build_q_blocks(p.grid, p.y, p.pc());
  }
  return p;
}

// --------------------------------------------------------------------------
// Stage 1: random d mod P(z)
// --------------------------------------------------------------------------

struct SurvivorSet {
  Side side = Side::Primed;
  int64_t lo = 0;
  int64_t hi = 0;
  std::vector<int64_t> offsets;  // ascending

  size_t count() const { return offsets.size(); }
};

struct Stage1Result {
  CrtValue rs;  // one residue per class prime <= z
  SurvivorSet primed;
  SurvivorSet doubleprimed;
  int attempts = 0;
  bool accepted = false;
  mpq_class sigma_exact = 1;  // sigma(z)
};

class Stage1Exhausted : public ConstructInfeasible {
 public:
  Stage1Exhausted(Stage1Result best, const std::string& what)
      : ConstructInfeasible("stage1", what), best_(std::move(best)) {}
  const Stage1Result& best() const { return best_; }

 private:
  Stage1Result best_;
};

namespace detail {

inline SurvivorSet survivors_for(const SieveParams& p, const CrtValue& rs, Side side) {
  SurvivorSet s;
  s.side = side;
  int64_t y = static_cast<int64_t>(p.y);
  s.lo = side == Side::Primed ? 1 : -y;
  s.hi = side == Side::Primed ? y : -1;

  std::vector<std::pair<uint64_t, uint64_t>> qc;  // (q, c_q)
  std::vector<uint64_t> shift;                    // residue of d (+ N for '')
  for (const auto& [q, r] : rs.residues) {
    qc.emplace_back(q, solve_cq(p.a, p.b, q));
    if (side == Side::Primed) {
      shift.push_back(r);
    } else {
      shift.push_back((mod_mpz(p.N, q) + r) % q);
    }
  }
  for (int64_t n = s.lo; n <= s.hi; ++n) {
    bool alive = true;
    for (size_t i = 0; i < qc.size() && alive; ++i) {
      uint64_t q = qc[i].first;
      uint64_t m;
      if (side == Side::Primed) {
        m = static_cast<uint64_t>(mod_i64(n - static_cast<int64_t>(shift[i]), q));
      } else {
        m = static_cast<uint64_t>(mod_i64(n + static_cast<int64_t>(shift[i]), q));
      }
      if (m == 0 || m == qc[i].second) alive = false;
    }
    if (alive) s.offsets.push_back(n);
  }
  return s;
}

}  // namespace detail

// Samples an independent uniform residue mod each class prime q <= z
// (equivalent to a uniform draw from Z/P(z)Z), recomputes both survivor
// sets, and accepts once both counts are <= 2 sigma y. The best rejected
// draw rides along on the failure path.
inline Stage1Result stage1_choose_d(const SieveParams& p, Rng& rng, int max_retries = 64) {
  std::vector<uint64_t> primes = sieve_primes_q(0, p.z, p.pc());
  mpq_class sigma = sigma_product_exact(p.z, p.pc());
  mpq_class threshold = 2 * sigma * static_cast<unsigned long>(p.y);

  Stage1Result best;
  size_t best_metric = SIZE_MAX;
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    std::vector<std::pair<uint64_t, uint64_t>> rp;
    rp.reserve(primes.size());
    for (uint64_t q : primes) rp.emplace_back(rng.below(q), q);
    Stage1Result cur;
    cur.rs = crt_combine(rp);
    cur.sigma_exact = sigma;
    cur.attempts = attempt;
    cur.primed = detail::survivors_for(p, cur.rs, Side::Primed);
    cur.doubleprimed = detail::survivors_for(p, cur.rs, Side::DoublePrimed);
    size_t metric = std::max(cur.primed.count(), cur.doubleprimed.count());
    if (mpq_class(static_cast<unsigned long>(cur.primed.count())) <= threshold &&
        mpq_class(static_cast<unsigned long>(cur.doubleprimed.count())) <= threshold) {
      cur.accepted = true;
      return cur;
    }
    if (metric < best_metric) {
      best_metric = metric;
      best = std::move(cur);
    }
  }
  throw Stage1Exhausted(std::move(best), "stage1: no draw met the 2*sigma*y bound");
}

// --------------------------------------------------------------------------
// Stage 2: covering by medium primes
// --------------------------------------------------------------------------

struct CoverEntry {
  uint64_t q = 0;
  Side side = Side::Primed;
  double H = 1.0;
  int64_t J = 0;
  int64_t n_q = 0;
  std::vector<int64_t> covered;  // e_q = arms(n_q) intersected with survivors
};

struct CoverAssignment {
  std::vector<CoverEntry> entries;
  std::vector<int64_t> leftovers_primed;
  std::vector<int64_t> leftovers_doubleprimed;
  bool rebalanced = false;
  double eta = 0.0;
  double leftover_fraction_primed = 0.0;
  double leftover_fraction_doubleprimed = 0.0;
};

namespace detail {

// the two AP arms of q at translate n, restricted to the window [lo, hi]
inline std::vector<int64_t> arm_values(uint64_t q, uint64_t c_q, int64_t n, int64_t J,
                                       Side side, int64_t lo, int64_t hi) {
  std::vector<int64_t> vals;
  for (uint64_t alpha : {uint64_t{0}, c_q}) {
    for (int64_t h = 1; h <= J; ++h) {
      int64_t t = side == Side::Primed
                      ? n + static_cast<int64_t>(alpha) + static_cast<int64_t>(q) * h
                      : n + static_cast<int64_t>(alpha) - static_cast<int64_t>(q) * h;
      if (t >= lo && t <= hi) vals.push_back(t);
    }
  }
  return vals;
}

struct MediumPrime {
  uint64_t q;
  double H;
  Side side;
};

// Descending H, then descending q. When one side ends up with no primes at
// all and the other has some, redistribute round-robin starting with the
// starved side and flag the deviation.
inline std::pair<std::vector<MediumPrime>, bool> plan_sides(const SieveParams& p) {
  std::vector<MediumPrime> plan;
  std::vector<QBlock> blocks = p.blocks;
  std::sort(blocks.begin(), blocks.end(),
            [](const QBlock& a, const QBlock& b) { return a.H > b.H; });
  size_t primed = 0, doubled = 0;
  for (const QBlock& blk : blocks) {
    std::vector<uint64_t> qs = blk.primes;
    std::sort(qs.rbegin(), qs.rend());
    for (uint64_t q : qs) {
      plan.push_back({q, blk.H, blk.side});
      (blk.side == Side::Primed ? primed : doubled) += 1;
    }
  }
  bool rebalanced = false;
  if (!plan.empty() && (primed == 0 || doubled == 0)) {
    rebalanced = true;
    Side turn = primed == 0 ? Side::Primed : Side::DoublePrimed;
    for (MediumPrime& mp : plan) {
      mp.side = turn;
      turn = turn == Side::Primed ? Side::DoublePrimed : Side::Primed;
    }
  }
  return {plan, rebalanced};
}

inline CrtValue subsystem(const CrtValue& rs, double bound, bool leq) {
  std::vector<std::pair<uint64_t, uint64_t>> rp;
  for (const auto& [q, r] : rs.residues) {
    bool below = static_cast<double>(q) <= bound;
    if (below == leq) rp.emplace_back(r, q);
  }
  return crt_combine(rp);
}

}  // namespace detail

// Greedy: per prime, pick the translate n_q that covers the most
// still-uncovered survivors (ties to the smallest n_q); primes that cannot
// cover anything are left out of the assignment. Randomized: sample n_q
// proportionally to the lambda weights; every sampled prime joins the
// assignment, faithful to the source process.
inline CoverAssignment stage2_cover(const SieveParams& p, const Stage1Result& s1,
                                    Strategy strategy, Rng& rng) {
  CoverAssignment out;
  double ly = std::log(static_cast<double>(p.y));
  if (ly > 1.0) out.eta = 1.0 / (std::pow(ly, p.delta) * std::log(ly));

  auto [plan, rebalanced] = detail::plan_sides(p);
  out.rebalanced = rebalanced;

  int64_t y = static_cast<int64_t>(p.y);
  std::set<int64_t> unc_p(s1.primed.offsets.begin(), s1.primed.offsets.end());
  std::set<int64_t> unc_d(s1.doubleprimed.offsets.begin(), s1.doubleprimed.offsets.end());
  std::set<int64_t> surv_p = unc_p, surv_d = unc_d;

  for (const detail::MediumPrime& mp : plan) {
    std::set<int64_t>& unc = mp.side == Side::Primed ? unc_p : unc_d;
    const std::set<int64_t>& surv = mp.side == Side::Primed ? surv_p : surv_d;
    int64_t lo = mp.side == Side::Primed ? 1 : -y;
    int64_t hi = mp.side == Side::Primed ? y : -1;
    uint64_t c_q = solve_cq(p.a, p.b, mp.q);
    int64_t J = static_cast<int64_t>(std::floor(p.K * mp.H));
    if (J < 1) continue;

    std::optional<int64_t> chosen;
    if (strategy == Strategy::Greedy) {
      if (unc.empty()) continue;
      // candidate translates are exactly those reaching an uncovered survivor
      std::set<int64_t> candidates;
      for (int64_t s : unc) {
        for (uint64_t alpha : {uint64_t{0}, c_q}) {
          for (int64_t h = 1; h <= J; ++h) {
            int64_t n = mp.side == Side::Primed
                            ? s - static_cast<int64_t>(alpha) - static_cast<int64_t>(mp.q) * h
                            : s - static_cast<int64_t>(alpha) + static_cast<int64_t>(mp.q) * h;
            candidates.insert(n);
          }
        }
      }
      size_t best_score = 0;
      for (int64_t n : candidates) {  // ascending: first max wins the tie
        size_t score = 0;
        for (int64_t t : detail::arm_values(mp.q, c_q, n, J, mp.side, lo, hi))
          if (unc.count(t)) ++score;
        if (score > best_score) {
          best_score = score;
          chosen = n;
        }
      }
      if (!chosen) continue;
    } else {
      // lambda-weighted sampling over the admissible translate range
      WeightContext ctx = make_weight_context(p.a, p.b, std::pow(mp.H, p.M), p.z);
      CrtValue d1 = detail::subsystem(s1.rs, std::pow(mp.H, p.M), true);
      CrtValue d2 = detail::subsystem(s1.rs, std::pow(mp.H, p.M), false);
      int64_t ky = static_cast<int64_t>(std::ceil((p.K + 1.0) * static_cast<double>(p.y)));
      int64_t n_lo = mp.side == Side::Primed ? -ky + 1 : -y;
      int64_t n_hi = mp.side == Side::Primed ? y : ky - 1;
      std::vector<double> w(static_cast<size_t>(n_hi - n_lo + 1));
      double total = 0;
      for (int64_t n = n_lo; n <= n_hi; ++n) {
        double v = lambda_weight(mp.H, mp.q, n, mp.side, d1, d2, ctx, p.N, p.K);
        w[static_cast<size_t>(n - n_lo)] = v;
        total += v;
      }
      if (total <= 0) continue;
      double target = rng.unit() * total;
      double acc = 0;
      int64_t pick = n_hi;
      for (int64_t n = n_lo; n <= n_hi; ++n) {
        acc += w[static_cast<size_t>(n - n_lo)];
        if (acc >= target) { pick = n; break; }
      }
      chosen = pick;
    }

    CoverEntry entry;
    entry.q = mp.q;
    entry.side = mp.side;
    entry.H = mp.H;
    entry.J = J;
    entry.n_q = *chosen;
    for (int64_t t : detail::arm_values(mp.q, c_q, *chosen, J, mp.side, lo, hi))
      if (surv.count(t)) entry.covered.push_back(t);
    std::sort(entry.covered.begin(), entry.covered.end());
    for (int64_t t : entry.covered) unc.erase(t);
    out.entries.push_back(std::move(entry));
  }

  out.leftovers_primed.assign(unc_p.begin(), unc_p.end());
  out.leftovers_doubleprimed.assign(unc_d.begin(), unc_d.end());
  if (!surv_p.empty())
    out.leftover_fraction_primed =
        static_cast<double>(unc_p.size()) / static_cast<double>(surv_p.size());
  if (!surv_d.empty())
    out.leftover_fraction_doubleprimed =
        static_cast<double>(unc_d.size()) / static_cast<double>(surv_d.size());
  return out;
}

// --------------------------------------------------------------------------
// Stage 3: cleanup with large primes
// --------------------------------------------------------------------------

struct Stage3Result {
  std::vector<std::pair<uint64_t, int64_t>> pairs_primed;        // (q, leftover)
  std::vector<std::pair<uint64_t, int64_t>> pairs_doubleprimed;  // (q, leftover)
};

// D' = class primes in (x/2, 3x/4], D'' = (3x/4, x]. First-fit pairing in
// ascending order of both lists; any injection works, this one is
// deterministic.
inline Stage3Result stage3_cleanup(const SieveParams& p,
                                   const std::vector<int64_t>& leftovers_primed,
                                   const std::vector<int64_t>& leftovers_doubleprimed) {
  std::vector<uint64_t> dp, dpp;
  for (uint64_t q : sieve_primes_q(0, p.x, p.pc())) {
    if (2 * q > p.x && 4 * q <= 3 * p.x) dp.push_back(q);
    else if (4 * q > 3 * p.x && q <= p.x) dpp.push_back(q);
  }
  if (leftovers_primed.size() > dp.size() || leftovers_doubleprimed.size() > dpp.size()) {
    size_t def1 = leftovers_primed.size() > dp.size() ? leftovers_primed.size() - dp.size() : 0;
    size_t def2 = leftovers_doubleprimed.size() > dpp.size()
                      ? leftovers_doubleprimed.size() - dpp.size() : 0;
    throw ConstructInfeasible(
        "stage3", "stage3: not enough large primes (deficit primed=" + std::to_string(def1) +
                      ", doubleprimed=" + std::to_string(def2) + ")");
  }
  Stage3Result out;
  for (size_t i = 0; i < leftovers_primed.size(); ++i)
    out.pairs_primed.emplace_back(dp[i], leftovers_primed[i]);
  for (size_t i = 0; i < leftovers_doubleprimed.size(); ++i)
    out.pairs_doubleprimed.emplace_back(dpp[i], leftovers_doubleprimed[i]);
  return out;
}

// --------------------------------------------------------------------------
// Assembly and verification
// --------------------------------------------------------------------------

struct CoverCertificate {
  // parameters echoed for self-contained verification
  int64_t a = 2;
  int64_t b = 1;
  double delta = 0.05;
  uint64_t x = 0, y = 0, z = 0;
  double K = 2.0, M = 6.5, xi = 1.5, epsilon = 0.05;
  mpz_class N = 0;
  uint64_t seed = 0;
  Mode mode = Mode::Free;
  Strategy strategy = Strategy::Greedy;

  // stage payloads (residues, translates, pairings)
  std::vector<std::pair<uint64_t, uint64_t>> stage1_residues;       // (q, d mod q)
  std::vector<std::pair<uint64_t, int64_t>> stage2_primed;          // (q, n_q)
  std::vector<std::pair<uint64_t, int64_t>> stage2_doubleprimed;    // (q, n_q)
  std::vector<std::pair<uint64_t, int64_t>> stage3_primed;          // (q, leftover)
  std::vector<std::pair<uint64_t, int64_t>> stage3_doubleprimed;    // (q, leftover)

  mpz_class d = 0, P = 1;  // combined CRT value over all constrained primes
  mpz_class d1 = 0, d2 = 0;
  mpz_class i1_start = 0, i1_end = 0, i2_start = 0, i2_end = 0;
  mpz_class n1 = 0, n2 = 0;
  std::vector<std::pair<mpz_class, uint64_t>> witnesses;  // (n, q)

  // flags
  bool range_relaxed = false;
  bool rebalanced_sides = false;
  bool grid_empty = false;
  bool h_range_satisfied = false;
  bool px_le_cbrt_N = false;
  bool intervals_overlap = false;
  double leftover_fraction_primed = 0.0;
  double leftover_fraction_doubleprimed = 0.0;
  mpz_class centered_m = 0;
};

namespace detail {

inline mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline uint64_t mod_residue(const mpz_class& v, uint64_t q) {
  mpz_class m = v % static_cast<unsigned long>(q);
  if (m < 0) m += static_cast<unsigned long>(q);
  return m.get_ui();
}

}  // namespace detail

// CRT-combines the three stages, lifts d to d1 near [-0.3N, -0.2N], derives
// the two intervals, and produces a witness prime for every element.
inline CoverCertificate assemble(const SieveParams& p, const Stage1Result& s1,
                                 const CoverAssignment& cover, const Stage3Result& s3,
                                 Strategy strategy) {
  CoverCertificate cert;
  cert.a = p.a; cert.b = p.b; cert.delta = p.delta;
  cert.x = p.x; cert.y = p.y; cert.z = p.z;
  cert.K = p.K; cert.M = p.M; cert.xi = p.xi; cert.epsilon = p.epsilon;
  cert.N = p.N; cert.seed = p.seed; cert.mode = p.mode;
  cert.strategy = strategy;
  cert.grid_empty = p.grid.empty();
  cert.h_range_satisfied = p.grid.h_range_satisfied;
  cert.rebalanced_sides = cover.rebalanced;
  cert.leftover_fraction_primed = cover.leftover_fraction_primed;
  cert.leftover_fraction_doubleprimed = cover.leftover_fraction_doubleprimed;

  std::vector<std::pair<uint64_t, uint64_t>> rp;  // (residue, prime)
  for (const auto& [q, r] : s1.rs.residues) {
    cert.stage1_residues.emplace_back(q, r);
    rp.emplace_back(r, q);
  }
  for (const CoverEntry& e : cover.entries) {
    if (e.side == Side::Primed) {
      cert.stage2_primed.emplace_back(e.q, e.n_q);
      rp.emplace_back(static_cast<uint64_t>(mod_i64(e.n_q, e.q)), e.q);
    } else {
      cert.stage2_doubleprimed.emplace_back(e.q, e.n_q);
      mpz_class r = -p.N - e.n_q;
      rp.emplace_back(detail::mod_residue(r, e.q), e.q);
    }
  }
  for (const auto& [q, s] : s3.pairs_primed) {
    cert.stage3_primed.emplace_back(q, s);
    rp.emplace_back(static_cast<uint64_t>(mod_i64(s, q)), q);
  }
  for (const auto& [q, s] : s3.pairs_doubleprimed) {
    cert.stage3_doubleprimed.emplace_back(q, s);
    mpz_class r = -p.N - s;
    rp.emplace_back(detail::mod_residue(r, q), q);
  }

  CrtValue combined = crt_combine(rp);
  cert.d = combined.d;
  cert.P = combined.P;

  // lift: d1 == d (mod P) with d1 in [-0.3N, -0.2N] when the window holds a
  // representative (P <= N/10); otherwise the representative nearest -N/4.
  mpz_class lo = detail::ceil_div(-3 * p.N, 10);
  mpz_class hi = detail::floor_div(-2 * p.N, 10);
  mpz_class k = detail::ceil_div(combined.d - hi, combined.P);
  mpz_class d1 = combined.d - k * combined.P;
  if (d1 < lo) {
    mpz_class target = -p.N / 4;
    mpz_class half = combined.P / 2;
    k = detail::floor_div(combined.d - target + half, combined.P);
    d1 = combined.d - k * combined.P;
    cert.range_relaxed = true;
  }
  cert.d1 = d1;
  cert.d2 = -d1;

  int64_t y = static_cast<int64_t>(p.y);
  cert.i1_start = cert.d2 + 1;
  cert.i1_end = cert.d2 + y;
  cert.i2_start = p.N - cert.d2 - y;
  cert.i2_end = p.N - cert.d2 - 1;
  cert.n1 = cert.d2 + y / 2;
  cert.n2 = p.N - cert.d2 - y / 2;

  if (cert.i1_start < 1 || cert.i1_end > p.N || cert.i2_start < 1 || cert.i2_end > p.N)
    throw ConstructInfeasible("assemble", "assemble: intervals fall outside [1, N]");
  cert.intervals_overlap = !(cert.i1_end < cert.i2_start || cert.i2_end < cert.i1_start);

  // witness scan over all class primes <= x
  std::vector<std::pair<uint64_t, uint64_t>> qc;
  for (uint64_t q : sieve_primes_q(0, p.x, p.pc()))
    qc.emplace_back(q, solve_cq(p.a, p.b, q));
  std::vector<std::string> holes;
  auto scan_interval = [&](const mpz_class& start, const mpz_class& end) {
    for (mpz_class n = start; n <= end; ++n) {
      bool found = false;
      for (const auto& [q, cq] : qc) {
        uint64_t r = detail::mod_residue(n, q);
        if (r == 0 || r == cq) {
          cert.witnesses.emplace_back(n, q);
          found = true;
          break;
        }
      }
      if (!found) holes.push_back(n.get_str());
    }
  };
  scan_interval(cert.i1_start, cert.i1_end);
  scan_interval(cert.i2_start, cert.i2_end);
  if (!holes.empty()) {
    std::string msg = "assemble: coverage hole at";
    for (const std::string& h : holes) msg += " " + h;
    throw std::logic_error(msg);
  }

  // diagnostics
  mpz_class px(1);
  for (const auto& [q, cq] : qc) px *= static_cast<unsigned long>(q);
  cert.px_le_cbrt_N = px * px * px <= p.N;
  mpz_class m1 = cert.n1 - cert.i1_start;
  mpz_class m2 = cert.i1_end - cert.n1;
  mpz_class m3 = cert.n2 - cert.i2_start;
  mpz_class m4 = cert.i2_end - cert.n2;
  cert.centered_m = std::min(std::min(m1, m2), std::min(m3, m4));
  return cert;
}

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(const std::string& what) {
    ok = false;
    violations.push_back(what);
  }
};

// Re-checks every certificate invariant from scratch: interval placement,
// n1 + n2 = N, witness primality/class/divisibility, and the pair_bad
// predicate recomputed through factorization-based membership. Nothing here
// trusts pipeline state.
inline VerifyReport verify_certificate(const CoverCertificate& cert) {
  VerifyReport report;
  PrimeClass pc = prime_class_for(cert.a, cert.b);

  if (cert.a <= 0) report.fail("a must be positive");
  if (cert.a > 0 && cert.b % cert.a == 0) report.fail("a divides b");
  if (cert.n1 + cert.n2 != cert.N) report.fail("n1 + n2 != N");

  int64_t y = static_cast<int64_t>(cert.y);
  if (cert.i1_end - cert.i1_start + 1 != y) report.fail("interval_1 length != y");
  if (cert.i2_end - cert.i2_start + 1 != y) report.fail("interval_2 length != y");
  if (cert.i1_start < 1 || cert.i1_end > cert.N) report.fail("interval_1 outside [1, N]");
  if (cert.i2_start < 1 || cert.i2_end > cert.N) report.fail("interval_2 outside [1, N]");
  if (cert.n1 < cert.i1_start || cert.n1 > cert.i1_end) report.fail("n1 outside interval_1");
  if (cert.n2 < cert.i2_start || cert.n2 > cert.i2_end) report.fail("n2 outside interval_2");

  std::map<mpz_class, uint64_t> wit;
  for (const auto& [n, q] : cert.witnesses) wit[n] = q;

  auto check_element = [&](const mpz_class& n) {
    auto it = wit.find(n);
    if (it == wit.end()) {
      report.fail("no witness for " + n.get_str());
      return;
    }
    uint64_t q = it->second;
    if (!is_prime_u64(q)) report.fail("witness " + std::to_string(q) + " is not prime");
    if (q % 4 != 3)
      report.fail("witness " + std::to_string(q) + " is not 3 mod 4 (at " + n.get_str() + ")");
    if (static_cast<int64_t>(q) <= pc.lower_exclusive)
      report.fail("witness " + std::to_string(q) + " not above a+|b|");
    if (q > cert.x) report.fail("witness " + std::to_string(q) + " exceeds x");
    mpz_class prod = n * (cert.a * n + cert.b);
    if (!mpz_divisible_ui_p(prod.get_mpz_t(), q))
      report.fail("witness " + std::to_string(q) + " does not divide n(an+b) at " + n.get_str());
    if (!pair_bad(n, cert.a, cert.b))
      report.fail("pair_bad fails at " + n.get_str());
  };
  for (mpz_class n = cert.i1_start; n <= cert.i1_end; ++n) check_element(n);
  for (mpz_class n = cert.i2_start; n <= cert.i2_end; ++n) check_element(n);
  return report;
}

struct PipelineResult {
  SieveParams params;
  Stage1Result stage1;
  CoverAssignment cover;
  Stage3Result stage3;
  CoverCertificate cert;
};

inline PipelineResult run_pipeline(const SieveParams& p, Strategy strategy,
                                   int stage1_retries = 64) {
  PipelineResult r;
  r.params = p;
  Rng rng(p.seed);
  r.stage1 = stage1_choose_d(p, rng, stage1_retries);
  r.cover = stage2_cover(p, r.stage1, strategy, rng);
  r.stage3 = stage3_cleanup(p, r.cover.leftovers_primed, r.cover.leftovers_doubleprimed);
  r.cert = assemble(p, r.stage1, r.cover, r.stage3, strategy);
  return r;
}

}  // namespace twosq

#endif  // TWOSQ_CONSTRUCT_HPP_
