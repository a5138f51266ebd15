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

#ifndef TWOSQ_MEMBERSHIP_HPP_
#define TWOSQ_MEMBERSHIP_HPP_

#include <cmath>
#include <cstdint>
#include <future>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twosq/arith.hpp"

namespace twosq {

// R: sums of two coprime squares. n is in R iff n = 2^a * m with a in {0,1}
// and no prime == 3 (mod 4) divides m. Nonpositive n classify as outside.
inline bool is_in_R(int64_t n) {
  if (n < 1) return false;
  uint64_t u = static_cast<uint64_t>(n);
  if (u % 4 == 0) return false;
  if (u % 2 == 0) u /= 2;
  for (auto [p, e] : factorize(u)) {
    if (p % 4 == 3) return false;
  }
  return true;
}

// S: sums of two squares. Every prime == 3 (mod 4) must divide n to an even
// power. 0 = 0^2 + 0^2 belongs; negatives do not.
inline bool is_in_S(int64_t n) {
  if (n < 0) return false;
  if (n == 0) return true;
  for (auto [p, e] : factorize(static_cast<uint64_t>(n))) {
    if (p % 4 == 3 && e % 2 != 0) return false;
  }
  return true;
}

inline bool is_in_R(const mpz_class& n) {
  if (n < 1) return false;
  mpz_class u = n;
  if (mpz_divisible_ui_p(u.get_mpz_t(), 4)) return false;
  if (mpz_divisible_ui_p(u.get_mpz_t(), 2)) u /= 2;
  for (const auto& [p, e] : factorize_mpz(u)) {
    if (mod_mpz(p, 4) == 3) return false;
  }
  return true;
}

inline bool is_in_S(const mpz_class& n) {
  if (n < 0) return false;
  if (n == 0) return true;
  for (const auto& [p, e] : factorize_mpz(n)) {
    if (mod_mpz(p, 4) == 3 && e % 2 != 0) return false;
  }
  return true;
}

// Theorem-1 predicate: at least one of n, a*n+b lies outside R.
// a|b is excluded by the caller's parameter validation; it guarantees
// a*n+b != 0.
inline bool pair_bad(int64_t n, int64_t a, int64_t b) {
  return !is_in_R(n) || !is_in_R(a * n + b);
}

inline bool pair_bad(const mpz_class& n, int64_t a, int64_t b) {
  if (!is_in_R(n)) return true;
  mpz_class lin = a * n + b;
  return !is_in_R(lin);
}

// Per-offset membership bits for a window [window_lo, window_hi].
struct MembershipMask {
  int64_t window_lo = 0;
  int64_t window_hi = 0;
  std::vector<bool> in_R;
  std::vector<bool> in_S;

  bool r_at(int64_t n) const { return in_R[static_cast<size_t>(n - window_lo)]; }
  bool s_at(int64_t n) const { return in_S[static_cast<size_t>(n - window_lo)]; }
};

inline constexpr int64_t kDefaultSegment = int64_t{1} << 20;

// Segmented classification of [lo, hi]. Sieves powers of 2 and of class-3
// primes <= sqrt(hi) out of each value; what remains is a product of
// primes == 1 (mod 4) times at most one prime == 3 (mod 4) exceeding
// sqrt(hi), which is present iff the remainder is == 3 (mod 4).
inline MembershipMask classify_range(int64_t lo, int64_t hi,
                                     int64_t segment_limit = kDefaultSegment) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("classify_range: need 1 <= lo <= hi");
  if (hi - lo + 1 > segment_limit)
    throw std::invalid_argument("classify_range: window exceeds segment limit");

  const size_t w = static_cast<size_t>(hi - lo + 1);
  MembershipMask mask{lo, hi, std::vector<bool>(w, true), std::vector<bool>(w, true)};

  std::vector<uint64_t> rem(w);
  for (size_t i = 0; i < w; ++i) {
    uint64_t n = static_cast<uint64_t>(lo) + i;
    if (n % 4 == 0) mask.in_R[i] = false;
    while (n % 2 == 0) n /= 2;
    rem[i] = n;
  }

  uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(hi))) + 2;
  for (uint64_t p : primes_up_to(root)) {
    if (p % 4 != 3) continue;
    int64_t first = ((lo + static_cast<int64_t>(p) - 1) / static_cast<int64_t>(p)) *
                    static_cast<int64_t>(p);
    for (int64_t m = first; m <= hi; m += static_cast<int64_t>(p)) {
      size_t i = static_cast<size_t>(m - lo);
      mask.in_R[i] = false;
      int e = 0;
      while (rem[i] % p == 0) { rem[i] /= p; ++e; }
      if (e % 2 != 0) mask.in_S[i] = false;
    }
  }
  // leftover single large class-3 prime
  for (size_t i = 0; i < w; ++i) {
    if (rem[i] > 1 && rem[i] % 4 == 3) {
      mask.in_R[i] = false;
      mask.in_S[i] = false;
    }
  }
  return mask;
}

struct GapReport {
  int64_t limit_N = 0;
  int64_t max_gap = 0;
  int64_t argmax_element = 0;
  std::vector<std::pair<int64_t, int64_t>> gap_table;  // (member, next - member)
};

struct GapQuery {
  enum class Set { R, S, PairGood } set = Set::R;
  // PairGood scans the complement of pair_bad: n with both n and a*n+b in R.
  int64_t a = 2;
  int64_t b = 1;
};

namespace detail {

inline std::vector<bool> members_in_window(const GapQuery& query, int64_t lo, int64_t hi) {
  MembershipMask mask = classify_range(lo, hi);
  size_t w = static_cast<size_t>(hi - lo + 1);
  std::vector<bool> member(w);
  switch (query.set) {
    case GapQuery::Set::R:
      member = mask.in_R;
      break;
    case GapQuery::Set::S:
      member = mask.in_S;
      break;
    case GapQuery::Set::PairGood: {
      MembershipMask lin = classify_range(query.a * lo + query.b, query.a * hi + query.b);
      for (size_t i = 0; i < w; ++i) {
        int64_t n = lo + static_cast<int64_t>(i);
        member[i] = mask.in_R[i] && lin.r_at(query.a * n + query.b);
      }
      break;
    }
  }
  return member;
}

}  // namespace detail

// G(N) = max over members a_n <= N of (a_{n+1} - a_n). The last member <= N
// is paired with its true successor, found by scanning past N (bounded
// lookahead, then error). Windows classify independently (in parallel when
// threads > 1) and merge in order, so the report does not depend on the
// thread count.
inline GapReport max_gap(const GapQuery& query, int64_t N, int threads = 1,
                         int64_t segment = kDefaultSegment) {
  if (N < 2) throw std::invalid_argument("max_gap: N must be >= 2");
  if (threads < 1) threads = 1;
  GapReport report;
  report.limit_N = N;

  double logN = std::log(static_cast<double>(N));
  int64_t lookahead = static_cast<int64_t>(10.0 * logN * logN) + 64;
  int64_t end_limit = N + lookahead;

  int64_t prev = -1;
  bool done = false;
  for (int64_t base = 1; base <= end_limit && !done; base += segment * threads) {
    std::vector<std::pair<int64_t, int64_t>> windows;
    for (int t = 0; t < threads; ++t) {
      int64_t lo = base + static_cast<int64_t>(t) * segment;
      if (lo > end_limit) break;
      windows.emplace_back(lo, std::min(lo + segment - 1, end_limit));
    }
    std::vector<std::vector<bool>> batch(windows.size());
    if (windows.size() > 1) {
      std::vector<std::future<std::vector<bool>>> futs;
      for (const auto& [lo, hi] : windows)
        futs.push_back(std::async(std::launch::async, [&query, lo = lo, hi = hi] {
          return detail::members_in_window(query, lo, hi);
        }));
      for (size_t i = 0; i < futs.size(); ++i) batch[i] = futs[i].get();
    } else {
      for (size_t i = 0; i < windows.size(); ++i)
        batch[i] = detail::members_in_window(query, windows[i].first, windows[i].second);
    }
    for (size_t w = 0; w < windows.size() && !done; ++w) {
      auto [lo, hi] = windows[w];
      for (int64_t n = lo; n <= hi; ++n) {
        if (!batch[w][static_cast<size_t>(n - lo)]) continue;
        if (prev >= 1 && prev <= N) {
          int64_t g = n - prev;
          report.gap_table.emplace_back(prev, g);
          if (g > report.max_gap) {
            report.max_gap = g;
            report.argmax_element = prev;
          }
        }
        prev = n;
        if (n > N) { done = true; break; }
      }
    }
  }
  if (report.gap_table.empty())
    throw std::runtime_error("max_gap: no members found below N");
  if (prev <= N)
    throw std::runtime_error("max_gap: successor of last member not found within lookahead");
  return report;
}

inline GapReport max_gap(GapQuery::Set set, int64_t N) { return max_gap(GapQuery{set}, N); }

// CSV format consumed by downstream tooling: header mandatory.
inline void write_gap_csv(std::ostream& os, const GapReport& report) {
  os << "member,next,gap\n";
  for (const auto& [member, gap] : report.gap_table)
    os << member << ',' << member + gap << ',' << gap << '\n';
}

}  // namespace twosq

#endif  // TWOSQ_MEMBERSHIP_HPP_
