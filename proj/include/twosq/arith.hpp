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

#ifndef TWOSQ_ARITH_HPP_
#define TWOSQ_ARITH_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace twosq {

// The sieve only ever touches primes q with q > a+|b| and q == 3 (mod 4).
struct PrimeClass {
  int64_t lower_exclusive = 0;

  bool contains(uint64_t q) const {
    return q % 4 == 3 && static_cast<int64_t>(q) > lower_exclusive;
  }
};

inline PrimeClass prime_class_for(int64_t a, int64_t b) {
  return PrimeClass{a + (b < 0 ? -b : b)};
}

// All primes <= limit, ascending. limit < 2 yields an empty list.
inline std::vector<uint64_t> primes_up_to(uint64_t limit) {
  std::vector<uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (uint64_t p = 2; p * p <= limit; ++p) {
    if (composite[p]) continue;
    for (uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
  }
  for (uint64_t n = 2; n <= limit; ++n)
    if (!composite[n]) out.push_back(n);
  return out;
}

// Class primes in (range_lo, range_hi].
inline std::vector<uint64_t> sieve_primes_q(uint64_t range_lo, uint64_t range_hi,
                                            PrimeClass pc) {
  if (range_lo > range_hi) throw std::invalid_argument("sieve_primes_q: range_lo > range_hi");
  std::vector<uint64_t> out;
  for (uint64_t q : primes_up_to(range_hi)) {
    if (q > range_lo && pc.contains(q)) out.push_back(q);
  }
  return out;
}

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = m > 1 ? 1 : 0;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho. n must be composite, odd, > 1.
inline uint64_t pollard_brent_u64(uint64_t n) {
  if (n % 2 == 0) return 2;
  uint64_t c = 1;
  while (true) {
    uint64_t x = 2, y = 2, d = 1;
    uint64_t power = 1, lam = 0;
    auto step = [&](uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    while (d == 1) {
      if (power == lam) { x = y; power <<= 1; lam = 0; }
      y = step(y);
      ++lam;
      uint64_t diff = x > y ? x - y : y - x;
      d = std::gcd(diff, n);
    }
    if (d != n) return d;
    ++c;  // cycle degenerated, retry with a different polynomial
  }
}

inline void factor_rec_u64(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) { out.push_back(n); return; }
  uint64_t d = pollard_brent_u64(n);
  factor_rec_u64(d, out);
  factor_rec_u64(n / d, out);
}

inline const std::vector<uint64_t>& small_primes() {
  static const std::vector<uint64_t> table = primes_up_to(100000);
  return table;
}

}  // namespace detail

// Prime factorization of n >= 1 as (prime, exponent) pairs, primes ascending.
inline std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  std::vector<std::pair<uint64_t, int>> out;
  if (n == 1) return out;
  for (uint64_t p : detail::small_primes()) {
    if (p * p > n) break;
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    out.emplace_back(p, e);
  }
  if (n > 1) {
    std::vector<uint64_t> rest;
    detail::factor_rec_u64(n, rest);
    std::sort(rest.begin(), rest.end());
    for (size_t i = 0; i < rest.size();) {
      size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      out.emplace_back(rest[i], static_cast<int>(j - i));
      i = j;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Factorization over mpz, for certificate verification where values exceed
// 64 bits. Primality of large cofactors is certified probabilistically
// (mpz_probab_prime_p, 40 rounds).
inline std::vector<std::pair<mpz_class, int>> factorize_mpz(const mpz_class& n_in) {
  if (n_in <= 0) throw std::invalid_argument("factorize_mpz: n must be positive");
  mpz_class n = n_in;
  std::vector<std::pair<mpz_class, int>> out;
  if (n == 1) return out;
  for (uint64_t p : detail::small_primes()) {
    if (mpz_cmp_ui(n.get_mpz_t(), 1) == 0) break;
    if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) continue;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    out.emplace_back(mpz_class(p), e);
  }
  if (n > 1) {
    if (n.fits_ulong_p()) {
      for (auto [p, e] : factorize(n.get_ui())) out.emplace_back(mpz_class(p), e);
    } else {
      // rho with mpz arithmetic
      std::vector<mpz_class> stack{n}, primes;
      while (!stack.empty()) {
        mpz_class m = stack.back();
        stack.pop_back();
        if (m.fits_ulong_p()) {
          std::vector<uint64_t> fs;
          detail::factor_rec_u64(m.get_ui(), fs);
          for (uint64_t f : fs) primes.emplace_back(f);
          continue;
        }
        if (mpz_probab_prime_p(m.get_mpz_t(), 40)) { primes.push_back(m); continue; }
        mpz_class x = 2, y = 2, d = 1, c = 1, diff;
        while (d == 1 || d == m) {
          d = 1;
          x = 2; y = 2;
          while (d == 1) {
            x = (x * x + c) % m;
            y = (y * y + c) % m;
            y = (y * y + c) % m;
            diff = x > y ? x - y : y - x;
            if (diff == 0) { d = m; break; }
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
          }
          if (d == m) c += 1;
        }
        stack.push_back(d);
        stack.push_back(m / d);
      }
      std::sort(primes.begin(), primes.end());
      for (size_t i = 0; i < primes.size();) {
        size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        out.emplace_back(primes[i], static_cast<int>(j - i));
        i = j;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// The unique c in [1, q-1] with a*c + b == 0 (mod q). Requires q prime with
// q coprime to both a and b (guaranteed by q > a+|b|).
inline uint64_t solve_cq(int64_t a, int64_t b, uint64_t q) {
  if (q < 2) throw std::invalid_argument("solve_cq: q must be prime");
  int64_t am = a % static_cast<int64_t>(q);
  int64_t bm = b % static_cast<int64_t>(q);
  if (am < 0) am += static_cast<int64_t>(q);
  if (bm < 0) bm += static_cast<int64_t>(q);
  if (am == 0 || bm == 0) throw std::invalid_argument("solve_cq: q divides a or b");
  // a^{-1} mod q via Fermat
  uint64_t inv = detail::powmod_u64(static_cast<uint64_t>(am), q - 2, q);
  uint64_t c = detail::mulmod_u64(q - static_cast<uint64_t>(bm), inv, q);
  return c;  // nonzero since q does not divide b
}

// A compatible system of residues with its CRT-combined value.
// Invariants: primes distinct, 0 <= residue < prime, d mod q == residue,
// 0 <= d < P = product of the primes.
struct CrtValue {
  std::vector<std::pair<uint64_t, uint64_t>> residues;  // (prime, residue)
  mpz_class d = 0;
  mpz_class P = 1;

  bool empty() const { return residues.empty(); }

  uint64_t residue_of(uint64_t q) const {
    for (const auto& [p, r] : residues)
      if (p == q) return r;
    throw std::out_of_range("CrtValue: prime not present");
  }
};

using ResidueSystem = CrtValue;

// Incremental CRT fold: list of (residue, prime) -> combined value.
inline CrtValue crt_combine(const std::vector<std::pair<uint64_t, uint64_t>>& residue_prime) {
  CrtValue out;
  for (const auto& [r, q] : residue_prime) {
    if (q < 2) throw std::invalid_argument("crt_combine: modulus must be a prime >= 2");
    if (r >= q) throw std::invalid_argument("crt_combine: residue out of range");
    for (const auto& [p, _] : out.residues)
      if (p == q) throw std::invalid_argument("crt_combine: duplicate prime");
    // solve d' == d (mod P), d' == r (mod q): d' = d + P * t, t == (r-d)/P (mod q)
    mpz_class pmod = out.P % q;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), pmod.get_mpz_t(), mpz_class(q).get_mpz_t()) == 0)
      throw std::invalid_argument("crt_combine: moduli not coprime");
    mpz_class t = (mpz_class(r) - out.d % q + q) * inv % q;
    out.d += out.P * t;
    out.P *= q;
    out.d %= out.P;
    if (out.d < 0) out.d += out.P;
    out.residues.emplace_back(q, r);
  }
  return out;
}

// Merge systems over pairwise-disjoint prime sets.
inline CrtValue crt_merge(const std::vector<const CrtValue*>& systems) {
  std::vector<std::pair<uint64_t, uint64_t>> rp;
  for (const CrtValue* s : systems)
    for (const auto& [q, r] : s->residues) rp.emplace_back(r, q);
  return crt_combine(rp);
}

inline int64_t mod_i64(int64_t v, uint64_t q) {
  int64_t m = v % static_cast<int64_t>(q);
  return m < 0 ? m + static_cast<int64_t>(q) : m;
}

inline uint64_t mod_mpz(const mpz_class& v, uint64_t q) {
  mpz_class m = v % static_cast<unsigned long>(q);
  if (m < 0) m += static_cast<unsigned long>(q);
  return m.get_ui();
}

}  // namespace twosq

#endif  // TWOSQ_ARITH_HPP_
