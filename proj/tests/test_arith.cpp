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

#include <catch2/catch_amalgamated.hpp>

#include "twosq/arith.hpp"
#include "twosq/rng.hpp"

using namespace twosq;

TEST_CASE("primes_up_to enumerates correctly") {
  CHECK(primes_up_to(10) == std::vector<uint64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(2) == std::vector<uint64_t>{2});
  CHECK(primes_up_to(30) == std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(0).empty());
}

TEST_CASE("sieve_primes_q filters by class and range") {
  PrimeClass pc{3};  // a=2, b=1
  CHECK(sieve_primes_q(3, 40, pc) == std::vector<uint64_t>{7, 11, 19, 23, 31});
  CHECK(sieve_primes_q(0, 3, pc).empty());
  CHECK(sieve_primes_q(40, 60, pc) == std::vector<uint64_t>{43, 47, 59});
}

TEST_CASE("sieve_primes_q is a filtered subset of primes_up_to") {
  PrimeClass pc{5};
  auto qs = sieve_primes_q(0, 500, pc);
  auto all = primes_up_to(500);
  for (uint64_t q : qs) {
    CHECK(std::find(all.begin(), all.end(), q) != all.end());
    CHECK(q % 4 == 3);
    CHECK(q > 5);
  }
  // nothing of the class missed
  size_t expected = 0;
  for (uint64_t p : all)
    if (p % 4 == 3 && p > 5) ++expected;
  CHECK(qs.size() == expected);
}

TEST_CASE("solve_cq pinned examples") {
  CHECK(solve_cq(2, 1, 7) == 3);
  CHECK(solve_cq(2, 1, 11) == 5);
  CHECK(solve_cq(3, 2, 7) == 4);
  CHECK_THROWS_AS(solve_cq(7, 1, 7), std::invalid_argument);
  CHECK_THROWS_AS(solve_cq(2, 7, 7), std::invalid_argument);
}

TEST_CASE("solve_cq satisfies its congruence across the class grid") {
  for (uint64_t q : sieve_primes_q(0, 10000, PrimeClass{0})) {
    for (int64_t a = 1; a <= 12; ++a) {
      for (int64_t b = -12; b <= 12; ++b) {
        if (a % static_cast<int64_t>(q) == 0 || b % static_cast<int64_t>(q) == 0) continue;
        uint64_t c = solve_cq(a, b, q);
        REQUIRE(c >= 1);
        REQUIRE(c <= q - 1);
        REQUIRE(mod_i64(a * static_cast<int64_t>(c) + b, q) == 0);
      }
    }
  }
}

TEST_CASE("factorize pinned examples") {
  CHECK(factorize(1).empty());
  CHECK(factorize(360) ==
        std::vector<std::pair<uint64_t, int>>{{2, 3}, {3, 2}, {5, 1}});
  CHECK(factorize(97) == std::vector<std::pair<uint64_t, int>>{{97, 1}});
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize recomposes every n up to 1e6") {
  for (uint64_t n = 1; n <= 1000000; ++n) {
    uint64_t prod = 1;
    for (auto [p, e] : factorize(n))
      for (int i = 0; i < e; ++i) prod *= p;
    REQUIRE(prod == n);
  }
}

TEST_CASE("factorize handles large semiprimes") {
  uint64_t p = 1000000007, q = 998244353;
  auto f = factorize(p * q);
  REQUIRE(f.size() == 2);
  CHECK(f[0].first == q);
  CHECK(f[1].first == p);
}

TEST_CASE("factorize_mpz matches u64 route and goes past 64 bits") {
  mpz_class n("12345678901234567890123456");
  mpz_class prod = 1;
  for (const auto& [p, e] : factorize_mpz(n))
    for (int i = 0; i < e; ++i) prod *= p;
  CHECK(prod == n);
  auto small = factorize_mpz(mpz_class(360));
  REQUIRE(small.size() == 3);
  CHECK(small[0].first == 2);
  CHECK(small[0].second == 3);
}

TEST_CASE("crt_combine pinned examples") {
  CrtValue v = crt_combine({{1, 3}, {2, 5}});
  CHECK(v.d == 7);
  CHECK(v.P == 15);
  CrtValue single = crt_combine({{0, 7}});
  CHECK(single.d == 0);
  CHECK(single.P == 7);
  CrtValue triple = crt_combine({{3, 7}, {5, 11}, {1, 19}});
  CHECK(triple.d == 115);
  CHECK(triple.P == 1463);
}

TEST_CASE("crt_combine rejects bad input") {
  CHECK_THROWS_AS(crt_combine({{1, 7}, {2, 7}}), std::invalid_argument);
  CHECK_THROWS_AS(crt_combine({{7, 7}}), std::invalid_argument);
}

TEST_CASE("crt_combine round-trips every residue") {
  Rng rng(12345);
  auto primes = sieve_primes_q(0, 2000, PrimeClass{3});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<uint64_t, uint64_t>> rp;
    size_t count = 1 + rng.below(8);
    std::vector<uint64_t> chosen;
    while (chosen.size() < count) {
      uint64_t q = primes[rng.below(primes.size())];
      if (std::find(chosen.begin(), chosen.end(), q) == chosen.end()) chosen.push_back(q);
    }
    for (uint64_t q : chosen) rp.emplace_back(rng.below(q), q);
    CrtValue v = crt_combine(rp);
    REQUIRE(v.d >= 0);
    REQUIRE(v.d < v.P);
    for (const auto& [r, q] : rp) {
      REQUIRE(mod_mpz(v.d, q) == r);
    }
  }
}

TEST_CASE("is_prime_u64 agrees with trial division") {
  auto table = primes_up_to(10000);
  size_t idx = 0;
  for (uint64_t n = 0; n <= 10000; ++n) {
    bool expected = idx < table.size() && table[idx] == n;
    if (expected) ++idx;
    REQUIRE(is_prime_u64(n) == expected);
  }
  CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
  CHECK_FALSE(is_prime_u64(18446744073709551555ull));
}
