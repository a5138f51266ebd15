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

#include <numeric>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "twosq/membership.hpp"
#include "twosq/rng.hpp"

using namespace twosq;

namespace {

// brute-force oracle: n = x^2 + y^2 with an optional coprimality constraint
bool two_square_rep(int64_t n, bool coprime) {
  if (n < 0) return false;
  for (int64_t x = 0; x * x <= n; ++x) {
    int64_t rest = n - x * x;
    int64_t y = static_cast<int64_t>(std::sqrt(static_cast<double>(rest)));
    while (y * y > rest) --y;
    while ((y + 1) * (y + 1) <= rest) ++y;
    if (y * y != rest) continue;
    if (!coprime) return true;
    if (std::gcd(x, y) == 1) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("is_in_R pinned examples") {
  CHECK(is_in_R(int64_t{1}));
  CHECK_FALSE(is_in_R(int64_t{4}));
  CHECK(is_in_R(int64_t{25}));
  CHECK_FALSE(is_in_R(int64_t{21}));
  CHECK_FALSE(is_in_R(int64_t{-5}));
  CHECK_FALSE(is_in_R(int64_t{0}));
  CHECK(is_in_R(int64_t{2}));
}

TEST_CASE("is_in_S pinned examples") {
  CHECK(is_in_S(int64_t{45}));
  CHECK_FALSE(is_in_S(int64_t{7}));
  CHECK(is_in_S(int64_t{0}));
  CHECK_FALSE(is_in_S(int64_t{-1}));
}

TEST_CASE("membership matches brute-force representations up to 20000") {
  for (int64_t n = 0; n <= 20000; ++n) {
    REQUIRE(is_in_R(n) == two_square_rep(n, true));
    REQUIRE(is_in_S(n) == two_square_rep(n, false));
  }
}

TEST_CASE("mpz overloads agree with int64 on a sample") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    int64_t n = static_cast<int64_t>(rng.below(1000000));
    CHECK(is_in_R(mpz_class(static_cast<long>(n))) == is_in_R(n));
    CHECK(is_in_S(mpz_class(static_cast<long>(n))) == is_in_S(n));
  }
}

TEST_CASE("pair_bad pinned examples") {
  CHECK(pair_bad(5, 2, 1));        // 11 is prime == 3 mod 4
  CHECK_FALSE(pair_bad(2, 2, 1));  // 2 and 5 both lie in R
  CHECK(pair_bad(13, 2, 1));       // 27 = 3^3
}

TEST_CASE("classify_range pinned windows") {
  MembershipMask m = classify_range(1, 10);
  std::vector<int64_t> r, s;
  for (int64_t n = 1; n <= 10; ++n) {
    if (m.r_at(n)) r.push_back(n);
    if (m.s_at(n)) s.push_back(n);
  }
  CHECK(r == std::vector<int64_t>{1, 2, 5, 10});
  CHECK(s == std::vector<int64_t>{1, 2, 4, 5, 8, 9, 10});

  MembershipMask single = classify_range(49, 49);
  CHECK_FALSE(single.r_at(49));

  CHECK_THROWS_AS(classify_range(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(classify_range(10, 5), std::invalid_argument);
  CHECK_THROWS_AS(classify_range(1, int64_t{1} << 40), std::invalid_argument);
}

TEST_CASE("classify_range agrees with pointwise membership on random windows") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    int64_t lo = 1 + static_cast<int64_t>(rng.below(1000000000ull - 2000));
    int64_t hi = lo + 1 + static_cast<int64_t>(rng.below(1000));
    MembershipMask m = classify_range(lo, hi);
    for (int64_t n = lo; n <= hi; ++n) {
      REQUIRE(m.r_at(n) == is_in_R(n));
      REQUIRE(m.s_at(n) == is_in_S(n));
    }
  }
}

TEST_CASE("masks always satisfy R subset of S") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    int64_t lo = 1 + static_cast<int64_t>(rng.below(100000000));
    MembershipMask m = classify_range(lo, lo + 2048);
    for (size_t i = 0; i < m.in_R.size(); ++i)
      if (m.in_R[i]) REQUIRE(m.in_S[i]);
  }
}

TEST_CASE("max_gap pinned examples") {
  GapReport r30 = max_gap(GapQuery::Set::R, 30);
  CHECK(r30.max_gap == 8);
  CHECK(r30.argmax_element == 17);

  GapReport r50 = max_gap(GapQuery::Set::R, 50);
  CHECK(r50.max_gap == 9);
  CHECK(r50.argmax_element == 41);

  GapReport s10 = max_gap(GapQuery::Set::S, 10);
  CHECK(s10.max_gap == 3);
  CHECK(s10.argmax_element == 5);

  CHECK_THROWS_AS(max_gap(GapQuery::Set::R, 1), std::invalid_argument);
}

TEST_CASE("max_gap is nondecreasing in N") {
  int64_t prev = 0;
  for (int64_t N : {1000, 10000, 100000}) {
    GapReport r = max_gap(GapQuery::Set::R, N);
    CHECK(r.max_gap >= prev);
    prev = r.max_gap;
  }
}

TEST_CASE("max_gap result is independent of thread count") {
  GapReport serial = max_gap(GapQuery{GapQuery::Set::R}, 50000, 1);
  GapReport parallel = max_gap(GapQuery{GapQuery::Set::R}, 50000, 4, 4096);
  CHECK(serial.max_gap == parallel.max_gap);
  CHECK(serial.argmax_element == parallel.argmax_element);
  CHECK(serial.gap_table == parallel.gap_table);
}

TEST_CASE("pair_bad-complement gaps") {
  // members: n with both n and 2n+1 in R; starts 1 (3 in R), 2 (5 in R), ...
  GapReport r = max_gap(GapQuery{GapQuery::Set::PairGood, 2, 1}, 100);
  for (const auto& [member, gap] : r.gap_table) {
    CHECK(is_in_R(member));
    CHECK(is_in_R(2 * member + 1));
    CHECK_FALSE(pair_bad(member, 2, 1));
  }
  CHECK(r.max_gap >= 1);
}

TEST_CASE("gap CSV emission carries the mandatory header") {
  GapReport r = max_gap(GapQuery::Set::R, 30);
  std::ostringstream oss;
  write_gap_csv(oss, r);
  std::string text = oss.str();
  CHECK(text.rfind("member,next,gap\n", 0) == 0);
  CHECK(text.find("17,25,8") != std::string::npos);
}
