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

#ifndef TWOSQ_RNG_HPP_
#define TWOSQ_RNG_HPP_

#include <cstdint>
#include <random>

namespace twosq {

// Seeded generator with a self-contained bounded-draw so results do not
// depend on the standard library's distribution internals. mt19937_64 output
// is pinned by the standard, which makes certificates reproducible across
// toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // uniform in [0, bound), rejection sampled
  uint64_t below(uint64_t bound) {
    if (bound == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do { v = gen_(); } while (v >= limit);
    return v % bound;
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace twosq

#endif  // TWOSQ_RNG_HPP_
