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

#ifndef TWOSQ_HP_HPP_
#define TWOSQ_HP_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <mpfr.h>

namespace twosq::hp {

// Thin RAII value type over mpfr_t. 256 bits of mantissa gives ~77 decimal
// digits, comfortably past the 60-digit requirement of the admissibility
// margin check.
inline constexpr mpfr_prec_t kDefaultPrec = 256;

class Real {
 public:
  explicit Real(mpfr_prec_t prec = kDefaultPrec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(double x, mpfr_prec_t prec = kDefaultPrec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long num, long den, mpfr_prec_t prec = kDefaultPrec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, num, MPFR_RNDN);
    mpfr_div_si(v_, v_, den, MPFR_RNDN);
  }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real& operator=(const Real& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }

  std::string str(int digits = 30) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  friend Real operator+(const Real& a, const Real& b) {
    Real r(a.prec()); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r(a.prec()); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r(a.prec()); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r(a.prec()); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }

  friend Real log(const Real& a) {
    Real r(a.prec()); mpfr_log(r.v_, a.v_, MPFR_RNDN); return r;
  }
  friend Real exp(const Real& a) {
    Real r(a.prec()); mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r;
  }
  friend Real abs(const Real& a) {
    Real r(a.prec()); mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r;
  }

 private:
  mpfr_t v_;
};

// 6 * 10^(2 delta) / log(1/(2 delta)) at full working precision.
inline Real f_rho(const Real& delta) {
  Real two(2.0, delta.prec());
  Real ten(10.0, delta.prec());
  Real six(6.0, delta.prec());
  Real one(1.0, delta.prec());
  Real num = six * exp(two * delta * log(ten));
  Real den = log(one / (two * delta));
  return num / den;
}

// Unique delta in (0, 1/2) with f_rho(delta) == rho, located by bisection
// until the bracket's image under f_rho is narrower than tol.
inline Real compute_C(const Real& rho, const Real& tol, mpfr_prec_t prec = kDefaultPrec) {
  if (rho.sign() <= 0) throw std::domain_error("compute_C: rho must be positive");
  Real lo(1, 1000000000L, prec);   // 1e-9
  Real hi(0.5, prec);
  hi = hi - Real(1, 1000000000000L, prec);
  while (!(f_rho(lo) < rho)) {
    lo = lo / Real(2.0, prec);
    if (lo.to_double() < 1e-300) throw std::domain_error("compute_C: no admissible delta");
  }
  for (int it = 0; it < 4000; ++it) {
    if (f_rho(hi) - f_rho(lo) <= tol) break;
    Real mid = (lo + hi) / Real(2.0, prec);
    if (f_rho(mid) < rho) lo = mid; else hi = mid;
  }
  return (lo + hi) / Real(2.0, prec);
}

}  // namespace twosq::hp

#endif  // TWOSQ_HP_HPP_
