#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>

#include "edgestat/exact.hpp"

namespace edgestat {

/// Closed real interval with outward-rounded MPFR endpoints.
class Interval {
 public:
  static constexpr mpfr_prec_t kPrec = 256;

  Interval() : Interval(0L) {}
  Interval(long v) {  // NOLINT(google-explicit-constructor)
    init();
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
  }
  explicit Interval(const BigInt& v) {
    init();
    mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
  }
  explicit Interval(const Rational& q) {
    init();
    mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
  }
  Interval(const Rational& lo, const Rational& hi) {
    init();
    mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
  }
  Interval(const Interval& o) {
    init();
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  Interval& operator=(const Interval& o) {
    if (this != &o) {
      mpfr_set(lo_, o.lo_, MPFR_RNDD);
      mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Interval e() {
    Interval r;
    mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
    mpfr_exp(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
    mpfr_exp(r.hi_, r.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_t t;
    mpfr_init2(t, kPrec);
    bool first = true;
    auto consider = [&](mpfr_srcptr x, mpfr_srcptr y) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    };
    consider(a.lo_, b.lo_);
    consider(a.lo_, b.hi_);
    consider(a.hi_, b.lo_);
    consider(a.hi_, b.hi_);
    mpfr_clear(t);
    return r;
  }
  /// Divisor must not contain zero.
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) throw std::domain_error("interval division by a range containing 0");
    Interval inv;
    mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
    return a * inv;
  }
  Interval operator-() const {
    Interval r;
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
  }

  /// Monotone increasing maps.
  Interval sqrt() const { return increasing(mpfr_sqrt, true); }
  Interval exp() const { return increasing(mpfr_exp, false); }
  Interval log2() const { return increasing(mpfr_log2, true); }

  /// x^q for x > 0 and rational q, computed as exp2(q log2 x).
  Interval pow(const Rational& q) const {
    if (mpfr_sgn(lo_) <= 0) throw std::domain_error("pow of a non-positive interval");
    Interval lg = log2() * Interval(q);
    Interval r;
    mpfr_exp2(r.lo_, lg.lo_, MPFR_RNDD);
    mpfr_exp2(r.hi_, lg.hi_, MPFR_RNDU);
    return r;
  }

  static Interval hull(const Interval& a, const Interval& b) {
    Interval r = a;
    if (mpfr_less_p(b.lo_, r.lo_)) mpfr_set(r.lo_, b.lo_, MPFR_RNDD);
    if (mpfr_greater_p(b.hi_, r.hi_)) mpfr_set(r.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  bool lower_geq(const BigInt& v) const { return mpfr_cmp_z(lo_, v.get_mpz_t()) >= 0; }
  bool lower_geq(const Rational& v) const { return mpfr_cmp_q(lo_, v.get_mpq_t()) >= 0; }
  bool upper_lt(const Rational& v) const { return mpfr_cmp_q(hi_, v.get_mpq_t()) < 0; }
  bool upper_leq(const Rational& v) const { return mpfr_cmp_q(hi_, v.get_mpq_t()) <= 0; }
  bool lower_gt(const Rational& v) const { return mpfr_cmp_q(lo_, v.get_mpq_t()) > 0; }
  bool certainly_lt(const Interval& o) const { return mpfr_less_p(hi_, o.lo_); }
  bool certainly_leq(const Interval& o) const { return mpfr_lessequal_p(hi_, o.lo_); }

  double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid() const {
    mpfr_t t;
    mpfr_init2(t, kPrec);
    mpfr_add(t, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(t, t, 1, MPFR_RNDN);
    double d = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return d;
  }

  /// Exact rational value of an endpoint.
  Rational lower_q() const { return endpoint_q(lo_); }
  Rational upper_q() const { return endpoint_q(hi_); }

  std::string lower_str(int digits = 20) const { return render(lo_, digits, MPFR_RNDD); }
  std::string upper_str(int digits = 20) const { return render(hi_, digits, MPFR_RNDU); }

 private:
  void init() {
    mpfr_init2(lo_, kPrec);
    mpfr_init2(hi_, kPrec);
  }

  using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
  Interval increasing(UnaryFn fn, bool needs_nonneg) const {
    if (needs_nonneg && mpfr_sgn(lo_) < 0) throw std::domain_error("function domain excludes negative values");
    Interval r;
    fn(r.lo_, lo_, MPFR_RNDD);
    fn(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  static Rational endpoint_q(mpfr_srcptr x) {
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rational q(m);
    if (e >= 0) q *= ipow(2, static_cast<std::uint64_t>(e));
    else q /= ipow(2, static_cast<std::uint64_t>(-e));
    q.canonicalize();
    return q;
  }

  static std::string render(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*R*g", digits, rnd, x);
    return buf;
  }

  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace edgestat
