#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "edgestat/vertex_set.hpp"

namespace edgestat {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt r;
  if (k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt factorial(std::uint64_t n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// (n)_k = n (n-1) ... (n-k+1); zero when k > n.
inline BigInt falling(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r *= static_cast<unsigned long>(n - i);
  return r;
}

inline BigInt ipow(const BigInt& base, std::uint64_t e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational qpow(const Rational& base, std::uint64_t e) {
  Rational r(ipow(base.get_num(), e), ipow(base.get_den(), e));
  r.canonicalize();
  return r;
}

inline BigInt isqrt(const BigInt& x) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

inline BigInt floor_q(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigInt ceil_q(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline std::string to_string(const BigInt& x) { return x.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::uint64_t to_u64(const BigInt& x) {
  if (x < 0 || mpz_sizeinbase(x.get_mpz_t(), 2) > 64) throw std::overflow_error("integer does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, x.get_mpz_t());
  return out;
}

inline BigInt from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

inline BigInt parse_bigint(std::string_view s) {
  BigInt r;
  if (s.empty() || r.set_str(std::string(s), 10) != 0) throw InputError("not an integer: '" + std::string(s) + "'");
  return r;
}

/// Accepts "3", "-2", "1/20", "0.05", "2.5e-3".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty number");
  auto bad = [&] { return InputError("not an exact decimal or fraction: '" + s + "'"); };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = parse_bigint(s.substr(0, slash)), den = parse_bigint(s.substr(slash + 1));
    if (den == 0) throw bad();
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    try {
      std::size_t used = 0;
      exp10 = std::stol(s.substr(e + 1), &used);
      if (used != s.size() - e - 1) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  std::string digits;
  bool seen_dot = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) throw bad();
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      if (seen_dot) --exp10;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  Rational q{BigInt(digits)};
  BigInt scale = ipow(10, static_cast<std::uint64_t>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) q /= scale;
  else q *= scale;
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

/// Rational bracket around e: partial sum of 1/i! and that sum plus 1/(N! N).
inline const Rational& e_lower() {
  static const Rational v = [] {
    Rational s = 0;
    BigInt f = 1;
    for (unsigned i = 0; i <= 40; ++i) {
      if (i > 0) f *= i;
      s += Rational(1, f);
    }
    s.canonicalize();
    return s;
  }();
  return v;
}

inline const Rational& e_upper() {
  static const Rational v = [] {
    Rational u = e_lower() + Rational(1, factorial(40) * 40);
    u.canonicalize();
    return u;
  }();
  return v;
}

/// The nonnegative real coef * sqrt(radicand), compared exactly against rationals.
struct SqrtRational {
  Rational coef = 0;
  Rational radicand = 1;

  static SqrtRational rational(const Rational& q) { return {q, 1}; }
  Rational squared() const { return coef * coef * radicand; }

  /// this <= x
  bool leq(const Rational& x) const { return x >= 0 && squared() <= x * x; }
  /// this >= x
  bool geq(const Rational& x) const { return x <= 0 || squared() >= x * x; }
  double approx() const { return coef.get_d() * std::sqrt(radicand.get_d()); }
  std::string describe() const {
    if (radicand == 1) return coef.get_str();
    return coef.get_str() + "*sqrt(" + radicand.get_str() + ")";
  }
};

}  // namespace edgestat
