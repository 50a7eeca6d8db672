#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tmsim/errors.hpp"

namespace tmsim {

namespace detail {

inline void widen_exponent_range() {
  static const bool done = [] {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    return true;
  }();
  (void)done;
}

inline long initial_precision() {
  widen_exponent_range();
  if (const char* env = std::getenv("TA_PRECISION_BITS")) {
    char* end = nullptr;
    long bits = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && bits >= 64) return bits;
  }
  return 256;
}

inline std::atomic<long>& precision_slot() {
  static std::atomic<long> slot{initial_precision()};
  return slot;
}

}  // namespace detail

inline long default_precision() { return detail::precision_slot().load(std::memory_order_relaxed); }

inline void set_default_precision(long bits) {
  if (bits < 64) throw DomainError("precision_bits must be at least 64");
  detail::widen_exponent_range();
  detail::precision_slot().store(bits, std::memory_order_relaxed);
}

// Scoped override of the default precision.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(long bits) : saved_(default_precision()) { set_default_precision(bits); }
  ~PrecisionGuard() { set_default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  long saved_;
};

/// Arbitrary precision binary floating point number backed by MPFR.
/// Binary operations produce a result at the larger of the operand precisions.
class Real {
 public:
  Real() : Real(0L) {}
  Real(int v) : Real(static_cast<long>(v)) {}
  Real(long v) {
    init(default_precision());
    mpfr_set_si(v_, v, MPFR_RNDN);
  }
  Real(unsigned long v) {
    init(default_precision());
    mpfr_set_ui(v_, v, MPFR_RNDN);
  }
  Real(double v) {
    init(default_precision());
    mpfr_set_d(v_, v, MPFR_RNDN);
  }
  explicit Real(const mpz_class& z) {
    init(default_precision());
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  explicit Real(const std::string& s, mpfr_rnd_t rnd = MPFR_RNDN) {
    init(default_precision());
    if (mpfr_set_str(v_, s.c_str(), 10, rnd) != 0 && !valid_decimal(s))
      throw DomainError("not a decimal number: '" + s + "'");
  }
  explicit Real(const char* s) : Real(std::string(s)) {}

  static Real with_prec(long bits) {
    Real r(NoInit{});
    r.init(bits);
    mpfr_set_zero(r.v_, 1);
    return r;
  }
  static Real from_string(const std::string& s, long bits, mpfr_rnd_t rnd = MPFR_RNDN) {
    Real r = with_prec(bits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, rnd) != 0 && !valid_decimal(s))
      throw DomainError("not a decimal number: '" + s + "'");
    return r;
  }

  Real(const Real& o) {
    init(mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    v_[0] = o.v_[0];
    o.v_[0]._mpfr_d = nullptr;
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    std::swap(v_[0], o.v_[0]);
    return *this;
  }
  ~Real() {
    if (v_[0]._mpfr_d) mpfr_clear(v_);
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  long prec() const { return mpfr_get_prec(v_); }

  // Same value rounded to a different width.
  Real rounded(long bits, mpfr_rnd_t rnd = MPFR_RNDN) const {
    Real r = with_prec(bits);
    mpfr_set(r.v_, v_, rnd);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  // Nearest integer (ties away from zero).
  mpz_class to_mpz() const {
    mpz_class z;
    Real t = with_prec(prec());
    mpfr_round(t.v_, v_);
    mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDN);
    return z;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Decimal rendering. digits == 0 picks enough digits to read back the same value.
  std::string str(std::size_t digits = 0) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    if (digits == 0) digits = mpfr_get_str_ndigits(10, mpfr_get_prec(v_));
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = m[0] == '-';
    if (neg) m.erase(0, 1);
    while (m.size() > 1 && m.back() == '0') m.pop_back();
    std::string out = neg ? "-" : "";
    long ex = static_cast<long>(e);
    if (ex > 0 && ex <= 40) {
      if (static_cast<long>(m.size()) <= ex) {
        out += m + std::string(ex - m.size(), '0');
      } else {
        out += m.substr(0, ex) + "." + m.substr(ex);
      }
    } else if (ex <= 0 && ex > -10) {
      out += "0." + std::string(-ex, '0') + m;
    } else {
      out += m.substr(0, 1);
      if (m.size() > 1) out += "." + m.substr(1);
      out += "e" + std::to_string(ex - 1);
    }
    return out;
  }

  Real& operator+=(const Real& o) { return binop(o, mpfr_add); }
  Real& operator-=(const Real& o) { return binop(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return binop(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return binop(o, mpfr_div); }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) { return apply2(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return apply2(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return apply2(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return apply2(a, b, mpfr_div); }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

  friend std::ostream& operator<<(std::ostream& os, const Real& r) { return os << r.str(); }

  // Unary function application with explicit rounding, used by Interval.
  template <class F>
  Real map(F f, mpfr_rnd_t rnd) const {
    Real r = with_prec(prec());
    f(r.v_, v_, rnd);
    return r;
  }
  template <class F>
  static Real combine(const Real& a, const Real& b, F f, mpfr_rnd_t rnd) {
    Real r = with_prec(std::max(a.prec(), b.prec()));
    f(r.v_, a.v_, b.v_, rnd);
    return r;
  }

 private:
  struct NoInit {};
  explicit Real(NoInit) { v_[0]._mpfr_d = nullptr; }

  void init(long bits) { mpfr_init2(v_, bits); }

  static bool valid_decimal(const std::string& s) {
    // mpfr_set_str returns nonzero for trailing garbage; accept only clean input.
    mpfr_t tmp;
    mpfr_init2(tmp, 64);
    char* end = nullptr;
    int ok = mpfr_strtofr(tmp, s.c_str(), &end, 10, MPFR_RNDN);
    (void)ok;
    bool clean = end && *end == '\0' && end != s.c_str();
    mpfr_clear(tmp);
    return clean;
  }

  template <class F>
  Real& binop(const Real& o, F f) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
    f(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  template <class F>
  static Real apply2(const Real& a, const Real& b, F f) {
    Real r = with_prec(std::max(a.prec(), b.prec()));
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

#define TMSIM_REAL_MIXED(T)                                                  \
  inline Real operator+(const Real& a, T b) { return a + Real(b); }          \
  inline Real operator+(T a, const Real& b) { return Real(a) + b; }          \
  inline Real operator-(const Real& a, T b) { return a - Real(b); }          \
  inline Real operator-(T a, const Real& b) { return Real(a) - b; }          \
  inline Real operator*(const Real& a, T b) { return a * Real(b); }          \
  inline Real operator*(T a, const Real& b) { return Real(a) * b; }          \
  inline Real operator/(const Real& a, T b) { return a / Real(b); }          \
  inline Real operator/(T a, const Real& b) { return Real(a) / b; }          \
  inline bool operator<(const Real& a, T b) { return a < Real(b); }          \
  inline bool operator<(T a, const Real& b) { return Real(a) < b; }          \
  inline bool operator>(const Real& a, T b) { return a > Real(b); }          \
  inline bool operator>(T a, const Real& b) { return Real(a) > b; }          \
  inline bool operator<=(const Real& a, T b) { return a <= Real(b); }        \
  inline bool operator<=(T a, const Real& b) { return Real(a) <= b; }        \
  inline bool operator>=(const Real& a, T b) { return a >= Real(b); }        \
  inline bool operator>=(T a, const Real& b) { return Real(a) >= b; }        \
  inline bool operator==(const Real& a, T b) { return a == Real(b); }        \
  inline bool operator!=(const Real& a, T b) { return a != Real(b); }

TMSIM_REAL_MIXED(int)
TMSIM_REAL_MIXED(long)
TMSIM_REAL_MIXED(double)
#undef TMSIM_REAL_MIXED

#define TMSIM_REAL_FN(name, mpfr_fn)                                                        \
  inline Real name(const Real& x) { return x.map([](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t m) { \
                                                  mpfr_fn(r, a, m);                         \
                                                },                                          \
                                                MPFR_RNDN); }

TMSIM_REAL_FN(sin, mpfr_sin)
TMSIM_REAL_FN(cos, mpfr_cos)
TMSIM_REAL_FN(tan, mpfr_tan)
TMSIM_REAL_FN(asin, mpfr_asin)
TMSIM_REAL_FN(acos, mpfr_acos)
TMSIM_REAL_FN(atan, mpfr_atan)
TMSIM_REAL_FN(exp, mpfr_exp)
TMSIM_REAL_FN(exp2, mpfr_exp2)
TMSIM_REAL_FN(log, mpfr_log)
TMSIM_REAL_FN(log2, mpfr_log2)
TMSIM_REAL_FN(sqrt, mpfr_sqrt)
TMSIM_REAL_FN(abs, mpfr_abs)
TMSIM_REAL_FN(sqr, mpfr_sqr)
#undef TMSIM_REAL_FN

inline Real floor(const Real& x) {
  return x.map([](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { mpfr_floor(r, a); }, MPFR_RNDN);
}
inline Real ceil(const Real& x) {
  return x.map([](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { mpfr_ceil(r, a); }, MPFR_RNDN);
}
// Nearest integer, ties away from zero.
inline Real round(const Real& x) {
  return x.map([](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { mpfr_round(r, a); }, MPFR_RNDN);
}
inline Real pow(const Real& x, long n) {
  return x.map([n](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t m) { mpfr_pow_si(r, a, n, m); }, MPFR_RNDN);
}
inline Real pow(const Real& x, const Real& y) {
  return Real::combine(x, y, [](mpfr_ptr r, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t m) { mpfr_pow(r, a, b, m); },
                       MPFR_RNDN);
}
inline Real atan2(const Real& y, const Real& x) {
  return Real::combine(y, x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t m) { mpfr_atan2(r, a, b, m); },
                       MPFR_RNDN);
}
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

inline Real pi_at(long bits, mpfr_rnd_t rnd = MPFR_RNDN) {
  Real r = Real::with_prec(bits);
  mpfr_const_pi(r.raw(), rnd);
  return r;
}
inline Real pi() { return pi_at(default_precision()); }

// 2^e exactly.
inline Real ldexp_one(long e, long bits = default_precision()) {
  Real r = Real::with_prec(bits);
  mpfr_set_ui_2exp(r.raw(), 1, e, MPFR_RNDN);
  return r;
}

// Unit roundoff scaled to the given width: 2^(1-bits).
inline Real epsilon_at(long bits) { return ldexp_one(1 - bits, bits); }

inline Real max_abs(const std::vector<Real>& v) {
  Real m = 0;
  for (const auto& x : v) m = max(m, abs(x));
  return m;
}
}  // namespace tmsim
