#pragma once

#include <algorithm>
#include <ostream>
#include <string>

#include "tmsim/numerics/real.hpp"

namespace tmsim {

/// Closed interval [lo, hi] with outward rounding. Every operation returns an
/// enclosure of the exact image of its arguments.
class Interval {
 public:
  Interval() : lo_(0), hi_(0) {}
  Interval(int v) : lo_(v), hi_(v) {}
  Interval(long v) : lo_(v), hi_(v) {}
  // A double is exactly representable at any width >= 53, so the point interval is exact.
  Interval(double v) : lo_(v), hi_(v) {}
  Interval(const Real& v) : lo_(v), hi_(v) {}
  Interval(const Real& lo, const Real& hi) : lo_(lo), hi_(hi) {
    if (hi_ < lo_) throw DomainError("interval with lo > hi");
  }
  // Enclosure of a decimal literal.
  static Interval from_decimal(const std::string& s, long bits = default_precision()) {
    return Interval(Real::from_string(s, bits, MPFR_RNDD), Real::from_string(s, bits, MPFR_RNDU));
  }
  static Interval entire() {
    Real lo = Real::with_prec(default_precision()), hi = Real::with_prec(default_precision());
    mpfr_set_inf(lo.raw(), -1);
    mpfr_set_inf(hi.raw(), 1);
    return Interval(lo, hi);
  }

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  long prec() const { return std::max(lo_.prec(), hi_.prec()); }

  Real mid() const { return (lo_ + hi_) / 2; }
  Real width() const { return Real::combine(hi_, lo_, mpfr_sub, MPFR_RNDU); }
  // Largest absolute value of a member.
  Real mag() const { return max(abs(lo_), abs(hi_)); }
  // Smallest absolute value of a member.
  Real mig() const {
    if (contains_zero()) return Real(0);
    return min(abs(lo_), abs(hi_));
  }
  bool contains(const Real& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool is_point() const { return lo_ == hi_; }

  // Certain comparisons: true only if they hold for every member.
  bool certainly_lt(const Interval& o) const { return hi_ < o.lo_; }
  bool certainly_le(const Interval& o) const { return hi_ <= o.lo_; }
  bool certainly_gt(const Interval& o) const { return lo_ > o.hi_; }
  bool certainly_ge(const Interval& o) const { return lo_ >= o.hi_; }
  bool certainly_positive() const { return lo_.sign() > 0; }
  bool certainly_negative() const { return hi_.sign() < 0; }

  friend Interval hull(const Interval& a, const Interval& b) {
    return Interval(min(a.lo_, b.lo_), max(a.hi_, b.hi_));
  }

  Interval operator-() const { return Interval(-hi_, -lo_); }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return Interval(Real::combine(a.lo_, b.lo_, mpfr_add, MPFR_RNDD), Real::combine(a.hi_, b.hi_, mpfr_add, MPFR_RNDU));
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return Interval(Real::combine(a.lo_, b.hi_, mpfr_sub, MPFR_RNDD), Real::combine(a.hi_, b.lo_, mpfr_sub, MPFR_RNDU));
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const Real* as[2] = {&a.lo_, &a.hi_};
    const Real* bs[2] = {&b.lo_, &b.hi_};
    Real lo = Real::combine(*as[0], *bs[0], mpfr_mul, MPFR_RNDD);
    Real hi = Real::combine(*as[0], *bs[0], mpfr_mul, MPFR_RNDU);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (i == 0 && j == 0) continue;
        lo = min(lo, Real::combine(*as[i], *bs[j], mpfr_mul, MPFR_RNDD));
        hi = max(hi, Real::combine(*as[i], *bs[j], mpfr_mul, MPFR_RNDU));
      }
    return Interval(lo, hi);
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
    Real rlo = Real::with_prec(b.prec()), rhi = Real::with_prec(b.prec());
    mpfr_ui_div(rlo.raw(), 1, b.hi_.raw(), MPFR_RNDD);
    mpfr_ui_div(rhi.raw(), 1, b.lo_.raw(), MPFR_RNDU);
    return a * Interval(rlo, rhi);
  }
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }
  Interval& operator/=(const Interval& o) { return *this = *this / o; }

  friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
    return os << "[" << x.lo_.str(20) << ", " << x.hi_.str(20) << "]";
  }

  // Monotone nondecreasing function lifted with directed rounding.
  template <class F>
  Interval increasing(F f) const {
    return Interval(lo_.map(f, MPFR_RNDD), hi_.map(f, MPFR_RNDU));
  }
  // Monotone nonincreasing function lifted with directed rounding.
  template <class F>
  Interval decreasing(F f) const {
    return Interval(hi_.map(f, MPFR_RNDD), lo_.map(f, MPFR_RNDU));
  }

 private:
  Real lo_, hi_;
};

#define TMSIM_IV_MIXED(T)                                                          \
  inline Interval operator+(const Interval& a, T b) { return a + Interval(b); }    \
  inline Interval operator+(T a, const Interval& b) { return Interval(a) + b; }    \
  inline Interval operator-(const Interval& a, T b) { return a - Interval(b); }    \
  inline Interval operator-(T a, const Interval& b) { return Interval(a) - b; }    \
  inline Interval operator*(const Interval& a, T b) { return a * Interval(b); }    \
  inline Interval operator*(T a, const Interval& b) { return Interval(a) * b; }    \
  inline Interval operator/(const Interval& a, T b) { return a / Interval(b); }    \
  inline Interval operator/(T a, const Interval& b) { return Interval(a) / b; }

TMSIM_IV_MIXED(int)
TMSIM_IV_MIXED(long)
TMSIM_IV_MIXED(double)
TMSIM_IV_MIXED(const Real&)
#undef TMSIM_IV_MIXED

inline Interval pi_interval(long bits = default_precision()) {
  return Interval(pi_at(bits, MPFR_RNDD), pi_at(bits, MPFR_RNDU));
}

inline Interval abs(const Interval& x) {
  if (x.lo().sign() >= 0) return x;
  if (x.hi().sign() <= 0) return -x;
  return Interval(Real(0), x.mag());
}

inline Interval sqr(const Interval& x) {
  Interval a = abs(x);
  return Interval(a.lo().map(mpfr_sqr, MPFR_RNDD), a.hi().map(mpfr_sqr, MPFR_RNDU));
}

inline Interval pow(const Interval& x, long n) {
  if (n == 0) return Interval(1);
  if (n < 0) return Interval(1) / pow(x, -n);
  auto f = [n](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t m) { mpfr_pow_ui(r, a, static_cast<unsigned long>(n), m); };
  if (n % 2 == 1) return x.increasing(f);
  Interval a = abs(x);
  return a.increasing(f);
}

inline Interval sqrt(const Interval& x) {
  if (x.lo().sign() < 0) throw DomainError("sqrt of an interval with negative members");
  return x.increasing(mpfr_sqrt);
}
inline Interval exp(const Interval& x) { return x.increasing(mpfr_exp); }
inline Interval exp2(const Interval& x) { return x.increasing(mpfr_exp2); }
inline Interval log(const Interval& x) {
  if (!x.certainly_positive()) throw DomainError("log of an interval with nonpositive members");
  return x.increasing(mpfr_log);
}
inline Interval log2(const Interval& x) {
  if (!x.certainly_positive()) throw DomainError("log2 of an interval with nonpositive members");
  return x.increasing(mpfr_log2);
}
inline Interval atan(const Interval& x) { return x.increasing(mpfr_atan); }
inline Interval asin(const Interval& x) {
  if (x.lo() < -1 || x.hi() > 1) throw DomainError("arcsin argument leaves [-1, 1]");
  return x.increasing(mpfr_asin);
}
inline Interval floor(const Interval& x) {
  return Interval(floor(x.lo()), floor(x.hi()));
}

namespace detail {

// Does the interval x contain a point of the form offset + 2*pi*k? Conservative: may answer
// true when it does not.
inline bool may_contain_phase(const Interval& x, const Interval& offset) {
  Interval two_pi = 2 * pi_interval(x.prec() + 16);
  Interval k = (x - offset) / two_pi;
  return floor(k.hi()) >= ceil(k.lo());
}

}  // namespace detail

inline Interval sin(const Interval& x) {
  Interval p = pi_interval(x.prec() + 16);
  if (x.width() >= 2 * p.lo()) return Interval(Real(-1), Real(1));
  Real a_lo = x.lo().map(mpfr_sin, MPFR_RNDD), a_hi = x.lo().map(mpfr_sin, MPFR_RNDU);
  Real b_lo = x.hi().map(mpfr_sin, MPFR_RNDD), b_hi = x.hi().map(mpfr_sin, MPFR_RNDU);
  Real lo = min(a_lo, b_lo), hi = max(a_hi, b_hi);
  if (detail::may_contain_phase(x, p / 2)) hi = Real(1);
  if (detail::may_contain_phase(x, -p / 2)) lo = Real(-1);
  return Interval(lo, hi);
}

inline Interval cos(const Interval& x) {
  Interval p = pi_interval(x.prec() + 16);
  if (x.width() >= 2 * p.lo()) return Interval(Real(-1), Real(1));
  Real a_lo = x.lo().map(mpfr_cos, MPFR_RNDD), a_hi = x.lo().map(mpfr_cos, MPFR_RNDU);
  Real b_lo = x.hi().map(mpfr_cos, MPFR_RNDD), b_hi = x.hi().map(mpfr_cos, MPFR_RNDU);
  Real lo = min(a_lo, b_lo), hi = max(a_hi, b_hi);
  if (detail::may_contain_phase(x, Interval(0))) hi = Real(1);
  if (detail::may_contain_phase(x, p)) lo = Real(-1);
  return Interval(lo, hi);
}

inline Interval max(const Interval& a, const Interval& b) {
  return Interval(max(a.lo(), b.lo()), max(a.hi(), b.hi()));
}
inline Interval min(const Interval& a, const Interval& b) {
  return Interval(min(a.lo(), b.lo()), min(a.hi(), b.hi()));
}

// Widen by a nonnegative radius, rounding outward.
inline Interval inflate(const Interval& x, const Real& radius) {
  return Interval(Real::combine(x.lo(), radius, mpfr_sub, MPFR_RNDD), Real::combine(x.hi(), radius, mpfr_add, MPFR_RNDU));
}

}  // namespace tmsim
