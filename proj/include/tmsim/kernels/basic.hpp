#pragma once

#include "tmsim/numerics/interval.hpp"
#include "tmsim/numerics/real.hpp"

namespace tmsim {

inline Real two_pi() { return 2 * pi(); }
inline Interval two_pi_interval() { return 2 * pi_interval(); }

inline Real decimal(const char* s) { return Real::from_string(s, default_precision()); }

/// 0 for x <= 0, e^{-1/x} otherwise.
inline Real theta(const Real& x) {
  if (x.sign() <= 0) return Real::with_prec(x.prec());
  return exp(-(1 / x));
}

inline Interval theta(const Interval& x) {
  if (x.hi().sign() <= 0) return Interval(0);
  Real hi = exp(-(1 / Interval(x.hi()))).hi();
  Real lo = x.lo().sign() <= 0 ? Real(0) : exp(-(1 / Interval(x.lo()))).lo();
  return Interval(lo, hi);
}

/// sigma(x) = x - 0.2 sin(2 pi x); the sine argument is reduced by the nearest integer first.
inline Real sigma(const Real& x) {
  Real k = round(x);
  return x - decimal("0.2") * sin(two_pi() * (x - k));
}

inline Interval sigma(const Interval& x) {
  Real k = round(x.mid());
  return x - Interval::from_decimal("0.2") * sin(two_pi_interval() * (x - k));
}

template <class T>
T sigma_iter(T x, int l) {
  for (int i = 0; i < l; ++i) x = sigma(x);
  return x;
}

/// Contraction factor of sigma on a 1/4 neighbourhood of an integer: 0.4 pi - 1.
inline Real lambda_quarter() { return decimal("0.4") * pi() - 1; }

/// s(t) = (sin^2(2 pi t) + sin(2 pi t)) / 2.
inline Real s_wave(const Real& t) {
  Real u = sin(two_pi() * (t - floor(t)));
  return (u * u + u) / 2;
}

inline Interval s_wave(const Interval& t) {
  Interval u = sin(two_pi_interval() * (t - floor(t.lo())));
  // (u^2 + u)/2 = ((u + 1/2)^2 - 1/4)/2 avoids the dependency blow-up.
  return (sqr(u + Interval(0.5)) - Interval(0.25)) / 2;
}

/// Psi(x, y) = x - asin(sin(2 pi x)(1 - e^{-y-2})) / 2 pi, an error-correcting map toward integers.
// Near an integer k with d = x - k, a = sin 2 pi d and b = a (1 - eps) we use
//   Psi - k = (asin a - asin b) / 2 pi = asin(a sqrt(1-b^2) - b sqrt(1-a^2)) / 2 pi,
// which stays accurate when e^{-y} is far below the working ulp.
inline Real psi_correct(const Real& x, const Real& y) {
  Real k = round(x);
  Real d = x - k;
  Real tp = two_pi();
  Real eps = exp(-(y + 2));
  if (abs(d) <= Real(0.25)) {
    Real arg = tp * d;
    Real a = sin(arg);
    Real ca = cos(arg);
    if (ca.sign() < 0) ca = Real(0);
    Real gap = a * a * eps * (2 - eps);
    Real cb = sqrt(ca * ca + gap);
    Real inner = a * (gap / (cb + ca) + eps * ca);
    return k + asin(inner) / tp;
  }
  return x - asin(sin(tp * d) * (1 - eps)) / tp;
}

namespace detail {

inline Interval psi_point_interval(const Real& x, const Real& y) {
  Real k = round(x);
  Interval X(x), Y(y);
  Interval tp = two_pi_interval();
  Interval d = X - k;
  Interval eps = exp(-(Y + 2));
  if (abs(d).hi() <= Real(0.25)) {
    Interval arg = tp * d;
    Interval a = sin(arg);
    Interval ca = max(cos(arg), Interval(0));
    Interval gap = sqr(a) * eps * (2 - eps);
    Interval cb = sqrt(sqr(ca) + gap);
    Interval inner = a * (gap / (cb + ca) + eps * ca);
    inner = Interval(max(inner.lo(), Real(-1)), min(inner.hi(), Real(1)));
    return k + asin(inner) / tp;
  }
  Interval prod = sin(tp * d) * (1 - eps);
  prod = Interval(max(prod.lo(), Real(-1)), min(prod.hi(), Real(1)));
  return X - asin(prod) / tp;
}

}  // namespace detail

/// Enclosure of Psi over a box. Psi is nondecreasing in x when y >= -2 and monotone in y
/// for fixed x, so the four corners bound it.
inline Interval psi_correct(const Interval& x, const Interval& y) {
  if (y.lo() >= Real(-2)) {
    Interval a = detail::psi_point_interval(x.lo(), y.lo());
    Interval b = detail::psi_point_interval(x.lo(), y.hi());
    Interval c = detail::psi_point_interval(x.hi(), y.lo());
    Interval d = detail::psi_point_interval(x.hi(), y.hi());
    return Interval(min(a.lo(), b.lo()), max(c.hi(), d.hi()));
  }
  Interval tp = two_pi_interval();
  Interval prod = sin(tp * x) * (1 - exp(-(y + 2)));
  if (prod.lo() < Real(-1) || prod.hi() > Real(1)) {
    // 1 - e^{-y-2} can exceed 1 in magnitude for y < -2; fall back to the crude bound.
    return x + Interval(-1, 1);
  }
  return x - asin(prod) / tp;
}

/// phi(t, y) = Psi(s(t), y): close to 1 on the middle of [k, k+1/2], below e^{-y}/8 on [k+1/2, k+1].
inline Real gate_phi(const Real& t, const Real& y) { return psi_correct(s_wave(t), y); }
inline Interval gate_phi(const Interval& t, const Interval& y) { return psi_correct(s_wave(t), y); }

}  // namespace tmsim
