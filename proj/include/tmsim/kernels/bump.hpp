#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "tmsim/kernels/basic.hpp"
#include "tmsim/numerics/cheb_table.hpp"
#include "tmsim/numerics/quadrature.hpp"

namespace tmsim {

/// Constants of the smooth step functions, computed once per working precision.
struct KernelParams {
  long bits = 0;
  Real lambda_quarter;  // 0.4 pi - 1
  Real c_bar;           // 1 / integral_0^1 theta(-sin 2 pi x) dx
  Real c_xi;            // 1 / integral_{1/4}^{3/4} theta(-(x - 1/4)(x - 3/4)) dx
  Real quad_tol;

  // Antiderivatives of the unnormalized integrands.
  ChebAntiderivative v_table;   // on [1/2, 1]
  ChebAntiderivative xi_table;  // on [1/4, 3/4]
};

namespace detail {

// theta(-sin 2 pi s) = e^{1/sin 2 pi s} on (1/2, 1).
inline Real v_integrand(const Real& s) { return theta(-sin(two_pi() * s)); }

inline Real xi_integrand(const Real& s) { return theta(-(s - Real(0.25)) * (s - Real(0.75))); }

inline KernelParams build_params(long bits) {
  PrecisionGuard guard(bits);
  KernelParams p;
  p.bits = bits;
  p.lambda_quarter = lambda_quarter();
  p.quad_tol = ldexp_one(-(bits - 32));
  // Tolerances are absolute on the raw integrand; rescale so the normalized functions meet quad_tol.
  p.v_table = ChebAntiderivative(v_integrand, Real(0.5), Real(1), p.quad_tol);
  p.v_table = ChebAntiderivative(v_integrand, Real(0.5), Real(1), p.quad_tol * min(Real(1), p.v_table.total()));
  p.xi_table = ChebAntiderivative(xi_integrand, Real(0.25), Real(0.75), p.quad_tol);
  p.xi_table = ChebAntiderivative(xi_integrand, Real(0.25), Real(0.75), p.quad_tol * min(Real(1), p.xi_table.total()));
  p.c_bar = 1 / p.v_table.total();
  p.c_xi = 1 / p.xi_table.total();
  return p;
}

}  // namespace detail

inline const KernelParams& kernel_params(long bits = default_precision()) {
  static std::mutex mu;
  static std::map<long, std::unique_ptr<KernelParams>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(bits);
  if (it == cache.end()) it = cache.emplace(bits, std::make_unique<KernelParams>(detail::build_params(bits))).first;
  return *it->second;
}

/// v(0) = 0, v' = c_bar theta(-sin 2 pi x). Equal to n on [n, n+1/2] exactly.
inline Real v_step(const Real& x) {
  Real n = floor(x);
  Real f = x - n;
  if (f <= Real(0.5)) return n;
  const KernelParams& p = kernel_params();
  return n + p.c_bar * p.v_table(f);
}

/// r(x) = v(x + 1/4): equal to n on [n - 1/4, n + 1/4].
inline Real r_floor(const Real& x) { return v_step(x + Real(0.25)); }

/// Smooth switch: 0 for x <= 1/4, 1 for x >= 3/4, strictly between otherwise.
inline Real xi(const Real& x) {
  if (x <= Real(0.25)) return Real(0);
  if (x >= Real(0.75)) return Real(1);
  const KernelParams& p = kernel_params();
  return p.c_xi * p.xi_table(x);
}

namespace detail {

// Monotone kernel lifted to intervals; values off the plateaus are widened by the quadrature slack.
template <class F, class Plateau>
Interval monotone_quad_lift(const Interval& x, F f, Plateau on_plateau) {
  Real slack = 64 * kernel_params().quad_tol;
  Real lo = f(x.lo()), hi = f(x.hi());
  if (!on_plateau(x.lo())) lo = Real::combine(lo, slack, mpfr_sub, MPFR_RNDD);
  if (!on_plateau(x.hi())) hi = Real::combine(hi, slack, mpfr_add, MPFR_RNDU);
  return Interval(lo, hi);
}

}  // namespace detail

inline Interval v_step(const Interval& x) {
  return detail::monotone_quad_lift(
      x, [](const Real& a) { return v_step(a); }, [](const Real& a) { return a - floor(a) <= Real(0.5); });
}

inline Interval r_floor(const Interval& x) {
  return detail::monotone_quad_lift(
      x, [](const Real& a) { return r_floor(a); },
      [](const Real& a) {
        Real b = a + Real(0.25);
        return b - floor(b) <= Real(0.5);
      });
}

inline Interval xi(const Interval& x) {
  return detail::monotone_quad_lift(
      x, [](const Real& a) { return xi(a); }, [](const Real& a) { return a <= Real(0.25) || a >= Real(0.75); });
}

}  // namespace tmsim
