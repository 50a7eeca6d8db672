#pragma once

#include <functional>
#include <random>
#include <string>

#include "tmsim/errors.hpp"
#include "tmsim/kernels/kernels.hpp"
#include "tmsim/numerics/ivp.hpp"
#include "tmsim/numerics/quadrature.hpp"

namespace tmsim {

using ScalarFn = std::function<Real(const Real& t)>;

/// Integration controls shared by the ODE drivers.
struct OdeTolerances {
  Real abs_tol = Real("1e-14");
  Real rel_tol = Real("1e-14");
  Real max_step = Real("0.01");
};

/// y' = c (b - y)^3 phi(t): drives any start into a gamma-ball around b by t1.
struct TargetingSpec {
  Real b;
  Real gamma;
  Real t0 = 0;
  Real t1 = Real(0.5);
  ScalarFn phi;
  Real c;
  Real rho = 0;    // bound on |bbar(t) - b|
  Real delta = 0;  // bound on |E(t)|
};

inline Real gate_integral(const ScalarFn& phi, const Real& t0, const Real& t1) {
  return quad_adaptive([&](const Real& t) { return phi(t); }, t0, t1, Real("1e-30"));
}

/// Least admissible gain 1 / (2 gamma^2 integral_{t0}^{t1} phi).
inline Real min_gain(const Real& gamma, const Real& phi_integral) { return 1 / (2 * gamma * gamma * phi_integral); }

inline void validate_targeting(const TargetingSpec& s) {
  if (!(s.t1 > s.t0)) throw ValidationError("targeting needs t1 > t0");
  if (s.gamma.sign() <= 0) throw ValidationError("targeting error gamma must be positive");
  if (s.rho.sign() < 0 || s.delta.sign() < 0) throw ValidationError("rho and delta must be nonnegative");
  if (!s.phi) throw ValidationError("targeting needs a gate");
  Real I = gate_integral(s.phi, s.t0, s.t1);
  if (I.sign() <= 0) throw ValidationError("gate has no mass on [t0, t1]");
  if (s.c < min_gain(s.gamma, I))
    throw ValidationError("gain c = " + s.c.str(8) + " is below 1/(2 gamma^2 int phi) = " + min_gain(s.gamma, I).str(8));
}

/// Endpoint bound of the perturbed lemma: rho + gamma + delta (t1 - t0).
inline Real perturbed_bound(const TargetingSpec& s) { return s.rho + s.gamma + s.delta * (s.t1 - s.t0); }

/// z' = c (bbar(t) - z)^3 phi(t) + E(t) from z(t0) = z0, integrated to t_end (default t1).
inline Trajectory target_perturbed(const TargetingSpec& s, const Real& z0, const ScalarFn& bbar, const ScalarFn& E,
                                   std::optional<Real> t_end = std::nullopt, const OdeTolerances& tol = {}) {
  validate_targeting(s);
  IvpSpec spec;
  spec.t0 = s.t0;
  spec.state0 = {z0};
  spec.abs_tol = tol.abs_tol;
  spec.rel_tol = tol.rel_tol;
  spec.max_step = tol.max_step;
  spec.breakpoints = {s.t1};
  spec.rhs = [s, bbar, E](const Real& t, const State& y, State& dy) {
    Real d = (bbar ? bbar(t) : s.b) - y[0];
    dy[0] = s.c * d * d * d * s.phi(t);
    if (E) dy[0] += E(t);
  };
  return solve_ivp(spec, t_end.value_or(s.t1));
}

inline Trajectory target_solve(const TargetingSpec& s, const Real& y0, std::optional<Real> t_end = std::nullopt,
                               const OdeTolerances& tol = {}) {
  return target_perturbed(s, y0, nullptr, nullptr, t_end, tol);
}

/// Seeded smooth noise bounded by magnitude: a normalized sum of random sinusoids.
inline ScalarFn smooth_noise(const Real& magnitude, std::uint64_t seed, int terms = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1, 1), freq(0.5, 8), phase(0, 1);
  std::vector<double> a, f, p;
  double total = 0;
  for (int i = 0; i < terms; ++i) {
    a.push_back(amp(rng));
    f.push_back(freq(rng));
    p.push_back(phase(rng));
    total += std::abs(a.back());
  }
  return [=](const Real& t) {
    Real acc = 0;
    Real tp = two_pi();
    for (std::size_t i = 0; i < a.size(); ++i) acc += Real(a[i]) * sin(tp * (Real(f[i]) * t + Real(p[i])));
    return magnitude * acc / Real(total);
  };
}

}  // namespace tmsim
