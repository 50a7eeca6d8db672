#pragma once

#include <string>

#include "tmsim/ode/targeting.hpp"

namespace tmsim {

inline Real theta_sin(const Real& t) { return theta(sin(two_pi() * (t - floor(t)))); }
inline Real theta_minus_sin(const Real& t) { return theta(-sin(two_pi() * (t - floor(t)))); }

/// Half-integer times up to t_end, where the theta(+-sin) gates switch.
inline std::vector<Real> half_unit_breakpoints(const Real& t0, const Real& t_end) {
  std::vector<Real> out;
  for (long k = (floor(2 * t0)).to_long() + 1; Real(k) / 2 < t_end; ++k) out.push_back(Real(k) / 2);
  return out;
}

struct IterateOptions {
  Real c = 206;
  bool swap_phases = false;  // z1 updates on [k+1/2, k+1] and z2 on [k, k+1/2]
  OdeTolerances tol;
};

/// Two-phase C-infinity iteration of f_tilde:
///   z1' = c (f(r(z2)) - z1)^3 theta(sin 2 pi t),  z2' = c (r(z1) - z2)^3 theta(-sin 2 pi t),
/// with z1(0) = z2(0) = x0. z2 holds f^[k](x0) on [k, k+1/2].
inline Trajectory iterate_ode(const ScalarFn& f_tilde, const Real& x0, const Real& t_end, const IterateOptions& opt = {}) {
  IvpSpec spec;
  spec.state0 = {x0, x0};
  spec.abs_tol = opt.tol.abs_tol;
  spec.rel_tol = opt.tol.rel_tol;
  spec.max_step = opt.tol.max_step;
  spec.breakpoints = half_unit_breakpoints(Real(0), t_end);
  const Real c = opt.c;
  const bool swap = opt.swap_phases;
  spec.rhs = [f_tilde, c, swap](const Real& t, const State& z, State& dz) {
    Real g1 = swap ? theta_minus_sin(t) : theta_sin(t);
    Real g2 = swap ? theta_sin(t) : theta_minus_sin(t);
    if (g1.is_zero()) {
      dz[0] = Real(0);
    } else {
      Real d = f_tilde(r_floor(z[1])) - z[0];
      dz[0] = c * d * d * d * g1;
    }
    if (g2.is_zero()) {
      dz[1] = Real(0);
    } else {
      Real d = r_floor(z[0]) - z[1];
      dz[1] = c * d * d * d * g2;
    }
  };
  return solve_ivp(spec, t_end);
}

enum class PairInverse { J21, J22 };

struct OmegaOptions {
  Real c = 206;
  bool self_tracking = false;  // x2, s2 driven by (r(x1) - x1)^3 and (r(s1) - s1)^3 instead of tracking x1, s1
  OdeTolerances tol;
};

/// Four-state gated ODE whose x2 tracks J_{2,i}(n) on [n, n+1/2]; state order (x1, x2, s1, s2),
/// all starting at 0.
inline Trajectory omega_tilde_trajectory(PairInverse which, const Real& t_end, const OmegaOptions& opt = {}) {
  IvpSpec spec;
  spec.state0 = {Real(0), Real(0), Real(0), Real(0)};
  spec.abs_tol = opt.tol.abs_tol;
  spec.rel_tol = opt.tol.rel_tol;
  spec.max_step = opt.tol.max_step;
  spec.breakpoints = half_unit_breakpoints(Real(0), t_end);
  const Real c = opt.c;
  const bool self_tracking = opt.self_tracking;
  spec.rhs = [which, c, self_tracking](const Real& t, const State& z, State& dz) {
    const Real &x1 = z[0], &x2 = z[1], &s1 = z[2], &s2 = z[3];
    auto cube = [](const Real& d) { return d * d * d; };
    Real up = theta_sin(t), down = theta_minus_sin(t);
    if (up.is_zero()) {
      dz[0] = Real(0);
      dz[2] = Real(0);
    } else {
      Real rx2 = r_floor(x2), rs2 = r_floor(s2);
      Real x_target, s_target;
      if (which == PairInverse::J21) {
        x_target = xi(rs2 - rx2) * (1 + rx2);
        s_target = rs2 + xi(rx2 + 1 - rs2);
      } else {
        Real a = xi(x2), b = xi(1 - x2);
        x_target = a * (rx2 - 1) + b * (1 + rs2);
        s_target = a * rs2 + b * (rs2 + 1);
      }
      dz[0] = c * cube(x_target - x1) * up;
      dz[2] = c * cube(s_target - s1) * up;
    }
    if (down.is_zero()) {
      dz[1] = Real(0);
      dz[3] = Real(0);
    } else {
      dz[1] = c * cube(r_floor(x1) - (self_tracking ? x1 : x2)) * down;
      dz[3] = c * cube(r_floor(s1) - (self_tracking ? s1 : s2)) * down;
    }
  };
  return solve_ivp(spec, t_end);
}

/// x2(z + 1/4) before the sigma wrapper.
inline Real omega_tilde_raw(const Trajectory& tr, const Real& z) { return tr.at(z + Real(0.25))[1]; }

/// sigma(x2(z + 1/4)): within 1/5 of J_{2,i}(n) whenever |z - n| <= 1/4.
inline Real omega_tilde(PairInverse which, const Real& z, const OmegaOptions& opt = {}) {
  if (z < Real(-0.25)) throw DomainError("omega_tilde needs z >= -1/4");
  if (z == Real(-0.25)) return sigma(Real(0));
  Trajectory tr = omega_tilde_trajectory(which, z + Real(0.25), opt);
  return sigma(tr.final_state()[1]);
}

}  // namespace tmsim
