#pragma once

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "tmsim/ode/simulation.hpp"

namespace tmsim {

/// Time-dependent field on R^n: dx = f(t, x).
using PlanarField = std::function<void(const Real& t, const State& x, State& dx)>;

inline State north_pole(std::size_t n) {
  State y(n + 1, Real(0));
  y[0] = Real(1);
  return y;
}

inline Real norm2(const State& v, std::size_t from = 0) {
  Real s = 0;
  for (std::size_t i = from; i < v.size(); ++i) s += v[i] * v[i];
  return sqrt(s);
}

/// Points with 1 - y0 below 2^-(bits/2) are treated as the north pole.
inline Real pole_guard() { return ldexp_one(-default_precision() / 2); }

inline State stereo(const State& x) {
  Real r2 = 0;
  for (auto& xi : x) r2 += xi * xi;
  Real den = 1 + r2;
  State y(x.size() + 1);
  y[0] = (r2 - 1) / den;
  for (std::size_t i = 0; i < x.size(); ++i) y[i + 1] = 2 * x[i] / den;
  return y;
}

inline State stereo_inv(const State& y) {
  Real w = 1 - y[0];
  if (w.is_zero()) throw NorthPole("stereographic inverse is undefined at the north pole");
  State x(y.size() - 1);
  for (std::size_t i = 1; i < y.size(); ++i) x[i - 1] = y[i] / w;
  return x;
}

/// Differential of the stereographic map applied to v at y:
/// sum_i v_i ((1 - y0) y_i d/dy0 + (1 - y0 - y_i^2) d/dy_i - sum_{j != 0, i} y_i y_j d/dy_j).
inline State pushforward_vector(const State& y, const State& v) {
  Real w = 1 - y[0];
  State out(y.size(), Real(0));
  for (std::size_t i = 1; i < y.size(); ++i) {
    const Real& vi = v[i - 1];
    if (vi.is_zero()) continue;
    out[0] += vi * w * y[i];
    for (std::size_t j = 1; j < y.size(); ++j) out[j] += j == i ? vi * (w - y[i] * y[i]) : -vi * y[i] * y[j];
  }
  return out;
}

inline State pushforward(const PlanarField& f, const Real& t, const State& y) {
  State x = stereo_inv(y);
  State v(x.size());
  f(t, x, v);
  return pushforward_vector(y, v);
}

/// Reparametrization factor K(x) = exp(-2/(1+r^2) - kappa (sqrt(1+r^2) - 1)).
/// kappa = 0 is the bare factor, which tends to 1 at infinity.
inline Real reparam_K(const State& x, const Real& kappa) {
  Real r2 = 0;
  for (auto& xi : x) r2 += xi * xi;
  Real e = -2 / (1 + r2);
  if (!kappa.is_zero()) e -= kappa * (sqrt(1 + r2) - 1);
  return exp(e);
}

/// A planar field carried to S^n through stereographic projection and time reparametrization.
struct SphereField {
  PlanarField base;
  std::size_t n = 2;
  Real kappa = Real(0.25);

  Real K(const State& x) const { return reparam_K(x, kappa); }
};

/// h(t, x) = K(x) f(t, x).
inline PlanarField reparam_field(const SphereField& F) {
  return [F](const Real& t, const State& x, State& dx) {
    F.base(t, x, dx);
    Real k = F.K(x);
    for (auto& d : dx) d *= k;
  };
}

/// Pushforward of h = K f, extended by zero at the north pole. t is the original time tau.
inline State sphere_field(const SphereField& F, const Real& t, const State& y) {
  if (1 - y[0] < pole_guard()) return State(y.size(), Real(0));
  return pushforward(reparam_field(F), t, y);
}

struct SphereOptions {
  OdeTolerances tol;
  // Cap on the step in original time; the reparametrized step is capped at step_tau / K.
  Real step_tau = Real("0.01");
};

/// Planar solution x(tau) of x' = f(tau, x).
inline Trajectory integrate_planar(const SphereField& F, const State& x0, const Real& tau_end,
                                   const std::vector<Real>& breakpoints = {}, const SphereOptions& opt = {}) {
  IvpSpec spec;
  spec.state0 = x0;
  spec.abs_tol = opt.tol.abs_tol;
  spec.rel_tol = opt.tol.rel_tol;
  spec.max_step = opt.step_tau;
  spec.breakpoints = breakpoints;
  spec.rhs = F.base;
  return solve_ivp(spec, tau_end);
}

/// Chart integration of tau' = K(x), x' = K(x) f(tau, x) in reparametrized time t.
/// Trajectory state is (tau, x_1..x_n); sphere points are stereo of the x part.
inline Trajectory integrate_sphere(const SphereField& F, const State& y0, const Real& t_end, const SphereOptions& opt = {}) {
  IvpSpec spec;
  State x0 = stereo_inv(y0);
  spec.state0 = {Real(0)};
  spec.state0.insert(spec.state0.end(), x0.begin(), x0.end());
  spec.abs_tol = opt.tol.abs_tol;
  spec.rel_tol = opt.tol.rel_tol;
  spec.max_step = t_end > Real(0) ? t_end : Real(1);
  spec.blowup_ceiling = ldexp_one(1L << 40);
  Real step_tau = opt.step_tau;
  spec.step_limit = [F, step_tau](const Real&, const State& s) {
    return step_tau / F.K(State(s.begin() + 1, s.end()));
  };
  spec.rhs = [F](const Real&, const State& s, State& ds) {
    State x(s.begin() + 1, s.end()), dx(x.size());
    F.base(s[0], x, dx);
    Real k = F.K(x);
    ds[0] = k;
    for (std::size_t i = 0; i < dx.size(); ++i) ds[i + 1] = k * dx[i];
  };
  return solve_ivp(spec, t_end);
}

/// Sphere point of a chart trajectory at time t.
inline State sphere_point(const Trajectory& chart, const Real& t) {
  State s = chart.at(t);
  return stereo(State(s.begin() + 1, s.end()));
}

/// Direct integration of the transported field in ambient coordinates, state (tau, y0..yn),
/// with the y part renormalized onto the sphere after every step.
inline Trajectory integrate_sphere_ambient(const SphereField& F, const State& y0, const Real& t_end,
                                           const SphereOptions& opt = {}) {
  IvpSpec spec;
  spec.state0 = {Real(0)};
  spec.state0.insert(spec.state0.end(), y0.begin(), y0.end());
  spec.abs_tol = opt.tol.abs_tol;
  spec.rel_tol = opt.tol.rel_tol;
  spec.max_step = t_end > Real(0) ? t_end : Real(1);
  Real step_tau = opt.step_tau;
  spec.step_limit = [F, step_tau](const Real&, const State& s) {
    State y(s.begin() + 1, s.end());
    if (1 - y[0] < pole_guard()) return step_tau;
    return step_tau / F.K(stereo_inv(y));
  };
  spec.rhs = [F](const Real&, const State& s, State& ds) {
    State y(s.begin() + 1, s.end());
    if (1 - y[0] < pole_guard()) {
      for (auto& d : ds) d = Real(0);
      return;
    }
    State x = stereo_inv(y);
    ds[0] = F.K(x);
    State v = sphere_field(F, s[0], y);
    for (std::size_t i = 0; i < v.size(); ++i) ds[i + 1] = v[i];
  };
  spec.project = [](State& s) {
    Real n = norm2(s, 1);
    for (std::size_t i = 1; i < s.size(); ++i) s[i] /= n;
  };
  return solve_ivp(spec, t_end);
}

/// tau^{-1} on [0, a_end] from (tau^{-1})' = 1 / K(x(a)), tau^{-1}(0) = 0, along the planar solution.
inline Trajectory tau_inv_trajectory(const SphereField& F, const Trajectory& planar, const Real& a_end,
                                     const SphereOptions& opt = {}) {
  if (a_end.sign() < 0) throw DomainError("tau_inv needs a >= 0");
  if (a_end > planar.t_end()) throw DomainError("tau_inv beyond the planar trajectory");
  IvpSpec spec;
  spec.state0 = {Real(0)};
  spec.abs_tol = opt.tol.abs_tol;
  spec.rel_tol = opt.tol.rel_tol;
  spec.max_step = opt.step_tau;
  for (auto& t : planar.times())
    if (t.sign() > 0 && t < a_end) spec.breakpoints.push_back(t);
  spec.rhs = [F, &planar](const Real& s, const State&, State& d) { d[0] = 1 / F.K(planar.at(s)); };
  return solve_ivp(spec, a_end);
}

inline Real tau_inv(const SphereField& F, const Trajectory& planar, const Real& a, const SphereOptions& opt = {}) {
  if (a.is_zero()) return Real(0);
  return tau_inv_trajectory(F, planar, a, opt).final_state()[0];
}

/// Field norms at the points with 1 - y0 = 10^-d, d in [d_from, d_to], along the planar direction u.
inline std::vector<Real> pole_decay_probe(const SphereField& F, const Real& t, const State& u, int d_from = 2,
                                          int d_to = 8) {
  Real un = norm2(u);
  std::vector<Real> out;
  for (int d = d_from; d <= d_to; ++d) {
    Real w = pow(Real(10), static_cast<long>(-d));
    Real y0 = 1 - w;
    Real rad = sqrt(1 - y0 * y0);
    State y{y0};
    for (auto& ui : u) y.push_back(rad * ui / un);
    out.push_back(norm2(sphere_field(F, t, y)));
  }
  return out;
}

/// Sphere field of the two-phase simulator of M. The smooth g_M (Psi replaced by r) is the default here.
inline SphereField simulating_sphere_field(const TuringMachine& M, const SimulationParams& p, bool smooth = true,
                                           const Real& kappa = Real(0.25)) {
  auto sim = std::make_shared<const TwoPhaseSimulator>(M, p, smooth);
  SphereField F;
  F.base = [sim](const Real& t, const State& x, State& dx) { sim->field(t, x, dx); };
  F.n = 2;
  F.kappa = kappa;
  return F;
}

struct GrowthShell {
  Real radius;
  std::vector<Real> sup_ratio;  // index d - 1: sup |f| / (1 + |z|^d) over the shell
};

/// Numeric growth evidence for "bounded in t, polynomial in z": sup |f(t, z)| / (1 + |z|^d) over the
/// shells radius/10 <= |z| <= radius, t in [0, t_max]. This is sampling, not a proof.
struct GrowthReport {
  std::vector<GrowthShell> shells;
  int degree = -1;  // least d whose shell sups do not increase outward; -1 if none up to max_degree
  std::size_t samples = 0;
  bool is_proof = false;
};

/// codes: integers that the sampler also places z2 near (e.g. configuration codes), so the
/// large-update branches of the field are exercised.
inline GrowthReport growth_probe(const PlanarField& f, const std::vector<Real>& radii, const Real& t_max, int max_degree,
                                 int samples_per_shell, std::uint64_t seed, const std::vector<Nat>& codes = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0, 1), ang(0, 6.283185307179586);
  GrowthReport rep;
  Real prev = Real(0);
  for (auto& R : radii) {
    GrowthShell sh{R, std::vector<Real>(static_cast<std::size_t>(max_degree), Real(0))};
    Real lo = R / 10 > prev ? R / 10 : prev;
    std::vector<Nat> near;
    for (auto& c : codes)
      if (Real(c) <= R && Real(c) >= lo / 2) near.push_back(c);
    for (int s = 0; s < samples_per_shell; ++s) {
      Real t = t_max * Real(unit(rng));
      State z(2);
      if (!near.empty() && s % 2 == 1) {
        z[1] = Real(near[static_cast<std::size_t>(s / 2) % near.size()]) + Real(0.4 * unit(rng) - 0.2);
        z[0] = (2 * Real(unit(rng)) - 1) * R;
      } else {
        Real rho = lo + (R - lo) * Real(unit(rng));
        double a = ang(rng);
        z[0] = rho * Real(std::cos(a));
        z[1] = rho * Real(std::sin(a));
      }
      State dz(2);
      f(t, z, dz);
      Real fn = norm2(dz), zn = norm2(z);
      for (int d = 1; d <= max_degree; ++d) {
        Real ratio = fn / (1 + pow(zn, static_cast<long>(d)));
        auto& slot = sh.sup_ratio[static_cast<std::size_t>(d - 1)];
        slot = max(slot, ratio);
      }
      ++rep.samples;
    }
    rep.shells.push_back(sh);
    prev = R;
  }
  for (int d = 1; d <= max_degree && rep.degree < 0; ++d) {
    bool ok = true;
    for (std::size_t i = 1; i < rep.shells.size(); ++i) {
      auto idx = static_cast<std::size_t>(d - 1);
      if (rep.shells[i].sup_ratio[idx] > rep.shells[i - 1].sup_ratio[idx] * Real(1.01)) ok = false;
    }
    if (ok) rep.degree = d;
  }
  return rep;
}

}  // namespace tmsim
