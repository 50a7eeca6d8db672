#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmsim/ode/iteration.hpp"
#include "tmsim/robust/robust_map.hpp"

namespace tmsim {

/// Constants of the analytic two-phase simulator.
struct SimulationParams {
  Real gamma;  // targeting error, 2 gamma + delta/2 <= 1/5
  Real delta;  // bound on additive right-hand-side noise
  Real eta;    // (gamma + delta)/2 + 1/5
  int l = 1;   // least l with |sigma^[l](eta)| <= gamma
  Real c1, c2;  // 4 / gamma^2
};

inline int least_sigma_depth(const Real& eta, const Real& gamma) {
  Real x = eta;
  for (int l = 1; l < 1000; ++l) {
    x = sigma(x);
    if (abs(x) <= gamma) return l;
  }
  throw ValidationError("sigma iterates do not reach gamma");
}

/// Parameters for noise bound delta. gamma defaults to the largest admissible value (1/5 - delta/2)/2.
inline SimulationParams make_simulation_params(const Real& delta, std::optional<Real> gamma = std::nullopt) {
  std::vector<std::string> problems;
  if (delta.sign() < 0 || delta >= decimal("0.4")) problems.push_back("delta must lie in [0, 2/5)");
  Real g = gamma.value_or((one_fifth() - delta / 2) / 2);
  if (g.sign() <= 0) problems.push_back("gamma must be positive");
  if (2 * g + delta / 2 > one_fifth()) problems.push_back("2 gamma + delta/2 must not exceed 1/5");
  if (!problems.empty()) {
    std::string msg = "invalid simulation parameters:";
    for (auto& p : problems) msg += " " + p + ";";
    throw ValidationError(msg);
  }
  SimulationParams p;
  p.gamma = g;
  p.delta = delta;
  p.eta = (g + delta) / 2 + one_fifth();
  p.l = least_sigma_depth(p.eta, g);
  p.c1 = 4 / (g * g);
  p.c2 = p.c1;
  return p;
}

/// Additive right-hand-side perturbation for the two equations.
struct OdeNoise {
  NoiseMode mode = NoiseMode::None;
  Real magnitude = 0;
  std::uint64_t seed = 0;

  std::array<ScalarFn, 2> functions() const {
    std::array<ScalarFn, 2> out;
    for (std::size_t i = 0; i < 2; ++i) {
      Real m = magnitude;
      switch (mode) {
        case NoiseMode::None:
          out[i] = nullptr;
          break;
        case NoiseMode::ConstantPlus:
          out[i] = [m](const Real&) { return m; };
          break;
        case NoiseMode::ConstantMinus:
          out[i] = [m](const Real&) { return -m; };
          break;
        case NoiseMode::Alternating:
          out[i] = [m](const Real& t) { return m * sin(two_pi() * t); };
          break;
        case NoiseMode::Uniform:
          out[i] = smooth_noise(m, seed * 2 + i);
          break;
      }
    }
    return out;
  }
};

struct WindowReport {
  long j;
  Nat expected;
  Real sup_error;
  Real eta;
  bool pass;
};

struct SimulationResult {
  Trajectory trajectory;
  std::vector<WindowReport> windows;
  bool pass = true;
  long first_failure = -1;
  // Halting persistence: sup |z2 - c_h| over t >= n0 + 1/2 (only when the machine halts in range).
  std::optional<long> halting_step;
  std::optional<Real> halting_sup;
};

/// Gate breakpoints: s(t) crosses 1/4 and 3/4 where the large-y gate limit has kinks.
inline std::vector<Real> gate_kinks_in_unit() {
  Real tp = two_pi();
  Real ua = (sqrt(Real(3)) - 1) / 2, ub = (sqrt(Real(7)) - 1) / 2;
  Real ta = asin(ua) / tp, tb = asin(ub) / tp;
  Real h = Real(0.5);
  return {ta, tb, h - tb, h - ta, h + ta, h + tb, 1 - tb, 1 - ta};
}

/// z1' = c1 (G - z1)^3 phi1,  z2' = c2 (sigma^[l](z1) - z2)^3 phi2 with G = sigma^[l] o g_M o sigma^[l](z2),
/// phi1 = phi(t, (c1/gamma)(z1 - G)^4 + c1/gamma + 10), phi2 = phi(-t, ...). g_M is compiled with budget eta/2.
class TwoPhaseSimulator {
 public:
  TwoPhaseSimulator(TuringMachine M, SimulationParams p, bool smooth = false)
      : p_(std::move(p)), g_(compile_map(M, p_.eta / 2, smooth)) {}

  const SimulationParams& params() const { return p_; }
  const CompiledMap& map() const { return g_; }

  Real target1(const Real& z2) const { return sigma_iter(g_.apply_total(sigma_iter(z2, p_.l)), p_.l); }

  /// Noise-free vector field h_M(t, z).
  void field(const Real& t, const State& z, State& dz) const {
    const Real& g = p_.gamma;
    Real d1 = target1(z[1]) - z[0];
    Real d2 = sigma_iter(z[0], p_.l) - z[1];
    Real y1 = p_.c1 / g * sqr(sqr(d1)) + p_.c1 / g + 10;
    Real y2 = p_.c2 / g * sqr(sqr(d2)) + p_.c2 / g + 10;
    dz[0] = p_.c1 * d1 * d1 * d1 * gate_phi(t, y1);
    dz[1] = p_.c2 * d2 * d2 * d2 * gate_phi(-t, y2);
  }

  Trajectory integrate(const Real& x0bar, const Real& y0bar, const Real& t_end, const OdeNoise& noise = {},
                       const OdeTolerances& tol = {}) const {
    if (noise.mode != NoiseMode::None && noise.magnitude > p_.delta)
      throw BadDelta("right-hand-side noise exceeds the parameter delta");
    IvpSpec spec;
    spec.state0 = {x0bar, y0bar};
    spec.abs_tol = tol.abs_tol;
    spec.rel_tol = tol.rel_tol;
    spec.max_step = tol.max_step;
    auto kinks = gate_kinks_in_unit();
    for (long k = 0; Real(k) < t_end; ++k) {
      spec.breakpoints.push_back(Real(k) + Real(0.5));
      for (auto& kk : kinks)
        if (Real(k) + kk < t_end) spec.breakpoints.push_back(Real(k) + kk);
    }
    std::sort(spec.breakpoints.begin(), spec.breakpoints.end());
    auto E = noise.functions();
    spec.rhs = [this, E](const Real& t, const State& z, State& dz) {
      field(t, z, dz);
      if (E[0]) dz[0] += E[0](t);
      if (E[1]) dz[1] += E[1](t);
    };
    return solve_ivp(spec, t_end);
  }

 private:
  SimulationParams p_;
  CompiledMap g_;
};

/// sup over the window [j, j+1/2] of |z2 - target|: 8 equispaced probes plus every solver node inside.
inline Real window_sup(const Trajectory& tr, const Real& a, const Real& b, const Real& target, int probes = 8) {
  Real worst = 0;
  for (int i = 0; i < probes; ++i) {
    Real t = a + (b - a) * Real(i) / Real(probes - 1);
    worst = max(worst, abs(tr.at(t)[1] - target));
  }
  auto& ts = tr.times();
  auto it = std::lower_bound(ts.begin(), ts.end(), a);
  for (; it != ts.end() && *it <= b; ++it)
    worst = max(worst, abs(tr.states()[static_cast<std::size_t>(it - ts.begin())][1] - target));
  return worst;
}

/// Total variation of z2 over [a, b] measured on the solver nodes and the window ends.
inline Real window_variation(const Trajectory& tr, const Real& a, const Real& b) {
  std::vector<Real> vals{tr.at(a)[1]};
  auto& ts = tr.times();
  for (auto it = std::upper_bound(ts.begin(), ts.end(), a); it != ts.end() && *it < b; ++it)
    vals.push_back(tr.states()[static_cast<std::size_t>(it - ts.begin())][1]);
  vals.push_back(tr.at(b)[1]);
  Real tv = 0;
  for (std::size_t i = 1; i < vals.size(); ++i) tv += abs(vals[i] - vals[i - 1]);
  return tv;
}

struct SimulateOptions {
  OdeNoise noise;
  OdeTolerances tol;
  bool smooth = false;
  bool throw_on_violation = false;
  int probes = 8;
};

/// Integrates the two-phase simulator over [0, steps + 1/2] and checks each window [j, j+1/2]
/// against psi^[j](x0) with bound eta.
inline SimulationResult simulate_2d(const TuringMachine& M, const SimulationParams& params, const Nat& x0,
                                    const Real& x0bar, const Real& y0bar, long steps,
                                    const SimulateOptions& opt = {}) {
  if (abs(x0bar - Real(x0)) > one_fifth() || abs(y0bar - Real(x0)) > one_fifth())
    throw NotNearConfiguration("initial values must lie within 1/5 of the configuration code");
  (void)decode_code(M, x0);
  TwoPhaseSimulator sim(M, params, opt.smooth);
  SimulationResult res;
  Real t_end = Real(steps) + Real(0.5);
  res.trajectory = sim.integrate(x0bar, y0bar, t_end, opt.noise, opt.tol);
  auto orbit = psi_orbit(M, x0, static_cast<std::size_t>(steps));
  for (long j = 0; j <= steps; ++j) {
    Real target(orbit[static_cast<std::size_t>(j)]);
    Real sup = window_sup(res.trajectory, Real(j), Real(j) + Real(0.5), target, opt.probes);
    bool ok = sup <= params.eta;
    res.windows.push_back({j, orbit[static_cast<std::size_t>(j)], sup, params.eta, ok});
    if (!ok && res.pass) {
      res.pass = false;
      res.first_failure = j;
    }
  }
  for (long j = 0; j <= steps; ++j)
    if (is_halting_code(M, orbit[static_cast<std::size_t>(j)])) {
      res.halting_step = j;
      Real target(orbit[static_cast<std::size_t>(j)]);
      Real sup = 0;
      Real from = Real(j) + Real(0.5);
      for (long k = 0; Real(from) + Real(k) / Real(16) <= t_end; ++k)
        sup = max(sup, abs(res.trajectory.at(from + Real(k) / Real(16))[1] - target));
      auto& ts = res.trajectory.times();
      for (auto it = std::lower_bound(ts.begin(), ts.end(), from); it != ts.end(); ++it)
        sup = max(sup, abs(res.trajectory.states()[static_cast<std::size_t>(it - ts.begin())][1] - target));
      res.halting_sup = sup;
      break;
    }
  if (!res.pass && opt.throw_on_violation)
    throw ContractViolation("window bound eta violated", res.first_failure);
  return res;
}

}  // namespace tmsim
