#pragma once

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tmsim/sphere/sphere.hpp"

namespace tmsim {

struct CaseRecord {
  std::string id;
  Real value;
  Real bound;
  bool pass;
};

/// Outcome of one verification suite. worst_margin is the least relative slack (bound - value) / |bound|.
struct SuiteReport {
  explicit SuiteReport(std::string name = {}) : suite(std::move(name)) {}

  std::string suite;
  long cases = 0;
  long failures = 0;
  std::optional<Real> worst_margin;
  double seconds = 0;
  std::vector<CaseRecord> records;
  std::vector<std::string> notes;
  bool evidence_only = false;

  bool pass() const { return cases > 0 && failures == 0; }

  bool check(const std::string& id, const Real& value, const Real& bound, bool strict = false, bool keep = false) {
    bool ok = strict ? value < bound : value <= bound;
    ++cases;
    if (!ok) ++failures;
    Real margin = bound.is_zero() ? -value : (bound - value) / abs(bound);
    if (!worst_margin || margin < *worst_margin) worst_margin = margin;
    if (keep || (!ok && failures <= 50)) records.push_back({id, value, bound, ok});
    return ok;
  }

  void fail(const std::string& id, const std::string& why) {
    ++cases;
    ++failures;
    notes.push_back(id + ": " + why);
  }
};

struct MachineCase {
  std::string name;
  TuringMachine M;
  std::string input;
};

inline std::vector<MachineCase> default_machine_cases() {
  return {{"unary-successor", parse_tm(machines::unary_successor), "11"},
          {"busy-beaver-2", parse_tm(machines::busy_beaver_2), ""}};
}

inline Nat start_code(const MachineCase& mc) { return encode_code(mc.M, initial_config(mc.M, parse_word(mc.M, mc.input))); }

namespace detail {

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline const char* noise_name(NoiseMode m) {
  switch (m) {
    case NoiseMode::None: return "none";
    case NoiseMode::Uniform: return "uniform";
    case NoiseMode::ConstantPlus: return "const+";
    case NoiseMode::ConstantMinus: return "const-";
    case NoiseMode::Alternating: return "alternating";
  }
  return "?";
}

}  // namespace detail

/// Interval-certified |Psi(x, y) - k| < e^{-y} |x - k| for 0 < |x - k| <= 1/5, y in [0, 60], |k| <= 1000.
/// x = k itself is excluded: both sides are then 0 and the strict inequality cannot hold.
inline SuiteReport suite_psi_contraction(std::uint64_t seed, long samples = 100000) {
  detail::Stopwatch sw;
  SuiteReport rep{"psi-contraction"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-0.2, 0.2), uy(0, 60);
  std::uniform_int_distribution<int> uk(-1000, 1000);
  for (long i = 0; i < samples; ++i) {
    double d = ud(rng);
    while (d == 0) d = ud(rng);
    Real k(uk(rng)), y(uy(rng));
    Interval v = detail::psi_point_interval(k + Real(d), y);
    Interval err = abs(v - k);
    Interval bound = exp(-Interval(y)) * abs(Interval(Real(d)));
    rep.check("k=" + k.str(6) + " d=" + Real(d).str(17) + " y=" + y.str(17), err.hi(), bound.lo(), true);
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// |sigma(n + d) - n| <= (0.4 pi - 1) |d| for |d| <= 1/4.
inline SuiteReport suite_sigma_contraction(std::uint64_t seed, long samples = 10000) {
  detail::Stopwatch sw;
  SuiteReport rep{"sigma-contraction"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-0.25, 0.25);
  std::uniform_int_distribution<int> un(-1000, 1000);
  Real lam = lambda_quarter();
  rep.notes.push_back("lambda = " + lam.str(10));
  for (long i = 0; i < samples; ++i) {
    Real n(un(rng)), d(ud(rng));
    rep.check("n=" + n.str(6) + " d=" + d.str(17), abs(sigma(n + d) - n), lam * abs(d));
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Plateaus of r, the switch xi, and the gate's smallness on the second half period.
inline SuiteReport suite_bump_and_gate(std::uint64_t seed, long samples = 2000) {
  detail::Stopwatch sw;
  SuiteReport rep{"bump-and-gate"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uu(-0.25, 0.25), ux(0, 1), uy(0, 50);
  std::uniform_int_distribution<int> un(-500, 500);
  for (long i = 0; i < samples; ++i) {
    Real n(un(rng)), u(uu(rng));
    rep.check("r plateau n=" + n.str(6), abs(r_floor(n + u) - n), Real(0));
    Real a(ux(rng)), b(ux(rng));
    if (b < a) std::swap(a, b);
    Real ra = r_floor(n + Real(0.25) + a / 2), rb = r_floor(n + Real(0.25) + b / 2);
    rep.check("r monotone n=" + n.str(6), ra - rb, Real(0));
    Real x(ux(rng));
    Real lo = x / 4, hi = Real(0.75) + x / 4;
    rep.check("xi low x=" + lo.str(10), xi(lo), Real(0));
    rep.check("xi high x=" + hi.str(10), abs(xi(hi) - 1), Real(0));
    Real t = n + Real(0.5) + x / 2, y(uy(rng));
    rep.check("gate t=" + t.str(10) + " y=" + y.str(6), abs(gate_phi(t, y)), exp(-y) / 8, true);
  }
  rep.seconds = sw.seconds();
  return rep;
}

inline SuiteReport suite_kernels(std::uint64_t seed) {
  detail::Stopwatch sw;
  SuiteReport rep{"kernels"};
  for (auto part : {suite_psi_contraction(seed, 20000), suite_sigma_contraction(seed + 1), suite_bump_and_gate(seed + 2)}) {
    rep.cases += part.cases;
    rep.failures += part.failures;
    if (part.worst_margin && (!rep.worst_margin || *part.worst_margin < *rep.worst_margin))
      rep.worst_margin = part.worst_margin;
    for (auto& r : part.records) rep.records.push_back({part.suite + " " + r.id, r.value, r.bound, r.pass});
    rep.notes.push_back(part.suite + ": " + std::to_string(part.cases) + " cases, " + std::to_string(part.failures) +
                        " failures");
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Exhaustive I_3 / J_3 round trips on entries < side, plus Upsilon_3 robustness on perturbed tuples.
inline SuiteReport suite_pairing(std::uint64_t seed, int side = 50, long perturbed = 10000) {
  detail::Stopwatch sw;
  SuiteReport rep{"pairing"};
  std::vector<Nat> codes;
  codes.reserve(static_cast<std::size_t>(side) * side * side);
  long bad = 0;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b)
      for (int c = 0; c < side; ++c) {
        Nat z = pair_k({Nat(a), Nat(b), Nat(c)});
        auto back = unpair_k(z, 3);
        if (back[0] != a || back[1] != b || back[2] != c) ++bad;
        codes.push_back(z);
      }
  rep.check("J3 o I3 = id on " + std::to_string(codes.size()) + " triples", Real(bad), Real(0), false, true);
  std::sort(codes.begin(), codes.end());
  long distinct = std::unique(codes.begin(), codes.end()) - codes.begin();
  rep.check("I3 injective", Real(static_cast<long>(codes.size()) - distinct), Real(0), false, true);
  long bad_inv = 0;
  long total = static_cast<long>(side) * side * side;
  for (long n = 0; n < total; ++n)
    if (pair_k(unpair_k(Nat(n), 3)) != n) ++bad_inv;
  rep.check("I3 o J3 = id on [0, " + std::to_string(total) + ")", Real(bad_inv), Real(0), false, true);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> un(0, 40);
  std::normal_distribution<double> dir(0, 1);
  std::uniform_real_distribution<double> rad(0, 0.2);
  for (long i = 0; i < perturbed; ++i) {
    int y[3] = {un(rng), un(rng), un(rng)};
    double d[3] = {dir(rng), dir(rng), dir(rng)};
    double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    double r = rad(rng);
    std::vector<Real> x;
    Real dist2 = 0;
    for (int j = 0; j < 3; ++j) {
      Real off(r * d[j] / norm);
      x.push_back(Real(y[j]) + off);
      dist2 += off * off;
    }
    Real want(pair_k({Nat(y[0]), Nat(y[1]), Nat(y[2])}));
    rep.check("upsilon (" + std::to_string(y[0]) + "," + std::to_string(y[1]) + "," + std::to_string(y[2]) + ")",
              abs(upsilon_k(x) - want), sqrt(dist2));
  }
  rep.notes.push_back("Upsilon_3 distance is Euclidean");
  rep.seconds = sw.seconds();
  return rep;
}

/// Randomized instances of the targeting lemma and its perturbed form; the first uses b = 5, gamma = 1/5, c = 206.
inline SuiteReport suite_targeting(std::uint64_t seed, int instances = 200) {
  detail::Stopwatch sw;
  SuiteReport rep{"targeting"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ub(-20, 20), ug(0.05, 0.3), uy(-100, 100), ur(0, 0.1), ud(0, 0.2), uc(1, 1.5);
  Real I = gate_integral(theta_sin, Real(0), Real(0.5));
  for (int i = 0; i < instances; ++i) {
    TargetingSpec s;
    s.phi = theta_sin;
    Real y0;
    if (i == 0) {
      s.b = Real(5);
      s.gamma = Real(0.2);
      s.c = Real(206);
      y0 = Real(-100);
    } else {
      s.b = Real(ub(rng));
      s.gamma = Real(ug(rng));
      s.c = min_gain(s.gamma, I) * Real(uc(rng));
      y0 = Real(uy(rng));
    }
    std::string id = "#" + std::to_string(i) + " b=" + s.b.str(8) + " gamma=" + s.gamma.str(6);
    rep.check(id + " plain", abs(target_solve(s, y0).final_state()[0] - s.b), s.gamma, true, i == 0);
    s.rho = i == 0 ? Real(0.05) : Real(ur(rng));
    s.delta = i == 0 ? Real(0.1) : Real(ud(rng));
    Real rho = s.rho, b = s.b, w(1 + (i % 7));
    ScalarFn bbar = [b, rho, w](const Real& t) { return b + rho * sin(two_pi() * w * t); };
    ScalarFn E;
    Real dl = s.delta;
    switch (i % 4) {
      case 0: E = [dl](const Real&) { return dl; }; break;
      case 1: E = [dl](const Real&) { return -dl; }; break;
      case 2: E = [dl](const Real& t) { return dl * sin(two_pi() * t); }; break;
      default: E = smooth_noise(dl, seed + static_cast<std::uint64_t>(i)); break;
    }
    rep.check(id + " perturbed", abs(target_perturbed(s, y0, bbar, E).final_state()[0] - s.b), perturbed_bound(s), true,
              i == 0);
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Two-phase iteration of 2^x from 1: z2 within 1/5 of 2, 4, 16, 65536 on [1, 1.5] .. [4, 4.5].
inline SuiteReport suite_iteration(std::uint64_t, int probes = 8) {
  detail::Stopwatch sw;
  SuiteReport rep{"iteration-2x"};
  auto tr = iterate_ode([](const Real& x) { return pow(Real(2), x); }, Real(1), Real(4));
  const long want[] = {1, 2, 4, 16, 65536};
  for (int k = 0; k <= 3; ++k)
    rep.check("window [" + std::to_string(k) + ", " + std::to_string(k) + ".5]",
              window_sup(tr, Real(k), Real(k) + Real(0.5), Real(want[k]), probes), Real(0.2), false, true);
  rep.check("window [4, 4.5]", abs(tr.final_state()[1] - Real(want[4])), Real(0.2), false, true);
  rep.notes.push_back("on [4, 4.5] the z2 gate theta(-sin 2 pi t) is identically 0, so z2 equals z2(4) there; "
                      "integration stops at t = 4");
  rep.seconds = sw.seconds();
  return rep;
}

/// Noisy iteration of the compiled map from x0 +- offset under every noise mode; |x_n - psi^[n](x0)| <= 1/5.
inline SuiteReport suite_map(const std::vector<MachineCase>& cases, const Real& delta, long steps, const Real& offset,
                             std::uint64_t seed) {
  detail::Stopwatch sw;
  SuiteReport rep{"map"};
  for (auto& mc : cases) {
    auto g = compile_map(mc.M, delta);
    Nat c0 = start_code(mc);
    auto orbit = psi_orbit(mc.M, c0, static_cast<std::size_t>(steps));
    rep.notes.push_back(mc.name + ": x0 = " + c0.get_str() + ", j_contract = " + std::to_string(g.j_contract()));
    for (auto mode : {NoiseMode::Uniform, NoiseMode::ConstantPlus, NoiseMode::ConstantMinus, NoiseMode::Alternating})
      for (int sgn : {1, -1}) {
        Real start = Real(c0) + Real(sgn) * offset;
        if (start.sign() < 0) continue;
        auto xs = iterate_noisy(g, start, static_cast<std::size_t>(steps), NoiseSpec(mode, delta, seed));
        for (std::size_t n = 0; n < xs.size(); ++n)
          rep.check(mc.name + " " + detail::noise_name(mode) + (sgn > 0 ? " +" : " -") + " n=" + std::to_string(n),
                    abs(xs[n] - Real(orbit[n])), one_fifth());
      }
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// The two-phase ODE simulator: window sups against eta, and halting persistence 1/5 when delta = 0.
inline SuiteReport suite_ode(const std::vector<MachineCase>& cases, const std::vector<Real>& deltas, long steps,
                             std::uint64_t seed, int probes = 8) {
  detail::Stopwatch sw;
  SuiteReport rep{"ode"};
  Real off = decimal("0.19");
  for (auto& mc : cases) {
    Nat c0 = start_code(mc);
    for (auto& delta : deltas) {
      auto p = make_simulation_params(delta);
      std::vector<NoiseMode> modes;
      if (delta.is_zero())
        modes = {NoiseMode::None};
      else
        modes = {NoiseMode::Uniform, NoiseMode::ConstantPlus, NoiseMode::ConstantMinus, NoiseMode::Alternating};
      for (auto mode : modes) {
        SimulateOptions o;
        o.noise = OdeNoise{mode, mode == NoiseMode::None ? Real(0) : delta, seed};
        o.probes = probes;
        auto r = simulate_2d(mc.M, p, c0, Real(c0) + off, Real(c0) - off, steps, o);
        std::string id = mc.name + " delta=" + delta.str(3) + " " + detail::noise_name(mode);
        for (auto& w : r.windows) rep.check(id + " j=" + std::to_string(w.j), w.sup_error, w.eta, false, true);
        if (delta.is_zero() && r.halting_step) {
          rep.check(id + " halting after j=" + std::to_string(*r.halting_step), *r.halting_sup, one_fifth(), false, true);
        }
      }
    }
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Omega-tilde ODEs: x2(n + 1/4) within 1/4 of J_{2,i}(n), and within 1/5 after sigma.
inline SuiteReport suite_omega(long n_max) {
  detail::Stopwatch sw;
  SuiteReport rep{"omega"};
  for (auto which : {PairInverse::J21, PairInverse::J22}) {
    int comp = which == PairInverse::J21 ? 1 : 2;
    auto tr = omega_tilde_trajectory(which, Real(n_max) + Real(0.5));
    for (long n = 0; n <= n_max; ++n) {
      Real want(unpair_component(Nat(n), 2, comp));
      Real raw = omega_tilde_raw(tr, Real(n));
      std::string id = std::string(comp == 1 ? "J21" : "J22") + " n=" + std::to_string(n);
      rep.check(id + " raw", abs(raw - want), Real(0.25), false, true);
      rep.check(id + " sigma", abs(sigma(raw) - want), one_fifth(), false, true);
    }
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Sphere transport: tangency, decay toward the pole, chart/planar/ambient agreement, decoded orbits via tau^{-1}.
inline SuiteReport suite_sphere(std::uint64_t seed, long tangency_samples = 10000, long orbit_steps = 5) {
  detail::Stopwatch sw;
  SuiteReport rep{"sphere"};
  auto succ = parse_tm(machines::unary_successor);
  auto p0 = make_simulation_params(Real(0));
  auto F = simulating_sphere_field(succ, p0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-100, 100), ut(0, 4), ue(-8, 2);
  Real worst_dot = 0;
  long bad = 0;
  for (long i = 0; i < tangency_samples; ++i) {
    State x{Real(ux(rng)), Real(ux(rng))};
    if (i % 4 == 3) {
      Real s = pow(Real(10), Real(ue(rng)));
      x = {x[0] * s * 100, x[1] * s * 100};
    }
    State y = stereo(x);
    State v = sphere_field(F, Real(ut(rng)), y);
    Real d = 0;
    for (std::size_t k = 0; k < 3; ++k) d += v[k] * y[k];
    worst_dot = max(worst_dot, abs(d));
    if (abs(d) > Real("1e-30")) ++bad;
  }
  rep.check("tangency |<v, y>| over " + std::to_string(tangency_samples) + " samples", worst_dot, Real("1e-30"), false,
            true);

  for (double t : {0.1, 0.3, 0.6, 0.9})
    for (State u : {State{Real(1), Real(0)}, State{Real(0), Real(1)}, State{Real(1), Real(1)}, State{Real(-2), Real(1)}}) {
      auto norms = pole_decay_probe(F, Real(t), u);
      Real worst_ratio = 0;
      for (std::size_t i = 1; i < norms.size(); ++i) worst_ratio = max(worst_ratio, norms[i] / norms[i - 1]);
      std::string id = "decay t=" + Real(t).str(2) + " u=(" + u[0].str(2) + "," + u[1].str(2) + ")";
      rep.check(id + " max successive ratio", worst_ratio, Real(1), true, true);
      rep.check(id + " norm at 1 - y0 = 1e-8", norms.back(), Real("1e-100"), true, true);
    }

  SphereOptions opt;
  Real tol = opt.tol.abs_tol;
  {
    // Smooth planar field: strict 10x local tolerance.
    SphereField R;
    R.base = [](const Real&, const State& x, State& dx) {
      dx[0] = -x[1] + Real(0.1);
      dx[1] = x[0];
    };
    State x0{Real(2), Real(-1)};
    Real t_end(4);
    auto chart = integrate_sphere(R, stereo(x0), t_end, opt);
    auto amb = integrate_sphere_ambient(R, stereo(x0), t_end, opt);
    auto planar = integrate_planar(R, x0, chart.final_state()[0], {}, opt);
    Real e_planar = 0, e_amb = 0, e_norm = 0;
    for (int i = 0; i <= 1000; ++i) {
      Real t = t_end * Real(i) / Real(1000);
      State s = chart.at(t);
      State pl = planar.at(s[0]);
      for (std::size_t k = 0; k < 2; ++k) e_planar = max(e_planar, abs(pl[k] - s[k + 1]) / (1 + abs(pl[k])));
      State y = sphere_point(chart, t), a = amb.at(t);
      for (std::size_t k = 0; k < 3; ++k) e_amb = max(e_amb, abs(a[k + 1] - y[k]));
      e_norm = max(e_norm, abs(norm2(State(a.begin() + 1, a.end())) - 1));
    }
    rep.check("smooth field: planar x(tau(t)) vs chart (scaled)", e_planar, 10 * tol, false, true);
    rep.check("smooth field: ambient vs chart on the sphere", e_amb, 10 * tol, false, true);
    rep.check("smooth field: ambient |y| - 1", e_norm, 10 * tol, false, true);
  }

  struct OrbitCase {
    std::string name;
    TuringMachine M;
    std::string input;
  };
  std::vector<OrbitCase> orbit_cases{{"unary-successor", succ, "1"},
                                     {"busy-beaver-2", parse_tm(machines::busy_beaver_2), ""}};
  for (auto& oc : orbit_cases) {
    auto G = simulating_sphere_field(oc.M, p0);
    Nat c0 = encode_code(oc.M, initial_config(oc.M, parse_word(oc.M, oc.input)));
    Real off = decimal("0.19");
    State x0{Real(c0) + off, Real(c0) - off};
    Real tau_end = Real(orbit_steps) + Real(0.5);
    std::vector<Real> bps;
    for (long k = 1; Real(k) / 2 <= tau_end; ++k) bps.push_back(Real(k) / 2);
    auto planar = integrate_planar(G, x0, tau_end, bps, opt);
    SphereOptions half = opt;
    half.tol.abs_tol = opt.tol.abs_tol / 2;
    half.tol.rel_tol = opt.tol.rel_tol / 2;
    auto planar_half = integrate_planar(G, x0, tau_end, bps, half);
    Real te = tau_inv(G, planar, tau_end, opt);
    auto chart = integrate_sphere(G, stereo(x0), te, opt);
    auto amb = integrate_sphere_ambient(G, stereo(x0), te, opt);
    Real e_planar = 0, e_half = 0, e_amb = 0;
    for (int i = 0; i <= 1000; ++i) {
      Real t = te * Real(i) / Real(1000);
      State s = chart.at(t);
      if (s[0] > tau_end) continue;
      State pl = planar.at(s[0]), ph = planar_half.at(s[0]);
      for (std::size_t k = 0; k < 2; ++k) {
        e_planar = max(e_planar, abs(pl[k] - s[k + 1]));
        e_half = max(e_half, abs(pl[k] - ph[k]));
      }
      State y = sphere_point(chart, t), a = amb.at(t);
      for (std::size_t k = 0; k < 3; ++k) e_amb = max(e_amb, abs(a[k + 1] - y[k]));
    }
    rep.notes.push_back(oc.name + ": global planar error from tolerance halving " + e_half.str(4) + ", chart vs planar " +
                        e_planar.str(4) + ", ambient vs chart " + e_amb.str(4));
    rep.check(oc.name + " chart vs planar within 10x halving deviation", e_planar, 10 * e_half, false, true);
    rep.check(oc.name + " ambient vs chart within 10x halving deviation", e_amb, 10 * e_half, false, true);

    auto orbit = psi_orbit(oc.M, c0, static_cast<std::size_t>(orbit_steps));
    for (long j = 0; j <= orbit_steps; ++j) {
      Real a = Real(j) + Real(0.25);
      Real tj = tau_inv(G, planar, a, opt);
      State y = sphere_point(chart, tj);
      State x = stereo_inv(y);
      Real want(orbit[static_cast<std::size_t>(j)]);
      rep.check(oc.name + " decoded z2 at tau^-1(" + a.str(4) + ")", abs(x[1] - want), Real(0.25), false, true);
    }
  }
  rep.seconds = sw.seconds();
  return rep;
}

/// Sampled growth of the smooth simulator field: least d <= 8 with sup |f| / (1 + |z|^d) not increasing outward.
inline SuiteReport suite_growth(std::uint64_t seed, int samples_per_shell = 400) {
  detail::Stopwatch sw;
  SuiteReport rep{"growth"};
  rep.evidence_only = true;
  for (auto& mc : default_machine_cases()) {
    auto F = simulating_sphere_field(mc.M, make_simulation_params(Real(0)), true);
    std::vector<Nat> codes;
    for (const char* w : {"", "1", "11", "111", "1111", "11111", "111111"}) {
      Word word;
      try {
        word = parse_word(mc.M, w);
      } catch (const Error&) {
        continue;
      }
      for (auto& c : run_n(mc.M, initial_config(mc.M, word), 8)) codes.push_back(encode_code(mc.M, c));
    }
    auto g = growth_probe(F.base, {Real(10), Real(100), Real(1000), Real(10000)}, Real(4), 8, samples_per_shell, seed,
                          codes);
    std::string line = mc.name + ": degree " + std::to_string(g.degree) + ", shell sups for that degree:";
    if (g.degree > 0)
      for (auto& sh : g.shells) line += " " + sh.sup_ratio[static_cast<std::size_t>(g.degree - 1)].str(4);
    rep.notes.push_back(line);
    rep.check(mc.name + " exhibited degree", Real(g.degree < 1 ? 99 : g.degree), Real(8), false, true);
  }
  rep.notes.push_back("sampling evidence on |z| <= 1e4, t in [0, 4]; not a proof of polynomial boundedness");
  rep.seconds = sw.seconds();
  return rep;
}

}  // namespace tmsim
