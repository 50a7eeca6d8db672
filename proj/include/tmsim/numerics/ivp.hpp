#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tmsim/numerics/real.hpp"

namespace tmsim {

using State = std::vector<Real>;
using VectorField = std::function<void(const Real& t, const State& y, State& dy)>;

struct IvpSpec {
  VectorField rhs;
  Real t0 = 0;
  State state0;
  Real abs_tol = Real("1e-12");
  Real rel_tol = Real("1e-12");
  Real max_step = Real("0.01");

  // Optional: step is truncated to land exactly on these times.
  std::vector<Real> breakpoints;
  // Optional: state-dependent step cap, combined with max_step.
  std::function<Real(const Real& t, const State& y)> step_limit;
  // Optional: applied to every accepted state (e.g. renormalization onto a manifold).
  std::function<void(State& y)> project;
  std::optional<Real> initial_step;
  Real blowup_ceiling = ldexp_one(1L << 20);
  long max_steps = 5000000;
  // When false only the nodes are kept and queries between nodes are not available.
  bool keep_dense = true;
};

void validate(const IvpSpec& spec);

/// Piecewise quartic dense output of an embedded 5(4) Runge-Kutta run.
class Trajectory {
 public:
  struct Segment {
    Real t, h;
    std::vector<State> rcont;  // 5 coefficient vectors
  };

  Trajectory() = default;
  explicit Trajectory(std::shared_ptr<const IvpSpec> spec) : spec_(std::move(spec)) {}

  const IvpSpec& spec() const { return *spec_; }
  const std::vector<Real>& times() const { return times_; }
  const std::vector<State>& states() const { return states_; }
  const Real& t0() const { return times_.front(); }
  const Real& t_end() const { return times_.back(); }
  const State& final_state() const { return states_.back(); }
  std::size_t dimension() const { return states_.empty() ? 0 : states_.front().size(); }
  std::size_t steps() const { return times_.size() - 1; }
  long rejected_steps() const { return rejected_; }
  long rhs_evaluations() const { return evaluations_; }

  /// State at time t in [t0, t_end]. Stored nodes are returned exactly.
  State at(const Real& t) const {
    if (t < times_.front() || t > times_.back())
      throw DomainError("query time " + t.str(12) + " outside trajectory [" + times_.front().str(12) + ", " +
                        times_.back().str(12) + "]");
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - times_.begin());
    if (it != times_.end() && *it == t) return states_[idx];
    if (segments_.empty()) throw DomainError("trajectory was built without dense output");
    const Segment& s = segments_[idx - 1];
    Real th = (t - s.t) / s.h, th1 = 1 - th;
    State y(s.rcont[0].size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = s.rcont[0][i] + th * (s.rcont[1][i] + th1 * (s.rcont[2][i] + th * (s.rcont[3][i] + th1 * s.rcont[4][i])));
    return y;
  }
  Real component(const Real& t, std::size_t i) const { return at(t)[i]; }

  /// CSV with header t,state_0,...; values at full precision.
  void write_csv(std::ostream& os) const {
    os << "t";
    for (std::size_t i = 0; i < dimension(); ++i) os << ",state_" << i;
    os << "\n";
    for (std::size_t k = 0; k < times_.size(); ++k) {
      os << times_[k].str();
      for (const auto& v : states_[k]) os << "," << v.str();
      os << "\n";
    }
  }

 private:
  friend Trajectory solve_ivp(const IvpSpec& spec, const Real& t_end);
  std::shared_ptr<const IvpSpec> spec_;
  std::vector<Real> times_;
  std::vector<State> states_;
  std::vector<Segment> segments_;
  long rejected_ = 0;
  long evaluations_ = 0;
};

namespace detail {

struct Dopri5Tableau {
  long bits;
  Real c[7];
  Real a[7][6];
  Real b[7];
  Real e[7];  // fifth minus fourth order weights
  Real d[7];  // dense output

  explicit Dopri5Tableau(long bits_) : bits(bits_) {
    auto q = [&](long n, long m) { return Real::with_prec(bits) + Real(n) / Real(m); };
    for (auto& row : a)
      for (auto& v : row) v = Real::with_prec(bits);
    c[0] = q(0, 1); c[1] = q(1, 5); c[2] = q(3, 10); c[3] = q(4, 5); c[4] = q(8, 9); c[5] = q(1, 1); c[6] = q(1, 1);
    a[1][0] = q(1, 5);
    a[2][0] = q(3, 40); a[2][1] = q(9, 40);
    a[3][0] = q(44, 45); a[3][1] = q(-56, 15); a[3][2] = q(32, 9);
    a[4][0] = q(19372, 6561); a[4][1] = q(-25360, 2187); a[4][2] = q(64448, 6561); a[4][3] = q(-212, 729);
    a[5][0] = q(9017, 3168); a[5][1] = q(-355, 33); a[5][2] = q(46732, 5247); a[5][3] = q(49, 176);
    a[5][4] = q(-5103, 18656);
    a[6][0] = q(35, 384); a[6][1] = q(0, 1); a[6][2] = q(500, 1113); a[6][3] = q(125, 192); a[6][4] = q(-2187, 6784);
    a[6][5] = q(11, 84);
    for (int i = 0; i < 6; ++i) b[i] = a[6][i];
    b[6] = q(0, 1);
    e[0] = q(71, 57600); e[1] = q(0, 1); e[2] = q(-71, 16695); e[3] = q(71, 1920); e[4] = q(-17253, 339200);
    e[5] = q(22, 525); e[6] = q(-1, 40);
    d[0] = q(-12715105075L, 11282082432L); d[1] = q(0, 1); d[2] = q(87487479700L, 32700410799L);
    d[3] = q(-10690763975L, 1880347072L); d[4] = q(701980252875L, 199316789632L); d[5] = q(-1453857185L, 822651844L);
    d[6] = q(69997945L, 29380423L);
  }
};

inline const Dopri5Tableau& dopri5_tableau(long bits) {
  thread_local std::vector<std::unique_ptr<Dopri5Tableau>> cache;
  for (auto& t : cache)
    if (t->bits == bits) return *t;
  cache.push_back(std::make_unique<Dopri5Tableau>(bits));
  return *cache.back();
}

inline double clamp_factor(const Real& err) {
  double e = err.to_double();
  if (!(e == e)) return 0.2;
  if (e <= 0) return 5.0;
  return std::min(5.0, std::max(0.2, 0.9 * std::pow(e, -0.2)));
}

}  // namespace detail

inline void validate(const IvpSpec& spec) {
  if (!spec.rhs) throw DomainError("IvpSpec.rhs is empty");
  if (spec.abs_tol.sign() <= 0 || spec.rel_tol.sign() <= 0) throw DomainError("tolerances must be positive");
  if (spec.max_step.sign() <= 0) throw DomainError("max_step must be positive");
  if (spec.state0.empty()) throw DomainError("empty initial state");
}

/// Dormand-Prince 5(4) with the standard quartic continuous extension.
inline Trajectory solve_ivp(const IvpSpec& spec_in, const Real& t_end) {
  validate(spec_in);
  if (t_end < spec_in.t0) throw DomainError("t_end must not precede t0");
  auto spec = std::make_shared<const IvpSpec>(spec_in);
  Trajectory traj(spec);
  const long bits = default_precision();
  const auto& T = detail::dopri5_tableau(bits);
  const std::size_t n = spec->state0.size();

  auto f = [&](const Real& t, const State& y, State& dy) {
    dy.resize(n);
    spec->rhs(t, y, dy);
    ++traj.evaluations_;
  };

  std::vector<Real> stops;
  for (const auto& b : spec->breakpoints)
    if (b > spec->t0 && b < t_end) stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  stops.push_back(t_end);
  std::size_t next_stop = 0;

  Real t = spec->t0;
  State y = spec->state0;
  if (spec->project) spec->project(y);
  traj.times_.push_back(t);
  traj.states_.push_back(y);
  if (t_end == t) return traj;

  std::vector<State> k(7, State(n));
  f(t, y, k[0]);

  auto norm_scaled = [&](const State& v, const State& y0, const State& y1) {
    Real s = Real::with_prec(bits);
    for (std::size_t i = 0; i < n; ++i) {
      Real sc = spec->abs_tol + spec->rel_tol * max(abs(y0[i]), abs(y1[i]));
      s += sqr(v[i] / sc);
    }
    return sqrt(s / Real(static_cast<long>(n)));
  };

  auto cap = [&](const Real& tt, const State& yy) {
    Real m = spec->max_step;
    if (spec->step_limit) m = min(m, spec->step_limit(tt, yy));
    return m;
  };

  Real h;
  if (spec->initial_step) {
    h = *spec->initial_step;
  } else {
    // Starting step from the scaled size of y and y'.
    Real d0 = norm_scaled(y, y, y), d1 = norm_scaled(k[0], y, y);
    h = (d0 < Real("1e-5") || d1 < Real("1e-5")) ? Real("1e-6") : Real("0.01") * d0 / d1;
    State y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h * k[0][i];
    f(t + h, y1, f1);
    State diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = f1[i] - k[0][i];
    Real d2 = norm_scaled(diff, y, y) / h;
    Real mx = max(d1, d2);
    Real h1 = mx <= Real("1e-15") ? max(Real("1e-6"), h * Real("1e-3")) : pow(Real("0.01") / mx, Real("0.2"));
    h = min(Real(100) * h, h1);
  }
  h = min(h, cap(t, y));

  const Real min_rel = ldexp_one(-(bits - 8), bits);
  State ytmp(n), ynew(n), yerr(n);
  long accepted = 0;
  bool last_rejected = false;

  while (t < t_end) {
    if (++accepted > spec->max_steps) throw NonConvergence("solve_ivp exceeded the step budget at t=" + t.str(12));
    Real limit = cap(t, y);
    if (h > limit) h = limit;
    const Real& stop = stops[next_stop];
    bool hits_stop = false;
    if (t + h >= stop || (stop - t - h) < h * Real("1e-9")) {
      h = stop - t;
      hits_stop = true;
    }
    if (h <= min_rel * max(Real(1), abs(t)))
      throw StepUnderflow("step size " + h.str(6) + " below working precision at t=" + t.str(20));

    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        Real acc = Real::with_prec(bits);
        for (int j = 0; j < s; ++j)
          if (!T.a[s][j].is_zero()) acc += T.a[s][j] * k[j][i];
        ytmp[i] = y[i] + h * acc;
      }
      f(t + T.c[s] * h, ytmp, k[s]);
    }
    // The last stage is evaluated at the fifth order solution.
    ynew = ytmp;
    for (std::size_t i = 0; i < n; ++i) {
      Real e = Real::with_prec(bits);
      for (int j = 0; j < 7; ++j)
        if (!T.e[j].is_zero()) e += T.e[j] * k[j][i];
      yerr[i] = h * e;
    }
    Real err = norm_scaled(yerr, y, ynew);
    bool finite = err.is_finite();
    for (const auto& v : ynew) finite = finite && v.is_finite();

    if (finite && err <= 1) {
      Trajectory::Segment seg;
      if (spec->keep_dense) {
        seg.t = t;
        seg.h = h;
        seg.rcont.assign(5, State(n));
        for (std::size_t i = 0; i < n; ++i) {
          Real dlt = ynew[i] - y[i];
          Real bspl = h * k[0][i] - dlt;
          Real dd = Real::with_prec(bits);
          for (int j = 0; j < 7; ++j)
            if (!T.d[j].is_zero()) dd += T.d[j] * k[j][i];
          seg.rcont[0][i] = y[i];
          seg.rcont[1][i] = dlt;
          seg.rcont[2][i] = bspl;
          seg.rcont[3][i] = dlt - h * k[6][i] - bspl;
          seg.rcont[4][i] = h * dd;
        }
      }
      Real tnew = hits_stop ? stop : t + h;
      if (hits_stop) ++next_stop;
      y = ynew;
      t = tnew;
      if (spec->project) {
        spec->project(y);
        f(t, y, k[0]);
      } else {
        k[0] = k[6];
      }
      if (max_abs(y) > spec->blowup_ceiling)
        throw BlowUp("state norm exceeded the ceiling at t=" + t.str(12));
      traj.times_.push_back(t);
      traj.states_.push_back(y);
      if (spec->keep_dense) traj.segments_.push_back(std::move(seg));
      double fac = detail::clamp_factor(err);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = h * Real(fac);
      last_rejected = false;
    } else {
      ++traj.rejected_;
      --accepted;
      double fac = finite ? std::min(1.0, detail::clamp_factor(err)) : 0.1;
      h = h * Real(fac);
      last_rejected = true;
    }
  }
  return traj;
}

/// Largest componentwise deviation between a run and the same run with both
/// tolerances halved, sampled at the given times.
inline Real tolerance_halving_deviation(const IvpSpec& spec, const Real& t_end, const std::vector<Real>& probes) {
  Trajectory coarse = solve_ivp(spec, t_end);
  IvpSpec fine_spec = spec;
  fine_spec.abs_tol = spec.abs_tol / 2;
  fine_spec.rel_tol = spec.rel_tol / 2;
  Trajectory fine = solve_ivp(fine_spec, t_end);
  Real worst = 0;
  auto probe = [&](const Real& t) {
    State a = coarse.at(t), b = fine.at(t);
    for (std::size_t i = 0; i < a.size(); ++i) worst = max(worst, abs(a[i] - b[i]));
  };
  probe(t_end);
  for (const auto& t : probes) probe(t);
  return worst;
}

}  // namespace tmsim
