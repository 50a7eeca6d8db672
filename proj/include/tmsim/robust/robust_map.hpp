#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "tmsim/encoding/config_code.hpp"
#include "tmsim/encoding/pairing.hpp"
#include "tmsim/errors.hpp"
#include "tmsim/expr/kernel_exprs.hpp"
#include "tmsim/kernels/kernels.hpp"
#include "tmsim/tm/machine.hpp"

namespace tmsim {

inline Real one_fifth() { return decimal("0.2"); }

/// Nearest integer to x and the distance to it.
struct NearestInteger {
  Nat n;
  Real distance;
};

inline NearestInteger nearest_integer(const Real& x) {
  Real r = round(x);
  return {r.to_mpz(), abs(x - r)};
}

/// Real-valued I(u, v) = ((u + v)^2 + 3u + v) / 2.
inline Real pair2_real(const Real& u, const Real& v) {
  Real s = u + v;
  return (s * s + 3 * u + v) / 2;
}

/// Upsilon_2(a, b) = I(Psi(a, Y), Psi(b, Y)) with Y = 32 (1 + a^2 + b^2). With smooth set,
/// Psi(., Y) is replaced by the C-infinity plateau map r.
inline Real upsilon2(const Real& a, const Real& b, bool smooth = false) {
  if (smooth) return pair2_real(r_floor(a), r_floor(b));
  Real Y = 32 * (1 + a * a + b * b);
  return pair2_real(psi_correct(a, Y), psi_correct(b, Y));
}

/// Robust extension of I_k: equals I_k on N^k, and moves a 1/5-perturbed tuple by at most
/// the perturbation. Folds Upsilon_2 from the left.
inline Real upsilon_k(const std::vector<Real>& x, bool smooth = false) {
  if (x.size() < 2) throw DomainError("upsilon_k needs k >= 2");
  Real acc = upsilon2(x[0], x[1], smooth);
  for (std::size_t i = 2; i < x.size(); ++i) acc = upsilon2(acc, x[i], smooth);
  return acc;
}

/// J_{k,i}(round(x)) exactly; the inverse of I_k robust to a 1/5 perturbation.
inline Real omega_exact(const Real& x, int k, int i) {
  auto near = nearest_integer(x);
  if (near.distance > one_fifth() || near.n < 0)
    throw NotNearInteger("x = " + x.str(20) + " is not within 1/5 of a natural number");
  return Real(unpair_component(near.n, k, i));
}

/// Reference robust extension of psi_3: round each coordinate and step exactly.
class RobustExtension3 {
 public:
  explicit RobustExtension3(TuringMachine M, Real eps_in = one_fifth()) : M_(std::move(M)), eps_in_(std::move(eps_in)) {
    if (eps_in_.sign() < 0 || eps_in_ > one_fifth()) throw DomainError("eps_in must lie in [0, 1/5]");
  }

  const TuringMachine& machine() const { return M_; }
  const Real& eps_in() const { return eps_in_; }
  std::string tag() const { return "reference"; }

  std::array<Real, 3> apply(const std::array<Real, 3>& x) const {
    std::array<Nat, 3> y;
    for (std::size_t i = 0; i < 3; ++i) {
      auto near = nearest_integer(x[i]);
      if (near.distance > eps_in_ || near.n < 0)
        throw NotNearConfiguration("coordinate " + std::to_string(i + 1) + " = " + x[i].str(20) +
                                   " is not within eps_in of a natural number");
      y[i] = near.n;
    }
    std::array<Nat, 3> z;
    try {
      z = psi3(M_, y);
    } catch (const DecodeError& e) {
      throw NotNearConfiguration(std::string("rounded triple does not decode: ") + e.what());
    }
    return {Real(z[0]), Real(z[1]), Real(z[2])};
  }

 private:
  TuringMachine M_;
  Real eps_in_;
};

inline std::array<Real, 3> f_ref(const TuringMachine& M, const std::array<Real, 3>& x) {
  return RobustExtension3(M).apply(x);
}

/// Smallest j with lambda^j / 5 < 1/5 - delta, lambda = 0.4 pi - 1.
inline int j_contract_for(const Real& delta) {
  Real lam = lambda_quarter();
  Real rhs = one_fifth() - delta;
  Real p = lam;
  for (int j = 1; j < 10000; ++j) {
    if (p / 5 < rhs) return j;
    p *= lam;
  }
  throw BadDelta("no contraction depth satisfies the noise budget");
}

/// One-dimensional robust simulator g_M = sigma^[j] o Upsilon_3 o f(Omega_31, Omega_32, Omega_33).
class CompiledMap {
 public:
  CompiledMap(TuringMachine M, Real delta, bool smooth = false)
      : f_(std::move(M)), delta_(std::move(delta)), smooth_(smooth) {
    if (delta_.sign() < 0 || delta_ >= one_fifth())
      throw BadDelta("delta = " + delta_.str(10) + " must lie in [0, 1/5)");
    j_ = j_contract_for(delta_);
  }

  const TuringMachine& machine() const { return f_.machine(); }
  const Real& delta_budget() const { return delta_; }
  int j_contract() const { return j_; }
  bool smooth() const { return smooth_; }

  /// g_M(x); throws NotNearConfiguration when x is not within 1/5 of a valid code.
  Real apply(const Real& x) const {
    std::array<Real, 3> w;
    try {
      for (int i = 0; i < 3; ++i) w[static_cast<std::size_t>(i)] = omega_exact(x, 3, i + 1);
    } catch (const NotNearInteger& e) {
      throw NotNearConfiguration(e.what());
    }
    auto y = f_.apply(w);
    return sigma_iter(upsilon_k({y[0], y[1], y[2]}, smooth_), j_);
  }

  /// Total variant used inside vector fields: x is snapped to the nearest natural whatever the
  /// distance; a code that does not decode is returned unchanged (a fixed point).
  Real apply_total(const Real& x) const {
    Real r = round(x);
    if (r.sign() < 0) r = Real(0);
    Nat n = r.to_mpz();
    std::array<Real, 3> w;
    for (int i = 0; i < 3; ++i) w[static_cast<std::size_t>(i)] = Real(unpair_component(n, 3, i + 1));
    std::array<Real, 3> y;
    try {
      y = f_.apply(w);
    } catch (const NotNearConfiguration&) {
      return r;
    }
    return sigma_iter(upsilon_k({y[0], y[1], y[2]}, smooth_), j_);
  }

  /// Closed-form stages of the pipeline; f and Omega are reference round-and-step stages.
  Expr sigma_stage() const { return sigma_iter_expr(j_); }
  Expr upsilon_stage() const { return upsilon_expr(3); }

 private:
  RobustExtension3 f_;
  Real delta_;
  bool smooth_;
  int j_ = 1;
};

inline CompiledMap compile_map(const TuringMachine& M, const Real& delta, bool smooth = false) {
  return CompiledMap(M, delta, smooth);
}

enum class NoiseMode { None, Uniform, ConstantPlus, ConstantMinus, Alternating };

inline NoiseMode parse_noise_mode(const std::string& s) {
  if (s == "none") return NoiseMode::None;
  if (s == "uniform") return NoiseMode::Uniform;
  if (s == "const+" || s == "constant+" || s == "plus") return NoiseMode::ConstantPlus;
  if (s == "const-" || s == "constant-" || s == "minus") return NoiseMode::ConstantMinus;
  if (s == "alternating") return NoiseMode::Alternating;
  throw ValidationError("unknown noise mode '" + s + "' (none, uniform, const+, const-, alternating)");
}

/// Per-step perturbation with |e_n| <= magnitude.
class NoiseSpec {
 public:
  NoiseSpec() = default;
  NoiseSpec(NoiseMode mode, Real magnitude, std::uint64_t seed = 0)
      : mode_(mode), magnitude_(std::move(magnitude)), rng_(seed) {
    if (magnitude_.sign() < 0 || magnitude_ >= one_fifth())
      throw BadDelta("noise magnitude " + magnitude_.str(10) + " must lie in [0, 1/5)");
  }

  NoiseMode mode() const { return mode_; }
  const Real& magnitude() const { return magnitude_; }

  Real next(std::size_t step) {
    switch (mode_) {
      case NoiseMode::None:
        return Real(0);
      case NoiseMode::Uniform:
        return magnitude_ * Real(std::uniform_real_distribution<double>(-1.0, 1.0)(rng_));
      case NoiseMode::ConstantPlus:
        return magnitude_;
      case NoiseMode::ConstantMinus:
        return -magnitude_;
      case NoiseMode::Alternating:
        return step % 2 == 0 ? magnitude_ : -magnitude_;
    }
    return Real(0);
  }

 private:
  NoiseMode mode_ = NoiseMode::None;
  Real magnitude_ = Real(0);
  std::mt19937_64 rng_{0};
};

/// x_0, x_1 = g(x_0) + e_0, ... ; steps + 1 values.
inline std::vector<Real> iterate_noisy(const CompiledMap& g, const Real& x0bar, std::size_t steps, NoiseSpec noise) {
  if (noise.magnitude() > g.delta_budget())
    throw BadDelta("noise magnitude " + noise.magnitude().str(10) + " exceeds the map budget " +
                   g.delta_budget().str(10));
  std::vector<Real> out{x0bar};
  Real x = x0bar;
  for (std::size_t n = 0; n < steps; ++n) {
    try {
      x = g.apply(x) + noise.next(n);
    } catch (const NotNearConfiguration& e) {
      throw NotNearConfiguration(e.what(), static_cast<long>(n));
    }
    out.push_back(x);
  }
  return out;
}

/// c_0, psi(c_0), ..., psi^[steps](c_0).
inline std::vector<Nat> psi_orbit(const TuringMachine& M, const Nat& c0, std::size_t steps) {
  std::vector<Nat> out{c0};
  for (std::size_t n = 0; n < steps; ++n) out.push_back(psi(M, out.back()));
  return out;
}

}  // namespace tmsim
