#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tmsim/errors.hpp"
#include "tmsim/expr/expr.hpp"

namespace tmsim {

struct KernelOptions {
  int l = 1;              // sigma_iter depth
  int k = 3;              // upsilon_k arity
  double y_max = 60;      // declared upper bound of y for psi_correct and gate_phi certificates
  double radius = 8;      // declared bound |x_i| <= radius for upsilon_k certificates
};

namespace detail {

/// Decimal lower bound of e^{-(y_max + 2)}, the distance of the psi arcsin argument from +-1.
inline std::string psi_margin(double y_max) {
  double l10 = -(y_max + 2) / std::log(10.0);
  double e = std::floor(l10);
  double mant = std::pow(10.0, l10 - e);
  mant = std::floor(mant * 100 - 1) / 100;  // one hundredth below, for safety
  if (mant < 1) {
    mant *= 10;
    e -= 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fe%.0f", mant, e);
  return buf;
}

inline Expr two_pi_expr() { return ex::mul(ex::cnst(2), ex::pi()); }

inline Expr psi_of(const Expr& x, const Expr& y, const std::string& margin) {
  using namespace ex;
  Expr damp = cnst(1) - exp(-y - cnst(2));
  return x - arcsin(sin(two_pi_expr() * x) * damp, margin) / two_pi_expr();
}

inline Expr pair_of(const Expr& x, const Expr& y) {
  using namespace ex;
  return (pow(x + y, 2) + cnst(3) * x + y) / cnst(2);
}

}  // namespace detail

/// Psi(x, y) in its literal closed form.
inline Expr psi_expr(double y_max = 60) {
  return detail::psi_of(ex::var(0, "x"), ex::var(1, "y"), detail::psi_margin(y_max));
}

inline Expr sigma_expr() {
  using namespace ex;
  Expr x = var(0, "x");
  return x - cnst("0.2", "sigma amplitude") * sin(detail::two_pi_expr() * x);
}

inline Expr sigma_iter_expr(int l) {
  if (l < 0) throw DomainError("sigma_iter needs l >= 0");
  Expr e = ex::var(0, "x");
  Expr s = sigma_expr();
  for (int i = 0; i < l; ++i) e = compose(s, {e});
  return e;
}

inline Expr s_wave_expr() {
  using namespace ex;
  Expr u = sin(detail::two_pi_expr() * var(0, "t"));
  return (pow(u, 2) + u) / cnst(2);
}

/// phi(t, y) = Psi(s(t), y).
inline Expr gate_phi_expr(double y_max = 60) { return compose(psi_expr(y_max), {s_wave_expr(), ex::var(1, "y")}); }

inline Expr pair2_expr() { return detail::pair_of(ex::var(0, "x"), ex::var(1, "y")); }

/// Upsilon_k(x_1..x_k): pairs of Psi-corrected arguments, folded from the left with
/// Upsilon_2(a, b) = I(Psi(a, Y), Psi(b, Y)), Y = 32 (1 + a^2 + b^2).
inline Expr upsilon_expr(int k, double radius = 8) {
  using namespace ex;
  if (k < 2) throw DomainError("upsilon_k needs k >= 2");
  Expr acc = var(0, "x1");
  double bound = radius;
  for (int i = 1; i < k; ++i) {
    Expr b = var(i, "x" + std::to_string(i + 1));
    Expr Y = cnst(32) * (cnst(1) + pow(acc, 2) + pow(b, 2));
    std::string margin = detail::psi_margin(32 * (1 + bound * bound + radius * radius));
    acc = detail::pair_of(detail::psi_of(acc, Y, margin), detail::psi_of(b, Y, margin));
    double u = bound + 0.25, v = radius + 0.25;
    bound = ((u + v) * (u + v) + 3 * u + v) / 2;
  }
  return acc;
}

inline const std::vector<std::string>& kernel_names() {
  static const std::vector<std::string> names = {"psi_correct", "sigma", "sigma_iter", "s",
                                                 "gate_phi",    "pair2", "upsilon_k"};
  return names;
}

/// Builds a named kernel. "sigma_iter(3)" and "upsilon_k(4)" set l and k inline.
inline Expr build_kernel(const std::string& spec, KernelOptions opt = {}) {
  std::string name = spec;
  auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')') throw UnknownKernel("malformed kernel name '" + spec + "'");
    name = spec.substr(0, open);
    int arg = 0;
    try {
      arg = std::stoi(spec.substr(open + 1, spec.size() - open - 2));
    } catch (const std::exception&) {
      throw UnknownKernel("malformed kernel argument in '" + spec + "'");
    }
    if (name == "sigma_iter")
      opt.l = arg;
    else if (name == "upsilon_k")
      opt.k = arg;
    else
      throw UnknownKernel("kernel '" + name + "' takes no argument");
  }
  if (name == "psi_correct") return psi_expr(opt.y_max);
  if (name == "sigma") return sigma_expr();
  if (name == "sigma_iter") return sigma_iter_expr(opt.l);
  if (name == "s") return s_wave_expr();
  if (name == "gate_phi") return gate_phi_expr(opt.y_max);
  if (name == "pair2") return pair2_expr();
  if (name == "upsilon_k") return upsilon_expr(opt.k, opt.radius);
  throw UnknownKernel("unknown kernel '" + spec + "'");
}

}  // namespace tmsim
