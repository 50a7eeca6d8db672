#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "tmsim/errors.hpp"
#include "tmsim/numerics/real.hpp"

namespace tmsim {

/// Antiderivative F(x) = integral_a^x f of a smooth integrand, stored as Chebyshev series
/// on panels that are split until the interpolant's tail falls below an absolute tolerance.
class ChebAntiderivative {
 public:
  ChebAntiderivative() = default;

  ChebAntiderivative(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, const Real& tol,
                     int degree = 64, int initial_panels = 16, int max_depth = 40)
      : degree_(degree) {
    if (!(a < b)) throw DomainError("ChebAntiderivative needs a < b");
    build_cosines();
    for (int i = 0; i < initial_panels; ++i) {
      Real lo = a + (b - a) * Real(i) / Real(initial_panels);
      Real hi = i + 1 == initial_panels ? b : a + (b - a) * Real(i + 1) / Real(initial_panels);
      refine(f, lo, hi, tol, 0, max_depth);
    }
    Real acc = Real::with_prec(a.prec());
    for (auto& p : panels_) {
      p.offset = acc;
      acc += p.total;
    }
    total_ = acc;
  }

  const Real& total() const { return total_; }
  std::size_t panel_count() const { return panels_.size(); }
  const Real& lower() const { return panels_.front().a; }
  const Real& upper() const { return panels_.back().b; }

  /// integral from the lower end to x, for x inside the table range.
  Real operator()(const Real& x) const {
    if (x <= lower()) return Real(0);
    if (x >= upper()) return total_;
    auto it = std::upper_bound(panels_.begin(), panels_.end(), x, [](const Real& v, const Panel& p) { return v < p.b; });
    if (it == panels_.end()) --it;
    const Panel& p = *it;
    Real t = (2 * x - p.a - p.b) / (p.b - p.a);
    return p.offset + clenshaw(p.anti, t);
  }

 private:
  struct Panel {
    Real a, b;
    std::vector<Real> anti;  // coefficients of the panel antiderivative, F(a) = 0
    Real total;
    Real offset;
  };

  void build_cosines() {
    const int N = degree_;
    Real pi_ = pi();
    nodes_.resize(static_cast<std::size_t>(N));
    cosines_.assign(static_cast<std::size_t>(N * N), Real(0));
    for (int j = 0; j < N; ++j) nodes_[static_cast<std::size_t>(j)] = cos(pi_ * (Real(j) + Real(0.5)) / Real(N));
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < N; ++j)
        cosines_[static_cast<std::size_t>(k * N + j)] = cos(pi_ * Real(k) * (Real(j) + Real(0.5)) / Real(N));
  }

  static Real clenshaw(const std::vector<Real>& c, const Real& t) {
    Real b1 = Real::with_prec(t.prec()), b2 = Real::with_prec(t.prec());
    Real tt = 2 * t;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
      Real b0 = c[k] + tt * b1 - b2;
      b2 = std::move(b1);
      b1 = std::move(b0);
    }
    return c[0] + t * b1 - b2;
  }

  void refine(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, const Real& tol, int depth,
              int max_depth) {
    const int N = degree_;
    Real mid = (a + b) / 2, half = (b - a) / 2;
    std::vector<Real> vals(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) vals[static_cast<std::size_t>(j)] = f(mid + half * nodes_[static_cast<std::size_t>(j)]);
    std::vector<Real> c(static_cast<std::size_t>(N + 2), Real(0));
    for (int k = 0; k < N; ++k) {
      Real s = 0;
      for (int j = 0; j < N; ++j) s += vals[static_cast<std::size_t>(j)] * cosines_[static_cast<std::size_t>(k * N + j)];
      c[static_cast<std::size_t>(k)] = 2 * s / Real(N);
    }
    Real tail = max(abs(c[static_cast<std::size_t>(N - 1)]), max(abs(c[static_cast<std::size_t>(N - 2)]),
                                                                  abs(c[static_cast<std::size_t>(N - 3)])));
    // The tail bounds the interpolation error per unit length; scale by the panel width.
    if (tail * half > tol) {
      if (depth >= max_depth) throw NonConvergence("Chebyshev table did not resolve the integrand");
      refine(f, a, mid, tol, depth + 1, max_depth);
      refine(f, mid, b, tol, depth + 1, max_depth);
      return;
    }
    // f = c0/2 + sum c_k T_k;  F' = half * f  =>  C_k = half (c_{k-1} - c_{k+1}) / (2k).
    Panel p;
    p.a = a;
    p.b = b;
    p.anti.assign(static_cast<std::size_t>(N + 1), Real(0));
    for (int k = 1; k <= N; ++k)
      p.anti[static_cast<std::size_t>(k)] =
          half * (c[static_cast<std::size_t>(k - 1)] - c[static_cast<std::size_t>(k + 1)]) / Real(2 * k);
    Real at_minus_one = 0;
    for (int k = 1; k <= N; ++k) {
      if (k % 2)
        at_minus_one -= p.anti[static_cast<std::size_t>(k)];
      else
        at_minus_one += p.anti[static_cast<std::size_t>(k)];
    }
    p.anti[0] = -at_minus_one;
    p.total = clenshaw(p.anti, Real(1));
    panels_.push_back(std::move(p));
  }

  int degree_ = 64;
  std::vector<Real> nodes_, cosines_;
  std::vector<Panel> panels_;
  Real total_;
};

}  // namespace tmsim
