#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "tmsim/numerics/real.hpp"

namespace tmsim {

/// 7-point Gauss / 15-point Kronrod rule on [-1, 1], computed at a given width.
struct KronrodRule {
  long bits = 0;
  std::vector<Real> nodes;           // 15 nodes, ascending
  std::vector<Real> kronrod_weights; // 15 weights
  std::vector<Real> gauss_weights;   // 15 entries, zero at Kronrod-only nodes
};

namespace detail {

// Coefficients (ascending powers) of the Legendre polynomial P_n, exact.
inline std::vector<mpq_class> legendre_coeffs(int n) {
  std::vector<mpq_class> p0{1}, p1{0, 1};
  if (n == 0) return p0;
  for (int k = 1; k < n; ++k) {
    // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
    std::vector<mpq_class> p2(k + 2, 0);
    for (int i = 0; i <= k; ++i) p2[i + 1] += mpq_class(2 * k + 1, k + 1) * p1[i];
    for (int i = 0; i < k; ++i) p2[i] -= mpq_class(k, k + 1) * p0[i];
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return p1;
}

inline mpq_class monomial_integral(int m) { return m % 2 ? mpq_class(0) : mpq_class(2, m + 1); }

template <class T>
Real horner(const std::vector<T>& c, const Real& x) {
  Real acc = Real::with_prec(x.prec());
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    Real ci = Real::with_prec(x.prec());
    if constexpr (std::is_same_v<T, mpq_class>)
      mpfr_set_q(ci.raw(), it->get_mpq_t(), MPFR_RNDN);
    else
      ci = *it;
    acc = acc * x + ci;
  }
  return acc;
}

// Root of p in [a, b] where p changes sign; bisection to full width.
inline Real bisect_root(const std::vector<mpq_class>& p, Real a, Real b) {
  Real fa = horner(p, a);
  for (int it = 0; it < a.prec() + 8; ++it) {
    Real m = (a + b) / 2;
    if (m == a || m == b) break;
    Real fm = horner(p, m);
    if (fm.is_zero()) return m;
    if ((fm.sign() > 0) == (fa.sign() > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return (a + b) / 2;
}

// Solve A x = b by Gaussian elimination with partial pivoting.
inline std::vector<Real> solve_dense(std::vector<std::vector<Real>> A, std::vector<Real> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      Real f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return x;
}

inline KronrodRule build_kronrod_rule(long bits) {
  const int n = 7;
  const long w = bits + 64;
  PrecisionGuard guard(w);

  std::vector<mpq_class> P = legendre_coeffs(n);

  // Stieltjes polynomial E_{n+1}: monic, orthogonal to x^k against weight P_n for k = 0..n.
  const int m = n + 1;
  std::vector<std::vector<mpq_class>> A(m, std::vector<mpq_class>(m, 0));
  std::vector<mpq_class> rhs(m, 0);
  for (int k = 0; k < m; ++k) {
    auto moment = [&](int deg) {
      mpq_class s = 0;
      for (std::size_t i = 0; i < P.size(); ++i) s += P[i] * monomial_integral(static_cast<int>(i) + deg);
      return s;
    };
    for (int j = 0; j < m; ++j) A[k][j] = moment(k + j);
    rhs[k] = -moment(k + m);
  }
  // Exact elimination over the rationals; drop equations that vanish identically.
  std::vector<mpq_class> E(m + 1, 0);
  {
    std::vector<int> pivcol;
    std::vector<std::vector<mpq_class>> R;
    std::vector<mpq_class> rb;
    for (int k = 0; k < m; ++k) {
      std::vector<mpq_class> row = A[k];
      mpq_class b = rhs[k];
      for (std::size_t r = 0; r < R.size(); ++r) {
        mpq_class f = row[pivcol[r]];
        if (f == 0) continue;
        for (int j = 0; j < m; ++j) row[j] -= f * R[r][j];
        b -= f * rb[r];
      }
      int pc = -1;
      for (int j = 0; j < m; ++j)
        if (row[j] != 0) { pc = j; break; }
      if (pc < 0) continue;
      mpq_class inv = 1 / row[pc];
      for (int j = 0; j < m; ++j) row[j] *= inv;
      b *= inv;
      for (std::size_t r = 0; r < R.size(); ++r) {
        mpq_class f = R[r][pc];
        if (f == 0) continue;
        for (int j = 0; j < m; ++j) R[r][j] -= f * row[j];
        rb[r] -= f * b;
      }
      R.push_back(row);
      rb.push_back(b);
      pivcol.push_back(pc);
    }
    // Free coefficients (odd powers for even E) are zero by symmetry.
    for (std::size_t r = 0; r < R.size(); ++r) E[pivcol[r]] = rb[r];
    E[m] = 1;
  }

  // Gauss nodes: roots of P_n, located by sign changes on a fine grid.
  std::vector<Real> gauss;
  const int grid = 4000;
  Real prev_x = -1, prev_v = horner(P, prev_x);
  for (int i = 1; i <= grid; ++i) {
    Real x = Real(-1) + Real(2 * i) / grid;
    Real v = horner(P, x);
    if (v.is_zero() || (v.sign() > 0) != (prev_v.sign() > 0)) {
      gauss.push_back(v.is_zero() ? x : bisect_root(P, prev_x, x));
      if (v.is_zero()) {
        x = x + Real(1) / (grid * 8);
        v = horner(P, x);
      }
    }
    prev_x = x;
    prev_v = v;
  }
  if (static_cast<int>(gauss.size()) != n) throw NonConvergence("Gauss node search failed");

  // Kronrod nodes interlace the Gauss nodes.
  std::vector<Real> brackets;
  brackets.push_back(Real(-1));
  for (auto& g : gauss) brackets.push_back(g);
  brackets.push_back(Real(1));
  std::vector<Real> kron;
  for (std::size_t i = 0; i + 1 < brackets.size(); ++i) kron.push_back(bisect_root(E, brackets[i], brackets[i + 1]));

  KronrodRule rule;
  rule.bits = bits;
  std::vector<std::pair<Real, bool>> all;
  for (auto& g : gauss) all.emplace_back(g, true);
  for (auto& k : kron) all.emplace_back(k, false);
  std::sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.first < b.first; });

  // Kronrod weights: exact on x^0..x^14.
  const std::size_t N = all.size();
  std::vector<std::vector<Real>> V(N, std::vector<Real>(N));
  std::vector<Real> mom(N);
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < N; ++c) V[r][c] = pow(all[c].first, static_cast<long>(r));
    Real q = Real::with_prec(w);
    mpq_class mi = monomial_integral(static_cast<int>(r));
    mpfr_set_q(q.raw(), mi.get_mpq_t(), MPFR_RNDN);
    mom[r] = q;
  }
  std::vector<Real> kw = solve_dense(V, mom);

  std::vector<mpq_class> dP(P.size() > 1 ? P.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < P.size(); ++i) dP[i - 1] = P[i] * static_cast<long>(i);

  for (std::size_t i = 0; i < N; ++i) {
    const Real& x = all[i].first;
    rule.nodes.push_back(x.rounded(bits));
    rule.kronrod_weights.push_back(kw[i].rounded(bits));
    if (all[i].second) {
      Real d = horner(dP, x);
      rule.gauss_weights.push_back((Real(2) / ((1 - x * x) * d * d)).rounded(bits));
    } else {
      rule.gauss_weights.push_back(Real::with_prec(bits));
    }
  }
  return rule;
}

}  // namespace detail

/// Rule for the requested width; built once per width and shared.
inline std::shared_ptr<const KronrodRule> kronrod_rule(long bits = default_precision()) {
  static std::mutex mu;
  static std::map<long, std::shared_ptr<const KronrodRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(bits);
  if (it != cache.end()) return it->second;
  auto rule = std::make_shared<const KronrodRule>(detail::build_kronrod_rule(bits));
  cache.emplace(bits, rule);
  return rule;
}

struct QuadOptions {
  int max_depth = 60;
  int max_panels = 100000;
};

struct QuadResult {
  Real value;
  Real error_estimate;
  int panels = 0;
};

using Integrand = std::function<Real(const Real&)>;

/// Adaptive bisection with a Gauss-Kronrod error estimate. Stops when the summed
/// estimate is below tol * max(1, |Q|).
inline QuadResult quad_adaptive_report(const Integrand& f, const Real& a, const Real& b, const Real& tol,
                                       const QuadOptions& opt = {}) {
  if (b < a) throw DomainError("quad_adaptive requires a <= b");
  if (tol.sign() <= 0) throw DomainError("quad_adaptive requires tol > 0");
  const long bits = std::max(a.prec(), b.prec());
  auto rule = kronrod_rule(bits);

  struct Panel {
    Real a, b, k, err;
    int depth;
  };
  // Error estimate as in QUADPACK: |K - G| rescaled by the integrand's variation on the panel.
  auto eval_panel = [&](const Real& pa, const Real& pb, int depth) {
    Real half = (pb - pa) / 2, center = (pa + pb) / 2;
    Real k = Real::with_prec(bits), g = Real::with_prec(bits);
    std::vector<Real> fx(rule->nodes.size());
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      fx[i] = f(center + half * rule->nodes[i]);
      k += rule->kronrod_weights[i] * fx[i];
      if (!rule->gauss_weights[i].is_zero()) g += rule->gauss_weights[i] * fx[i];
    }
    Real mean = k / 2;
    Real asc = Real::with_prec(bits);
    for (std::size_t i = 0; i < fx.size(); ++i) asc += rule->kronrod_weights[i] * abs(fx[i] - mean);
    Real err = abs((k - g) * half);
    asc = abs(asc * half);
    if (!asc.is_zero() && !err.is_zero()) {
      Real scale = pow(200 * err / asc, Real(1.5));
      if (scale < Real(1)) err = asc * scale;
    }
    k *= half;
    return Panel{pa, pb, k, err, depth};
  };

  std::vector<Panel> panels;
  panels.push_back(eval_panel(a, b, 0));
  if (a == b) return {Real::with_prec(bits), Real::with_prec(bits), 1};

  for (;;) {
    Real total = Real::with_prec(bits), err = Real::with_prec(bits);
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].k;
      err += panels[i].err;
      if (panels[i].err > panels[worst].err) worst = static_cast<int>(i);
    }
    if (err <= tol * max(Real(1), abs(total))) return {total, err, static_cast<int>(panels.size())};
    Panel p = panels[worst];
    if (p.depth >= opt.max_depth || static_cast<int>(panels.size()) >= opt.max_panels)
      throw NonConvergence("adaptive quadrature did not reach tolerance " + tol.str(6) + " (estimate " + err.str(6) +
                           ")");
    Real m = (p.a + p.b) / 2;
    panels[worst] = eval_panel(p.a, m, p.depth + 1);
    panels.push_back(eval_panel(m, p.b, p.depth + 1));
  }
}

inline Real quad_adaptive(const Integrand& f, const Real& a, const Real& b, const Real& tol,
                          const QuadOptions& opt = {}) {
  return quad_adaptive_report(f, a, b, tol, opt).value;
}

}  // namespace tmsim
