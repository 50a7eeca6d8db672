#include <gtest/gtest.h>

#include <random>

#include "tmsim/expr/kernel_exprs.hpp"
#include "tmsim/robust/robust_map.hpp"

using namespace tmsim;

namespace {

Real rel_dev(const Real& a, const Real& b) { return abs(a - b) / max(Real(1), abs(b)); }

Real agreement_tol() { return ldexp_one(-(default_precision() - 8)); }

}  // namespace

TEST(ExprPrint, Sigma) { EXPECT_EQ(to_infix(build_kernel("sigma")), "x - 0.2*sin(2*pi*x)"); }

TEST(ExprPrint, PsiAndGateShape) {
  EXPECT_EQ(to_infix(build_kernel("psi_correct")), "x - arcsin(sin(2*pi*x)*(1 - exp(-y - 2)))/(2*pi)");
  std::string g = to_infix(build_kernel("gate_phi"));
  EXPECT_NE(g.find("arcsin(sin(2*pi*((sin(2*pi*t)^2 + sin(2*pi*t))/2))*(1 - exp(-y - 2)))"), std::string::npos) << g;
}

TEST(ExprPrint, PairAndProvenance) {
  EXPECT_EQ(to_infix(build_kernel("pair2")), "((x + y)^2 + 3*x + y)/2");
  EXPECT_NE(to_sexpr(build_kernel("sigma")).find("(const 0.2 \"sigma amplitude\")"), std::string::npos);
}

TEST(ExprPrint, ParenthesizesRightOperands) {
  using namespace ex;
  Expr x = var(0, "x"), y = var(1, "y");
  EXPECT_EQ(to_infix(x - (y - x)), "x - (y - x)");
  EXPECT_EQ(to_infix((x - y) - x), "x - y - x");
  EXPECT_EQ(to_infix(x / (y * x)), "x/(y*x)");
  EXPECT_EQ(to_infix(-(x + y)), "-(x + y)");
  EXPECT_EQ(to_infix(pow(-x, 2)), "(-x)^2");
}

TEST(ExprEval, Trivial) {
  EXPECT_EQ(eval(build_kernel("sigma"), {Real(7)}), Real(7));
  EXPECT_EQ(eval(ex::cnst(5), {}), Real(5));
  EXPECT_EQ(eval(ex::cnst(5), {Real(3), Real(4)}), Real(5));
  EXPECT_EQ(eval(build_kernel("pair2"), {Real(0), Real(1)}), Real(1));
  EXPECT_EQ(eval(build_kernel("pair2"), {Real(2), Real(3)}), Real(17));
}

TEST(ExprEval, ArityAndDomainErrors) {
  EXPECT_THROW(eval(build_kernel("pair2"), {Real(1)}), ArityMismatch);
  EXPECT_THROW(eval(ex::arcsin(ex::var(0, "x")), {Real(2)}), DomainError);
  EXPECT_THROW(eval_interval(ex::arcsin(ex::var(0, "x")), {Interval(Real(0.5), Real(1.5))}), DomainError);
  EXPECT_THROW(eval(ex::log2(ex::var(0, "x")), {Real(-1)}), DomainError);
  EXPECT_THROW(eval(ex::cnst(1) / ex::var(0, "x"), {Real(0)}), DomainError);
}

TEST(ExprKernels, UnknownNames) {
  EXPECT_THROW(build_kernel("tanh"), UnknownKernel);
  EXPECT_THROW(build_kernel("sigma(3)"), UnknownKernel);
  EXPECT_THROW(build_kernel("sigma_iter(x)"), UnknownKernel);
  EXPECT_EQ(arity(build_kernel("upsilon_k(4)")), 4);
  EXPECT_EQ(arity(build_kernel("sigma_iter(2)")), 1);
}

// The closed forms are evaluated on the domains where the kernels are used: Psi with y in
// [0, 60] (its arcsin argument stays e^{-62} away from +-1) and Upsilon_k on tuples within 1/5
// of integers, where sin(2 pi x) stays away from +-1.
TEST(ExprKernels, AgreeWithDirectKernels) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> wide(-50, 50), ys(0, 60), unit(0, 1), pert(-0.2, 0.2);
  std::uniform_int_distribution<int> small(0, 40);
  const int N = 10000;
  Expr psi = build_kernel("psi_correct"), sig = build_kernel("sigma"), sig3 = build_kernel("sigma_iter(3)"),
       s = build_kernel("s"), gate = build_kernel("gate_phi"), pr = build_kernel("pair2"), ups = build_kernel("upsilon_k");
  Real worst = 0;
  auto check = [&](const Real& a, const Real& b) {
    Real d = rel_dev(a, b);
    if (d > worst) worst = d;
  };
  for (int i = 0; i < N; ++i) {
    Real x(wide(rng)), y(ys(rng)), t(unit(rng) * 3 - 1);
    check(eval(psi, {x, y}), psi_correct(x, y));
    check(eval(sig, {x}), sigma(x));
    check(eval(sig3, {x}), sigma_iter(x, 3));
    check(eval(s, {t}), s_wave(t));
    check(eval(gate, {t, y}), gate_phi(t, y));
    check(eval(pr, {x, y}), pair2_real(x, y));
    std::vector<Real> tri{Real(small(rng)) + Real(pert(rng)), Real(small(rng)) + Real(pert(rng)),
                          Real(small(rng)) + Real(pert(rng))};
    check(eval(ups, tri), upsilon_k(tri));
  }
  EXPECT_LE(worst, agreement_tol()) << worst.str(6);
}

TEST(ExprInterval, EnclosesPointEvaluations) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> wide(-20, 20), ys(0, 60), unit(0, 1);
  Expr psi = build_kernel("psi_correct"), sig = build_kernel("sigma"), gate = build_kernel("gate_phi"),
       pr = build_kernel("pair2"), s = build_kernel("s");
  for (int i = 0; i < 10000; ++i) {
    Real x(wide(rng)), y(ys(rng)), t(unit(rng));
    Real w = ldexp_one(-20);
    Interval X{x, x + w}, Y{y, y + w}, T{t, t + w};
    Real xp = x + w * Real(unit(rng)), yp = y + w * Real(unit(rng)), tp = t + w * Real(unit(rng));
    EXPECT_TRUE(eval_interval(psi, {X, Y}).contains(eval(psi, {xp, yp})));
    EXPECT_TRUE(eval_interval(sig, {X}).contains(eval(sig, {xp})));
    EXPECT_TRUE(eval_interval(gate, {T, Y}).contains(eval(gate, {tp, yp})));
    EXPECT_TRUE(eval_interval(pr, {X, Y}).contains(eval(pr, {xp, yp})));
    EXPECT_TRUE(eval_interval(s, {T}).contains(eval(s, {tp})));
  }
}

TEST(ExprInterval, PsiCertificate) {
  Expr psi = build_kernel("psi_correct");
  EXPECT_TRUE(certificates_hold(psi, {Interval(Real(-3), Real(3)), Interval(Real(0), Real(60))}));
  EXPECT_FALSE(certificates_hold(psi, {Interval(Real(-3), Real(3)), Interval(Real(0), Real(100))}));
  Expr ups = build_kernel("upsilon_k(2)");
  EXPECT_TRUE(certificates_hold(ups, {Interval(Real(-8), Real(8)), Interval(Real(-8), Real(8))}));
}

TEST(ExprCompose, IdentityAndSigmaIterate) {
  Expr id = ex::var(0, "x");
  Expr sig = build_kernel("sigma");
  EXPECT_EQ(to_sexpr(compose(id, {sig})), to_sexpr(sig));
  Expr s3 = compose(sig, {compose(sig, {sig})});
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> wide(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    Real x(wide(rng));
    EXPECT_LE(rel_dev(eval(s3, {x}), sigma_iter(x, 3)), agreement_tol());
  }
}

TEST(ExprCompose, EqualsPointwiseComposition) {
  Expr pr = build_kernel("pair2"), sig = build_kernel("sigma");
  Expr c = compose(pr, {sig, ex::var(1, "y")});
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> wide(-5, 5);
  for (int i = 0; i < 200; ++i) {
    Real x(wide(rng)), y(wide(rng));
    EXPECT_LE(rel_dev(eval(c, {x, y}), eval(pr, {eval(sig, {x}), y})), agreement_tol());
  }
  EXPECT_THROW(compose(pr, {sig}), ArityMismatch);
}

TEST(ExprSexpr, RoundTripIsFixedPoint) {
  for (const char* k : {"psi_correct", "sigma", "sigma_iter(2)", "s", "gate_phi", "pair2", "upsilon_k(3)"}) {
    Expr e = build_kernel(k);
    std::string once = to_sexpr(e);
    Expr back = parse_sexpr(once);
    EXPECT_EQ(to_sexpr(back), once) << k;
    EXPECT_EQ(to_infix(back), to_infix(e)) << k;
  }
  Expr q = ex::cnst("206", "time scale with a \"quoted\" note");
  EXPECT_EQ(to_sexpr(parse_sexpr(to_sexpr(q))), to_sexpr(q));
}

TEST(ExprSexpr, ParseErrorsCarryPosition) {
  try {
    parse_sexpr("(add (var 0 x)\n  (frob 1))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 4u);
  }
  EXPECT_THROW(parse_sexpr("(const abc)"), ParseError);
  EXPECT_THROW(parse_sexpr("(var 0 x) extra"), ParseError);
  EXPECT_THROW(parse_sexpr("(pow (var 0 x) 2.5)"), ParseError);
  EXPECT_THROW(parse_sexpr("(sin (var 0 x)"), ParseError);
}
