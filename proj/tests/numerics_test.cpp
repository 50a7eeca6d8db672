#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "tmsim/numerics/interval.hpp"
#include "tmsim/numerics/ivp.hpp"
#include "tmsim/numerics/quadrature.hpp"

using namespace tmsim;

TEST(Real, DefaultPrecisionIs256) { EXPECT_EQ(Real(1).prec(), default_precision()); }

TEST(Real, DecimalRoundTripIsIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    Real x = Real(u(rng)) / Real(3) + pi() * Real(static_cast<long>(i));
    Real back(x.str());
    ASSERT_EQ(back, x) << x.str();
  }
}

TEST(Real, ArithmeticIsCorrectlyRounded) {
  Real third = Real(1) / Real(3);
  Real lo = Real::combine(Real(1), Real(3), mpfr_div, MPFR_RNDD);
  Real hi = Real::combine(Real(1), Real(3), mpfr_div, MPFR_RNDU);
  EXPECT_TRUE(third == lo || third == hi);
  EXPECT_LT(lo, hi);
}

TEST(Real, PrecisionGuardRestores) {
  long before = default_precision();
  {
    PrecisionGuard g(128);
    EXPECT_EQ(Real(2).prec(), 128);
  }
  EXPECT_EQ(default_precision(), before);
}

TEST(Interval, SinEnclosesPointValues) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-20, 20), w(0, 3);
  for (int i = 0; i < 2000; ++i) {
    double a = c(rng), b = a + w(rng);
    Interval x{Real(a), Real(b)};
    Interval s = sin(x), co = cos(x);
    for (int j = 0; j <= 10; ++j) {
      Real p = Real(a) + (Real(b) - Real(a)) * Real(j) / Real(10);
      ASSERT_TRUE(s.contains(sin(p)));
      ASSERT_TRUE(co.contains(cos(p)));
    }
  }
}

TEST(Interval, SinReachesExtremaWhenCrossingPeak) {
  Interval x(Real(1), Real(2));  // contains pi/2
  EXPECT_EQ(sin(x).hi(), Real(1));
  Interval y(Real(3), Real(3.5));  // contains pi
  EXPECT_EQ(cos(y).lo(), Real(-1));
}

TEST(Interval, ArithmeticEnclosesExactResult) {
  Interval third = Interval(1) / Interval(3);
  EXPECT_TRUE(third.lo() < third.hi());
  Interval back = third * 3;
  EXPECT_TRUE(back.contains(Real(1)));
  EXPECT_THROW(Interval(1) / Interval(Real(-1), Real(1)), DomainError);
  EXPECT_THROW(asin(Interval(Real(0.5), Real(1.5))), DomainError);
}

TEST(Kronrod, RuleIntegratesPolynomialsExactlyToDegree22) {
  auto rule = kronrod_rule();
  ASSERT_EQ(rule->nodes.size(), 15u);
  for (long m = 0; m <= 22; ++m) {
    Real s = 0;
    for (std::size_t i = 0; i < 15; ++i) s += rule->kronrod_weights[i] * pow(rule->nodes[i], m);
    Real exact = m % 2 ? Real(0) : Real(2) / Real(m + 1);
    EXPECT_LT(abs(s - exact), Real("1e-70")) << "degree " << m;
  }
  // Gauss part is exact to degree 13.
  for (long m = 0; m <= 13; ++m) {
    Real s = 0;
    for (std::size_t i = 0; i < 15; ++i) s += rule->gauss_weights[i] * pow(rule->nodes[i], m);
    Real exact = m % 2 ? Real(0) : Real(2) / Real(m + 1);
    EXPECT_LT(abs(s - exact), Real("1e-70")) << "degree " << m;
  }
}

TEST(Quadrature, ConstantIntegrand) {
  Real q = quad_adaptive([](const Real&) { return Real(1); }, Real(0), Real(1), Real("1e-30"));
  EXPECT_LT(abs(q - 1), Real("1e-70"));
}

TEST(Quadrature, SmoothIntegrandAgainstClosedForm) {
  Real q = quad_adaptive([](const Real& x) { return exp(x); }, Real(0), Real(1), Real("1e-60"));
  EXPECT_LT(abs(q - (exp(Real(1)) - 1)), Real("1e-60"));
}

TEST(Quadrature, RejectsBadArguments) {
  auto f = [](const Real&) { return Real(1); };
  EXPECT_THROW(quad_adaptive(f, Real(1), Real(0), Real("1e-10")), DomainError);
  EXPECT_THROW(quad_adaptive(f, Real(0), Real(1), Real(0)), DomainError);
}

TEST(Quadrature, NonConvergenceOnDepthLimit) {
  QuadOptions opt;
  opt.max_depth = 2;
  auto f = [](const Real& x) { return sqrt(abs(x - Real("0.3"))); };
  EXPECT_THROW(quad_adaptive(f, Real(0), Real(1), Real("1e-60"), opt), NonConvergence);
}

TEST(Ivp, ZeroFieldKeepsState) {
  IvpSpec s;
  s.rhs = [](const Real&, const State& y, State& dy) { dy.assign(y.size(), Real(0)); };
  s.state0 = {Real(3)};
  auto tr = solve_ivp(s, Real(10));
  EXPECT_EQ(tr.final_state()[0], Real(3));
}

TEST(Ivp, ExponentialGrowthMatchesClosedForm) {
  IvpSpec s;
  s.rhs = [](const Real&, const State& y, State& dy) { dy[0] = y[0]; };
  s.state0 = {Real(1)};
  auto tr = solve_ivp(s, Real(1));
  EXPECT_LT(abs(tr.final_state()[0] - exp(Real(1))), 10 * s.abs_tol);
  // Dense output between nodes.
  for (int i = 1; i < 20; ++i) {
    Real t = Real(i) / Real(20) + Real("0.001");
    EXPECT_LT(abs(tr.at(t)[0] - exp(t)), 100 * s.abs_tol);
  }
}

TEST(Ivp, NodesAreReturnedExactly) {
  IvpSpec s;
  s.rhs = [](const Real& t, const State& y, State& dy) { dy[0] = cos(t) * y[0]; };
  s.state0 = {Real(2)};
  auto tr = solve_ivp(s, Real(3));
  for (std::size_t k = 0; k < tr.times().size(); k += 7) EXPECT_EQ(tr.at(tr.times()[k])[0], tr.states()[k][0]);
}

TEST(Ivp, BreakpointsAreHitExactly) {
  IvpSpec s;
  s.rhs = [](const Real&, const State& y, State& dy) { dy[0] = -y[0]; };
  s.state0 = {Real(1)};
  s.max_step = Real("0.3");
  s.breakpoints = {Real("0.5"), Real("1.25")};
  auto tr = solve_ivp(s, Real(2));
  auto has = [&](const Real& v) { return std::find(tr.times().begin(), tr.times().end(), v) != tr.times().end(); };
  EXPECT_TRUE(has(Real("0.5")));
  EXPECT_TRUE(has(Real("1.25")));
  EXPECT_EQ(tr.t_end(), Real(2));
}

TEST(Ivp, BlowUpIsReported) {
  IvpSpec s;
  s.rhs = [](const Real&, const State& y, State& dy) { dy[0] = y[0] * y[0]; };
  s.state0 = {Real(1)};
  s.blowup_ceiling = Real("1e30");
  EXPECT_THROW(solve_ivp(s, Real(2)), std::exception);
}

TEST(Ivp, TolerancesHalvingMovesEndpointLessThanCoarseTolerance) {
  IvpSpec s;
  s.rhs = [](const Real& t, const State& y, State& dy) {
    dy[0] = y[1];
    dy[1] = -y[0] + sin(t) / 10;
  };
  s.state0 = {Real(1), Real(0)};
  Real dev = tolerance_halving_deviation(s, Real(5), {Real(1), Real("2.5")});
  EXPECT_LT(dev, s.abs_tol * 10);
}

TEST(Ivp, CsvHeaderAndRows) {
  IvpSpec s;
  s.rhs = [](const Real&, const State& y, State& dy) { dy.assign(y.size(), Real(1)); };
  s.state0 = {Real(0), Real(1)};
  s.max_step = Real("0.5");
  auto tr = solve_ivp(s, Real(1));
  std::ostringstream os;
  tr.write_csv(os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,state_0,state_1");
}
