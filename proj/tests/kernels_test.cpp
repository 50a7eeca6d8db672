#include <gtest/gtest.h>

#include <random>

#include "tmsim/kernels/kernels.hpp"

using namespace tmsim;

namespace {

// Direct formula at a much wider precision, used as the reference for Psi.
Real psi_reference(const Real& x, const Real& y) {
  PrecisionGuard g(1024);
  Real X = x.rounded(1024), Y = y.rounded(1024);
  Real tp = 2 * pi();
  Real v = X - asin(sin(tp * X) * (1 - exp(-(Y + 2)))) / tp;
  return v.rounded(256);
}

}  // namespace

TEST(Psi, IntegersAreFixed) {
  for (int k = -5; k <= 5; ++k)
    for (double y : {0.0, 1.0, 30.0, 4000.0}) EXPECT_EQ(psi_correct(Real(k), Real(y)), Real(k));
}

TEST(Psi, ContractsAtPointTwoTenths) {
  Real v = psi_correct(Real(0.2), Real(0));
  EXPECT_LT(abs(v), Real(0.2));
  EXPECT_LT(abs(v - psi_reference(Real(0.2), Real(0))), ldexp_one(-240));
}

TEST(Psi, AgreesWithDirectFormula) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-20, 20), uy(0, 40);
  for (int i = 0; i < 2000; ++i) {
    Real x(ux(rng)), y(uy(rng));
    Real ref = psi_reference(x, y);
    EXPECT_LE(abs(psi_correct(x, y) - ref), ldexp_one(-230) * max(Real(1), abs(ref)));
  }
}

TEST(Psi, StableFarBelowUlp) {
  // 1 - e^{-y-2} rounds to 1 here, so the direct formula at this width returns 0 exactly.
  Real x(0.1), y(400);
  Real d = psi_correct(x, y);
  EXPECT_GT(d, Real(0));
  EXPECT_LT(d, exp(-y) * Real(0.1));
  Real tp = two_pi();
  EXPECT_TRUE((x - asin(sin(tp * x) * (1 - exp(-(y + 2)))) / tp).is_zero() ||
              abs(x - asin(sin(tp * x) * (1 - exp(-(y + 2)))) / tp) > abs(d) * 1000);
  // Leading-order value eps tan(2 pi x) / 2 pi.
  Real lead = exp(-(y + 2)) * tan(tp * x) / tp;
  EXPECT_LT(abs(d / lead - 1), ldexp_one(-240));
}

TEST(Psi, IntervalEnclosure) {
  Interval v = psi_correct(Interval(Real(0.19), Real(0.21)), Interval(10));
  Real bound = exp(Real(-10)) * Real(0.21);
  EXPECT_LE(v.hi(), bound);
  EXPECT_GE(v.lo(), -bound);
  EXPECT_TRUE(v.contains(psi_correct(Real(0.2), Real(10))));
}

TEST(Psi, CertifiedContractionSample) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud(-0.2, 0.2), uy(0, 60);
  std::uniform_int_distribution<int> uk(-1000, 1000);
  for (int i = 0; i < 3000; ++i) {
    double d = ud(rng);
    if (d == 0) continue;
    Real k(uk(rng)), y(uy(rng));
    Interval v = psi_correct(Interval(k + Real(d)), Interval(y));
    Interval bound = exp(-Interval(y)) * abs(Interval(Real(d)));
    ASSERT_TRUE(abs(v - k).certainly_lt(bound)) << "k=" << k << " d=" << d << " y=" << y;
  }
}

TEST(Sigma, Values) {
  EXPECT_EQ(sigma(Real(7)), Real(7));
  EXPECT_LT(abs(sigma(Real(0.25)) - decimal("0.05")), ldexp_one(-250));
  Real lam = lambda_quarter();
  EXPECT_GT(lam, Real(0));
  EXPECT_LT(lam, Real(1));
  EXPECT_LT(abs(lam - Real(0.2566371)), Real(1e-7));
}

TEST(Sigma, ContractionNearIntegers) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ud(-0.25, 0.25);
  std::uniform_int_distribution<int> un(-50, 50);
  Real lam = lambda_quarter();
  for (int i = 0; i < 10000; ++i) {
    Real n(un(rng)), d(ud(rng));
    EXPECT_LE(abs(sigma(n + d) - n), lam * abs(d));
  }
}

TEST(Sigma, IteratesConvergeGeometrically) {
  Real lam = lambda_quarter();
  for (double d0 : {0.25, -0.2, 0.1, -0.01}) {
    Real n(12), x = n + Real(d0);
    Real prev = abs(x - n);
    for (int l = 1; l <= 8; ++l) {
      Real cur = abs(sigma_iter(n + Real(d0), l) - n);
      EXPECT_LE(cur, lam * prev);
      prev = cur;
    }
  }
}

TEST(Theta, Values) {
  EXPECT_TRUE(theta(Real(-3)).is_zero());
  EXPECT_TRUE(theta(Real(0)).is_zero());
  EXPECT_EQ(theta(Real(1)), exp(Real(-1)));
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> ex(0.1);
  for (int i = 0; i < 1000; ++i) {
    Real t = theta(Real(ex(rng) + 1e-3));
    EXPECT_GT(t, Real(0));
    EXPECT_LT(t, Real(1));
  }
}

TEST(Bump, Constants) {
  const auto& p = kernel_params();
  Real tol = ldexp_one(-200);
  Real one_over_cbar = quad_adaptive([](const Real& x) { return theta(-sin(two_pi() * x)); }, Real(0), Real(1), tol);
  EXPECT_LT(abs(p.c_bar * one_over_cbar - 1), ldexp_one(-190));
  Real half = quad_adaptive([](const Real& x) { return theta(-sin(two_pi() * x)); }, Real(0), Real(0.5), tol);
  EXPECT_TRUE(half.is_zero());
  Real one_over_cxi = quad_adaptive([](const Real& x) { return theta(-(x - Real(0.25)) * (x - Real(0.75))); },
                                    Real(0.25), Real(0.75), ldexp_one(-200));
  EXPECT_LT(abs(p.c_xi * one_over_cxi - 1), ldexp_one(-150));
}

TEST(Bump, StepAgainstQuadrature) {
  const auto& p = kernel_params();
  for (double x : {0.55, 0.7, 0.93, 3.81}) {
    Real n = floor(Real(x));
    Real ref = n + p.c_bar * quad_adaptive([](const Real& s) { return theta(-sin(two_pi() * s)); }, Real(0.5),
                                           Real(x) - n, ldexp_one(-200));
    EXPECT_LT(abs(v_step(Real(x)) - ref), ldexp_one(-190)) << x;
  }
}

TEST(Bump, RPlateaus) {
  EXPECT_EQ(r_floor(Real(3.2)), Real(3));
  EXPECT_EQ(r_floor(Real(3.25)), Real(3));
  EXPECT_EQ(r_floor(Real(0)), Real(0));
  for (int n = -5; n <= 5; ++n) {
    Real v = r_floor(Real(n) + Real(0.5));
    EXPECT_GT(v, Real(n));
    EXPECT_LT(v, Real(n + 1));
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(-0.25, 0.25);
  for (int n = -100; n <= 100; ++n)
    for (int j = 0; j < 5; ++j) EXPECT_EQ(r_floor(Real(n) + Real(ud(rng))), Real(n));
}

TEST(Bump, VPlateauPerUnit) {
  for (int n = 0; n < 6; ++n) {
    EXPECT_EQ(v_step(Real(n)), Real(n));
    EXPECT_EQ(v_step(Real(n) + Real(0.5)), Real(n));
    EXPECT_GT(v_step(Real(n) + Real(0.6)), Real(n));
  }
}

TEST(Bump, RIsNondecreasing) {
  Real prev = r_floor(Real(-2));
  for (int i = 1; i <= 800; ++i) {
    Real cur = r_floor(Real(-2) + Real(i) / Real(200));
    EXPECT_GE(cur, prev);
    prev = cur;
  }
}

TEST(Bump, Xi) {
  EXPECT_TRUE(xi(Real(0)).is_zero());
  EXPECT_EQ(xi(Real(1)), Real(1));
  Real h = xi(Real(0.5));
  EXPECT_GT(h, Real(0));
  EXPECT_LT(h, Real(1));
}

TEST(Gate, Values) {
  EXPECT_TRUE(gate_phi(Real(0), Real(10)).is_zero());
  Real integral = quad_adaptive([](const Real& t) { return gate_phi(t, Real(8)); }, Real(0), Real(0.5), Real(1e-40));
  EXPECT_GT(integral, Real(0.128));
}

TEST(Gate, SmallOnSecondHalf) {
  Real y(8);
  Real bound = exp(-y) / 8;
  for (int i = 0; i <= 2000; ++i) {
    Real t = Real(0.5) + Real(i) / Real(4000);
    EXPECT_LT(abs(gate_phi(t, y)), bound);
  }
  // Interval sweep covering all of [1/2, 1].
  for (int i = 0; i < 256; ++i) {
    Interval t(Real(0.5) + Real(i) / Real(512), Real(0.5) + Real(i + 1) / Real(512));
    EXPECT_TRUE(abs(gate_phi(t, Interval(y))).certainly_lt(Interval(bound))) << i;
  }
}

TEST(Gate, Periodic) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ut(-10, 10), uy(0, 50);
  for (int i = 0; i < 500; ++i) {
    Real t(ut(rng)), y(uy(rng));
    EXPECT_LE(abs(gate_phi(t + 1, y) - gate_phi(t, y)), ldexp_one(-240));
  }
}

TEST(Quadrature, ThetaSineLowerBound) {
  auto f = [](const Real& t) { return theta(sin(two_pi() * t)); };
  Real v = quad_adaptive(f, Real(0), Real(0.5), Real(1e-30));
  EXPECT_GE(v, exp(-sqrt(Real(2))) / 4);
  Real wide;
  {
    PrecisionGuard g(512);
    wide = quad_adaptive(f, Real(0), Real(0.5), Real(1e-60));
  }
  EXPECT_LT(abs(v - wide), Real(1e-30));
}

TEST(IntervalSoundness, AllKernels) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ux(-30, 30), uw(0, 1e-3), uy(0, 40);
  auto check = [&](auto point, auto box, int count) {
    for (int i = 0; i < count; ++i) {
      double a = ux(rng), w = uw(rng);
      Real lo(a), hi(a + w);
      Real x = lo + (hi - lo) * Real(std::uniform_real_distribution<double>(0, 1)(rng));
      Interval X(lo, hi);
      ASSERT_TRUE(box(X).contains(point(x))) << "x=" << x;
    }
  };
  check([](const Real& x) { return sigma(x); }, [](const Interval& x) { return sigma(x); }, 100000);
  check([](const Real& x) { return sigma_iter(x, 3); }, [](const Interval& x) { return sigma_iter(x, 3); }, 20000);
  check([](const Real& x) { return theta(x); }, [](const Interval& x) { return theta(x); }, 100000);
  check([](const Real& x) { return s_wave(x); }, [](const Interval& x) { return s_wave(x); }, 100000);
  check([](const Real& x) { return r_floor(x); }, [](const Interval& x) { return r_floor(x); }, 100000);
  check([](const Real& x) { return v_step(x); }, [](const Interval& x) { return v_step(x); }, 100000);
  check([](const Real& x) { return xi(x / 30); }, [](const Interval& x) { return xi(x / 30); }, 100000);
  for (int i = 0; i < 20000; ++i) {
    double a = ux(rng), w = uw(rng), b = uy(rng);
    Real y(b);
    Real x = Real(a) + Real(w) * Real(0.5);
    Interval X{Real(a), Real(a) + Real(w)};
    ASSERT_TRUE(psi_correct(X, Interval(y)).contains(psi_correct(x, y)));
    ASSERT_TRUE(gate_phi(X, Interval(y)).contains(gate_phi(x, y)));
  }
}
