#include <gtest/gtest.h>

#include <random>

#include "tmsim/robust/robust_map.hpp"

using namespace tmsim;

namespace {

TuringMachine succ() { return parse_tm(machines::unary_successor); }
TuringMachine bb2() { return parse_tm(machines::busy_beaver_2); }
TuringMachine binc() { return parse_tm(machines::binary_increment); }

Nat start_code(const TuringMachine& M, const std::string& w) {
  return encode_code(M, initial_config(M, parse_word(M, w)));
}

}  // namespace

TEST(Upsilon, IntegerTuplesArePaired) {
  EXPECT_EQ(upsilon_k({Real(0), Real(1)}), Real(1));
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; b <= 12; ++b)
      for (int c = 0; c <= 6; ++c) {
        Nat want = pair_k({Nat(a), Nat(b), Nat(c)});
        EXPECT_EQ(upsilon_k({Real(a), Real(b), Real(c)}), Real(want));
        EXPECT_EQ(upsilon_k({Real(a), Real(b), Real(c)}, true), Real(want));
      }
}

TEST(Upsilon, SmallPerturbation) {
  Real v = upsilon_k({Real(0.1), Real(0.9)});
  EXPECT_LE(abs(v - 1), Real(0.1));
  // Both corrections are below e^{-58} |offset|, so the value is 1 to far beyond double precision.
  EXPECT_LT(abs(v - 1), ldexp_one(-80));
}

TEST(Upsilon, PerturbedTriplesStayWithinThePerturbation) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> n(0, 40);
  std::normal_distribution<double> dir(0, 1);
  std::uniform_real_distribution<double> rad(0, 0.2);
  for (int i = 0; i < 10000; ++i) {
    std::array<int, 3> y{n(rng), n(rng), n(rng)};
    double d[3] = {dir(rng), dir(rng), dir(rng)};
    double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    double r = rad(rng);
    std::vector<Real> x;
    for (int j = 0; j < 3; ++j) x.push_back(Real(y[static_cast<std::size_t>(j)]) + Real(r * d[j] / norm));
    Real want(pair_k({Nat(y[0]), Nat(y[1]), Nat(y[2])}));
    EXPECT_LE(abs(upsilon_k(x) - want), Real(r) + ldexp_one(-200));
    if (i % 20 == 0) {
      EXPECT_LE(abs(upsilon_k(x, true) - want), Real(r) + ldexp_one(-200));
    }
  }
}

TEST(Omega, ExactInverses) {
  EXPECT_EQ(omega_exact(Real(2), 2, 1), Real(1));
  EXPECT_EQ(omega_exact(Real(2), 2, 2), Real(0));
  // Brute-force inverse: search the pair with I(a, b) = 5.
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      if (pair2(Nat(a), Nat(b)) == 5) {
        EXPECT_EQ(omega_exact(Real(5.19), 2, 1), Real(a));
        EXPECT_EQ(omega_exact(Real(4.81), 2, 2), Real(b));
      }
  EXPECT_THROW(omega_exact(Real(0.5), 2, 1), NotNearInteger);
  EXPECT_THROW(omega_exact(Real(-1), 2, 1), NotNearInteger);
}

TEST(FRef, HaltedIsFixedAndPerturbationIsRemoved) {
  auto M = succ();
  auto e = encoded_from_code(M, Nat(133));
  std::array<Real, 3> halted{Real(e.y1), Real(e.y2), Real(e.q)};
  auto out = f_ref(M, halted);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(out[static_cast<std::size_t>(i)], halted[static_cast<std::size_t>(i)]);

  auto c = encode_config(M, initial_config(M, parse_word(M, "111")));
  std::array<Real, 3> x{Real(c.y1) + Real(0.19), Real(c.y2) + Real(0.19), Real(c.q) + Real(0.19)};
  auto want = psi3(M, {c.y1, c.y2, Nat(c.q)});
  out = f_ref(M, x);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(out[static_cast<std::size_t>(i)], Real(want[static_cast<std::size_t>(i)]));

  EXPECT_THROW(f_ref(M, {Real(0), Real(0), Real(5)}), NotNearConfiguration);
  EXPECT_THROW(f_ref(M, {Real(0.4), Real(0), Real(1)}), NotNearConfiguration);
}

TEST(FRef, TwentyStepsMatchTheMachine) {
  auto M = binc();
  auto cfgs = run_n(M, initial_config(M, parse_word(M, "1101")), 20);
  auto e = encode_config(M, cfgs.front());
  std::array<Real, 3> x{Real(e.y1), Real(e.y2), Real(e.q)};
  for (std::size_t n = 1; n <= 20; ++n) {
    x = f_ref(M, x);
    auto want = encode_config(M, cfgs[n]);
    EXPECT_EQ(x[0], Real(want.y1));
    EXPECT_EQ(x[1], Real(want.y2));
    EXPECT_EQ(x[2], Real(want.q));
  }
  auto S = succ();
  auto scfgs = run_n(S, initial_config(S, parse_word(S, "11")), 20);
  auto se = encode_config(S, scfgs.front());
  std::array<Real, 3> sx{Real(se.y1), Real(se.y2), Real(se.q)};
  for (std::size_t n = 1; n <= 20; ++n) sx = f_ref(S, sx);
  EXPECT_EQ(sx[2], Real(S.halt));
}

TEST(Compile, ContractionDepth) {
  EXPECT_EQ(compile_map(succ(), Real(0)).j_contract(), 1);
  EXPECT_EQ(compile_map(succ(), decimal("0.1")).j_contract(), 1);
  // lambda^j < 0.05 first holds at j = 3 (lambda^2 ~ 0.066, lambda^3 ~ 0.017).
  EXPECT_EQ(compile_map(succ(), decimal("0.19")).j_contract(), 3);
  int prev = 0;
  for (int i = 0; i < 200; ++i) {
    Real d = decimal("0.2") * Real(i) / Real(200);
    int j = j_contract_for(d);
    EXPECT_GE(j, prev);
    prev = j;
    Real lam = lambda_quarter();
    EXPECT_LT(pow(lam, static_cast<long>(j)) / 5, Real(0.2) - d);
    if (j > 1) {
      EXPECT_GE(pow(lam, static_cast<long>(j - 1)) / 5, decimal("0.2") - d);
    }
  }
  EXPECT_THROW(compile_map(succ(), decimal("0.2")), BadDelta);
  EXPECT_THROW(compile_map(succ(), Real(-0.01)), BadDelta);
}

TEST(Compile, ExactCodesReproducePsi) {
  std::vector<std::pair<TuringMachine, std::string>> cases{{succ(), "11"}, {bb2(), ""}, {binc(), "1011"}};
  for (auto& [M, w] : cases) {
    auto g = compile_map(M, decimal("0.1"));
    Nat c = start_code(M, w);
    for (int n = 0; n < 12; ++n) {
      Nat next = psi(M, c);
      EXPECT_EQ(g.apply(Real(c)), Real(next));
      c = next;
    }
  }
}

TEST(Iterate, ZeroNoiseIsThePsiOrbit) {
  auto M = bb2();
  auto g = compile_map(M, Real(0));
  Nat c0 = start_code(M, "");
  auto xs = iterate_noisy(g, Real(c0), 10, NoiseSpec());
  auto orbit = psi_orbit(M, c0, 10);
  ASSERT_EQ(xs.size(), 11u);
  for (std::size_t n = 0; n <= 10; ++n) EXPECT_EQ(xs[n], Real(orbit[n]));
}

TEST(Iterate, ConstantNoiseStaysWithinAFifth) {
  auto M = succ();
  auto g = compile_map(M, decimal("0.1"));
  Nat c0 = start_code(M, "111");
  auto xs = iterate_noisy(g, Real(c0) + decimal("0.19"), 20, NoiseSpec(NoiseMode::ConstantPlus, decimal("0.1")));
  auto orbit = psi_orbit(M, c0, 20);
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_LE(abs(xs[n] - Real(orbit[n])), Real(0.2)) << n;
}

TEST(Iterate, SoundnessAcrossMachinesAndNoiseModes) {
  struct Case {
    TuringMachine M;
    std::string input;
  };
  std::vector<Case> cases{{succ(), "1111"}, {bb2(), ""}, {binc(), "111"}, {binc(), "0101"}};
  std::vector<NoiseMode> modes{NoiseMode::Uniform, NoiseMode::ConstantPlus, NoiseMode::ConstantMinus,
                               NoiseMode::Alternating};
  for (auto& cs : cases) {
    Nat c0 = start_code(cs.M, cs.input);
    auto orbit = psi_orbit(cs.M, c0, 15);
    for (const char* ds : {"0", "0.1", "0.19"}) {
      Real delta = decimal(ds);
      auto g = compile_map(cs.M, delta);
      for (auto mode : modes)
        for (const char* off : {"0.19", "-0.19", "0"}) {
          Real start = Real(c0) + decimal(off);
          if (start.sign() < 0) continue;
          auto xs = iterate_noisy(g, start, 15, NoiseSpec(mode, delta, 7));
          for (std::size_t n = 0; n <= 15; ++n) {
            auto near = nearest_integer(xs[n]);
            EXPECT_EQ(near.n, orbit[n]);
            EXPECT_LE(near.distance, Real(0.2));
          }
        }
    }
  }
}

TEST(Iterate, RejectsExcessNoiseAndBadStarts) {
  EXPECT_THROW(NoiseSpec(NoiseMode::Uniform, decimal("0.21")), BadDelta);
  auto M = succ();
  auto g = compile_map(M, decimal("0.05"));
  EXPECT_THROW(iterate_noisy(g, Real(0), 3, NoiseSpec(NoiseMode::Uniform, decimal("0.1"))), BadDelta);
  try {
    iterate_noisy(g, Real(5) + Real(0.4), 3, NoiseSpec());
    FAIL();
  } catch (const NotNearConfiguration& e) {
    EXPECT_EQ(e.step, 0);
  }
}

TEST(Iterate, SmoothPipelineAgrees) {
  auto M = bb2();
  auto g = compile_map(M, decimal("0.1"), true);
  Nat c0 = start_code(M, "");
  auto orbit = psi_orbit(M, c0, 8);
  auto xs = iterate_noisy(g, Real(c0) - decimal("0.15"), 8, NoiseSpec(NoiseMode::Alternating, decimal("0.1")));
  for (std::size_t n = 0; n <= 8; ++n) EXPECT_EQ(nearest_integer(xs[n]).n, orbit[n]);
}
