#include <gtest/gtest.h>

#include <random>

#include "tmsim/tm/machine.hpp"

using namespace tmsim;

namespace {

TuringMachine succ() { return parse_tm(machines::unary_successor); }

}  // namespace

TEST(ParseTm, SuccessorSample) {
  auto M = succ();
  EXPECT_EQ(M.m(), 2);
  EXPECT_EQ(M.k(), 2);
  ASSERT_EQ(M.alphabet.size(), 1u);
  EXPECT_EQ(M.alphabet[0], "1");
  EXPECT_EQ(M.states[M.start - 1], "q0");
  EXPECT_EQ(M.states[M.halt - 1], "qh");
  auto again = parse_tm(M.to_text());
  EXPECT_EQ(again.to_text(), M.to_text());
  EXPECT_EQ(again.delta, M.delta);
}

TEST(ParseTm, HaltMustBeAbsorbing) {
  std::string text = machines::unary_successor;
  auto pos = text.find("delta: qh B -> qh B S");
  text.replace(pos, 21, "delta: qh B -> qh B R");
  EXPECT_THROW(parse_tm(text), ValidationError);
}

TEST(ParseTm, EmptyDeltaSection) {
  EXPECT_THROW(parse_tm("states: a b\nalphabet: 1\nblank: B\nstart: a\nhalt: b\n"), ValidationError);
}

TEST(ParseTm, MissingEntry) {
  std::string text = machines::unary_successor;
  text.erase(text.find("delta: q0 1 -> q0 1 R"), 22);
  EXPECT_THROW(parse_tm(text), ValidationError);
}

TEST(ParseTm, ParseErrorCarriesPosition) {
  try {
    parse_tm("states: a b\nalphabet: 1\nblank: B\nstart: a\nhalt: b\ndelta: a X -> b 1 S\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 6u);
    EXPECT_EQ(e.column, 10u);
  }
  try {
    parse_tm("states: a\n  bogus: 3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 3u);
  }
  EXPECT_THROW(parse_tm("states: a b\nalphabet: 1\nblank: B\nstart: a\nhalt: b\ndelta: a 1 -> b 1 Q\n"), ParseError);
}

TEST(Step, HaltedConfigurationIsFixed) {
  auto M = succ();
  Configuration c{{1, 1}, {1}, M.halt};
  EXPECT_EQ(step(M, c), c);
  auto orbit = run_n(M, c, 5);
  ASSERT_EQ(orbit.size(), 6u);
  for (auto& x : orbit) EXPECT_EQ(x, c);
}

TEST(Step, SuccessorOutput) {
  auto M = succ();
  auto c = initial_config(M, parse_word(M, "111"));
  auto steps = halting_time(M, c, 100);
  ASSERT_TRUE(steps.has_value());
  auto orbit = run_n(M, c, *steps);
  EXPECT_EQ(word_text(M, tape_word(orbit.back())), "1111");
}

TEST(Step, RunNFromTwoOnes) {
  auto M = succ();
  auto orbit = run_n(M, initial_config(M, parse_word(M, "11")), 10);
  ASSERT_EQ(orbit.size(), 11u);
  EXPECT_EQ(run_n(M, orbit[0], 0).size(), 1u);
  EXPECT_TRUE(is_halted(M, orbit.back()));
  EXPECT_EQ(orbit.back(), orbit[1]);
  EXPECT_EQ(word_text(M, tape_word(orbit.back())), "111");
}

TEST(Step, WordShiftSemantics) {
  // Head on a blank with an empty left tape: write 1, move left.
  auto M = parse_tm(R"(states: a h
alphabet: 1
blank: B
start: a
halt: h
delta: a B -> h 1 L
delta: a 1 -> h 1 S
delta: h B -> h B S
delta: h 1 -> h 1 S
)");
  Configuration c{{1, 0, 1}, {}, M.start};
  auto n = step(M, c);
  // The written cell is now right of the head; the new head cell is a blank, so v stays empty.
  EXPECT_TRUE(n.v.empty());
  EXPECT_EQ(n.u, (Word{1, 1, 0, 1}));
  EXPECT_EQ(tape_word(n), (Word{1, 1, 0, 1}));
}

TEST(Step, MoveRightMaterializesBlank) {
  auto M = parse_tm(machines::binary_increment);
  Configuration c{{}, {2}, M.state_id("carry").value()};
  auto n = step(M, c);  // carry reads 1: write 0, move right onto an implicit blank
  EXPECT_EQ(n.v, (Word{0, 1}));
  EXPECT_TRUE(n.u.empty());
}

TEST(Step, BusyBeaverHaltsWithFourOnes) {
  auto M = parse_tm(machines::busy_beaver_2);
  auto c = initial_config(M, {});
  auto t = halting_time(M, c, 50);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(*t, 6u);
  auto orbit = run_n(M, c, 6);
  EXPECT_EQ(nonblank_count(orbit.back()), 4u);
}

TEST(Step, BinaryIncrement) {
  auto M = parse_tm(machines::binary_increment);
  // 7 = 111 (lsb first) becomes 8 = 0001.
  auto c = initial_config(M, parse_word(M, "111"));
  auto t = halting_time(M, c, 50);
  ASSERT_TRUE(t.has_value());
  auto orbit = run_n(M, c, *t);
  EXPECT_EQ(word_text(M, tape_word(orbit.back())), "0001");
}

TEST(Properties, DeterminismAndTapeConservation) {
  std::mt19937_64 rng(7);
  for (const char* src : {machines::unary_successor, machines::busy_beaver_2, machines::binary_increment}) {
    auto M = parse_tm(src);
    for (int trial = 0; trial < 50; ++trial) {
      Configuration c;
      c.q = 1 + static_cast<int>(rng() % static_cast<unsigned>(M.m()));
      for (int i = 0, n = static_cast<int>(rng() % 6); i < n; ++i) c.u.push_back(static_cast<int>(rng() % M.k()));
      for (int i = 0, n = static_cast<int>(rng() % 6); i < n; ++i) c.v.push_back(static_cast<int>(rng() % M.k()));
      detail::strip_far_end(c.u);
      detail::strip_far_end(c.v);
      auto a = run_n(M, c, 30), b = run_n(M, c, 30);
      EXPECT_EQ(a, b);
      for (std::size_t j = 0; j + 1 < a.size(); ++j) {
        long d = static_cast<long>(nonblank_count(a[j + 1])) - static_cast<long>(nonblank_count(a[j]));
        EXPECT_LE(std::labs(d), 1);
      }
    }
  }
}
