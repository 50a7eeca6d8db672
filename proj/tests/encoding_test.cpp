#include <gtest/gtest.h>

#include <random>

#include "tmsim/encoding/config_code.hpp"

using namespace tmsim;

TEST(Pairing, DovetailValues) {
  EXPECT_EQ(pair2(0, 0), 0);
  EXPECT_EQ(pair2(0, 1), 1);
  EXPECT_EQ(pair2(1, 0), 2);
  EXPECT_EQ(pair2(0, 2), 3);
  EXPECT_EQ(pair2(2, 0), 5);
}

TEST(Pairing, MatchesClosedForm) {
  for (long x = 0; x < 40; ++x)
    for (long y = 0; y < 40; ++y) EXPECT_EQ(pair2(x, y), Nat(((x + y) * (x + y) + 3 * x + y) / 2));
}

TEST(Pairing, InjectiveOnSmallSquare) {
  std::vector<bool> seen(pair2(200, 200).get_ui() + 1, false);
  for (long x = 0; x <= 200; ++x)
    for (long y = 0; y <= 200; ++y) {
      auto z = pair2(x, y).get_ui();
      ASSERT_FALSE(seen[z]);
      seen[z] = true;
    }
}

TEST(Pairing, UnpairAgainstDiagonalEnumeration) {
  // Brute force: walk the diagonals x + y = s with x increasing.
  std::vector<std::pair<long, long>> table;
  for (long s = 0; table.size() < 2000; ++s)
    for (long x = 0; x <= s; ++x) table.emplace_back(x, s - x);
  for (std::size_t z = 0; z < table.size(); ++z) {
    auto [a, b] = unpair2(Nat(static_cast<unsigned long>(z)));
    EXPECT_EQ(a, table[z].first);
    EXPECT_EQ(b, table[z].second);
  }
  const long first[] = {0, 0, 1, 0, 1, 2};
  for (int z = 0; z < 6; ++z) EXPECT_EQ(unpair2(z).first, first[z]);
}

TEST(Pairing, RoundTripBelowOneMillion) {
  for (unsigned long z = 0; z < 1000000; ++z) {
    auto [x, y] = unpair2(Nat(z));
    ASSERT_EQ(pair2(x, y), z);
  }
}

TEST(Pairing, KFold) {
  EXPECT_EQ(pair_k({0, 0, 0}), 0);
  EXPECT_EQ(pair_k({1, 0, 0}), 5);
  for (long a = 0; a <= 60; ++a)
    for (long b = 0; b <= 60; ++b)
      for (long c = 0; c <= 60; ++c) {
        Nat z = pair_k({a, b, c});
        ASSERT_GE(z, a);
        ASSERT_GE(z, b);
        ASSERT_GE(z, c);
      }
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    int k = 2 + static_cast<int>(rng() % 4);
    std::vector<Nat> xs;
    for (int j = 0; j < k; ++j) xs.emplace_back(static_cast<unsigned long>(rng() % 100000));
    ASSERT_EQ(unpair_k(pair_k(xs), k), xs);
  }
}

TEST(Encoding, WordCodes) {
  auto M = parse_tm(machines::unary_successor);
  Configuration c{parse_word(M, "111"), {}, M.start};
  auto e = encode_config(M, c);
  EXPECT_EQ(e.y1, 7);
  EXPECT_EQ(e.y2, 0);
  auto empty = encode_config(M, Configuration{{}, {}, M.start});
  EXPECT_EQ(empty.y1, 0);
  EXPECT_EQ(empty.y2, 0);
  EXPECT_EQ(empty.c, pair_k({0, 0, 1}));
}

TEST(Encoding, HaltedSuccessorCode) {
  auto M = parse_tm(machines::unary_successor);
  auto orbit = run_n(M, initial_config(M, parse_word(M, "11")), 10);
  auto e = encode_config(M, orbit.back());
  EXPECT_EQ(e.y1, 3);
  EXPECT_EQ(e.y2, 1);
  EXPECT_EQ(e.q, 2);
  EXPECT_EQ(e.c, 133);
}

TEST(Encoding, RoundTripOnDecodableCodes) {
  auto M = parse_tm(machines::busy_beaver_2);
  int ok = 0;
  for (unsigned long z = 0; z < 100000; ++z) {
    try {
      auto c = decode_code(M, Nat(z));
      ASSERT_EQ(encode_code(M, c), z);
      ++ok;
    } catch (const DecodeError&) {
    }
  }
  EXPECT_GT(ok, 1000);
}

TEST(Encoding, DecodeErrors) {
  auto M = parse_tm(machines::unary_successor);
  EXPECT_THROW(decode_code(M, pair_k({0, 0, 0})), DecodeError);
  EXPECT_THROW(decode_code(M, pair_k({0, 0, 3})), DecodeError);
  EXPECT_THROW(word_code({0, 2}, 2), DecodeError);
  EncodedConfig bad = make_encoded(1, 1, 1, 2);
  bad.c += 1;
  EXPECT_THROW(decode_config(M, bad), DecodeError);
}

TEST(Psi, HaltingCodesAreFixed) {
  auto M = parse_tm(machines::unary_successor);
  Nat ch = 133;
  EXPECT_TRUE(is_halting_code(M, ch));
  EXPECT_EQ(psi(M, ch), ch);
}

TEST(Psi, SuccessorReachesHaltedCode) {
  auto M = parse_tm(machines::unary_successor);
  Nat c = encode_code(M, initial_config(M, parse_word(M, "11")));
  for (int i = 0; i < 10; ++i) c = psi(M, c);
  EXPECT_EQ(c, 133);
}

TEST(Psi, CommutesWithStep) {
  std::mt19937_64 rng(3);
  for (const char* src : {machines::unary_successor, machines::busy_beaver_2, machines::binary_increment}) {
    auto M = parse_tm(src);
    for (int i = 0; i < 1000; ++i) {
      Word w;
      for (int j = 0, n = static_cast<int>(rng() % 8); j < n; ++j) w.push_back(1 + static_cast<int>(rng() % (M.k() - 1)));
      auto c = initial_config(M, w);
      auto orbit = run_n(M, c, rng() % 12);
      const auto& x = orbit.back();
      ASSERT_EQ(encode_code(M, step(M, x)), psi(M, encode_code(M, x)));
      auto e = encode_config(M, x);
      auto n3 = psi3(M, {e.y1, e.y2, Nat(e.q)});
      auto en = encode_config(M, step(M, x));
      ASSERT_EQ(n3[0], en.y1);
      ASSERT_EQ(n3[1], en.y2);
      ASSERT_EQ(n3[2], en.q);
    }
  }
}
