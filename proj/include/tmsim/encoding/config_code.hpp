#pragma once

#include <gmpxx.h>

#include <array>

#include "tmsim/encoding/pairing.hpp"
#include "tmsim/tm/machine.hpp"

namespace tmsim {

/// Configuration as (y1, y2, q) with base-k word codes and the collapsed code c = I_3(y1, y2, q).
struct EncodedConfig {
  Nat y1, y2;
  int q = 1;
  int k = 2;
  Nat c;
  bool operator==(const EncodedConfig& o) const { return y1 == o.y1 && y2 == o.y2 && q == o.q && k == o.k && c == o.c; }
};

/// y = w_1 + w_2 k + ... + w_n k^{n-1}.
inline Nat word_code(const Word& w, int k) {
  Nat acc = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (*it < 0 || *it >= k) throw DecodeError("symbol digit out of range");
    acc = acc * k + *it;
  }
  return acc;
}

inline Word code_word(Nat y, int k) {
  if (y < 0) throw DecodeError("negative word code");
  Word w;
  while (y > 0) {
    Nat r = y % k;
    w.push_back(static_cast<int>(r.get_si()));
    y /= k;
  }
  return w;
}

inline EncodedConfig make_encoded(const Nat& y1, const Nat& y2, int q, int k) {
  EncodedConfig e{y1, y2, q, k, 0};
  e.c = pair_k({y1, y2, Nat(q)});
  return e;
}

inline EncodedConfig encode_config(const TuringMachine& M, const Configuration& c) {
  check_config(M, c);
  return make_encoded(word_code(c.u, M.k()), word_code(c.v, M.k()), c.q, M.k());
}

inline EncodedConfig encoded_from_code(const TuringMachine& M, const Nat& code) {
  if (code < 0) throw DecodeError("negative configuration code");
  auto t = unpair_k(code, 3);
  if (t[2] < 1 || t[2] > M.m()) throw DecodeError("code " + code.get_str() + " has state index " + t[2].get_str());
  return EncodedConfig{t[0], t[1], static_cast<int>(t[2].get_si()), M.k(), code};
}

inline Configuration decode_config(const TuringMachine& M, const EncodedConfig& e) {
  if (e.k != M.k()) throw DecodeError("encoding base does not match the machine");
  if (e.q < 1 || e.q > M.m()) throw DecodeError("state index out of range");
  if (e.c != pair_k({e.y1, e.y2, Nat(e.q)})) throw DecodeError("code does not match its components");
  return Configuration{code_word(e.y1, e.k), code_word(e.y2, e.k), e.q};
}

inline Configuration decode_code(const TuringMachine& M, const Nat& code) {
  return decode_config(M, encoded_from_code(M, code));
}

inline Nat encode_code(const TuringMachine& M, const Configuration& c) { return encode_config(M, c).c; }

/// Transition on N^3: (y1, y2, q) to the codes of the next configuration.
inline std::array<Nat, 3> psi3(const TuringMachine& M, const std::array<Nat, 3>& y) {
  if (y[2] < 1 || y[2] > M.m()) throw DecodeError("state index out of range");
  Configuration c{code_word(y[0], M.k()), code_word(y[1], M.k()), static_cast<int>(y[2].get_si())};
  auto e = encode_config(M, step(M, c));
  return {e.y1, e.y2, Nat(e.q)};
}

/// One machine step on collapsed codes; halting codes are fixed points.
inline Nat psi(const TuringMachine& M, const Nat& code) { return encode_code(M, step(M, decode_code(M, code))); }

inline bool is_halting_code(const TuringMachine& M, const Nat& code) {
  return encoded_from_code(M, code).q == M.halt;
}

}  // namespace tmsim
