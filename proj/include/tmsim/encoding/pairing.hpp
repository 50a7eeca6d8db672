#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "tmsim/errors.hpp"

namespace tmsim {

using Nat = mpz_class;

/// Diagonal enumeration of N^2: I(x, y) = s(s+1)/2 + x with s = x + y.
inline Nat pair2(const Nat& x, const Nat& y) {
  if (x < 0 || y < 0) throw DomainError("pair2 takes naturals");
  Nat s = x + y;
  return s * (s + 1) / 2 + x;
}

inline std::pair<Nat, Nat> unpair2(const Nat& z) {
  if (z < 0) throw DomainError("unpair2 takes a natural");
  // s is the largest integer with s(s+1)/2 <= z.
  Nat s = (sqrt(8 * z + 1) - 1) / 2;
  Nat x = z - s * (s + 1) / 2;
  return {x, s - x};
}

/// I_k composed from the left: I_{k+1}(x_1..x_{k+1}) = I_2(I_k(x_1..x_k), x_{k+1}).
inline Nat pair_k(const std::vector<Nat>& xs) {
  if (xs.size() < 2) throw DomainError("pair_k needs at least two components");
  Nat acc = pair2(xs[0], xs[1]);
  for (std::size_t i = 2; i < xs.size(); ++i) acc = pair2(acc, xs[i]);
  return acc;
}

inline std::vector<Nat> unpair_k(const Nat& z, int k) {
  if (k < 2) throw DomainError("unpair_k needs k >= 2");
  std::vector<Nat> out(static_cast<std::size_t>(k));
  Nat rest = z;
  for (int i = k - 1; i >= 1; --i) {
    auto [a, b] = unpair2(rest);
    out[static_cast<std::size_t>(i)] = b;
    rest = a;
  }
  out[0] = rest;
  return out;
}

/// i-th component (1-based) of the inverse of I_k.
inline Nat unpair_component(const Nat& z, int k, int i) {
  if (i < 1 || i > k) throw DomainError("component index out of range");
  return unpair_k(z, k)[static_cast<std::size_t>(i - 1)];
}

}  // namespace tmsim
