#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace ceerlab {

using Nat = std::uint64_t;
using Stage = std::size_t;

/// Cantor pairing <x,y> = (x+y)(x+y+1)/2 + y. Note <0,0> = 0.
constexpr Nat pair(Nat x, Nat y) noexcept {
  const Nat w = x + y;
  return w * (w + 1) / 2 + y;
}

/// Inverse of pair(): returns ((z)_0, (z)_1).
inline std::pair<Nat, Nat> unpair(Nat z) noexcept {
  // w is the largest integer with w(w+1)/2 <= z; fix up the floating estimate.
  auto w = static_cast<Nat>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while (w * (w + 1) / 2 > z) --w;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  const Nat y = z - w * (w + 1) / 2;
  return {w - y, y};
}

inline Nat proj0(Nat z) noexcept { return unpair(z).first; }
inline Nat proj1(Nat z) noexcept { return unpair(z).second; }

/// Column of a number: (x)_0.
inline Nat column_of(Nat x) noexcept { return proj0(x); }

}  // namespace ceerlab
