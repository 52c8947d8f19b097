#ifndef KRONALIGN_PERMANENT_H_
#define KRONALIGN_PERMANENT_H_

#include <array>
#include <cstdint>

namespace kronalign {

// Largest supported permanent size. Motif orders go up to 9, so contractions
// need permanents of at most 8x8.
inline constexpr int kMaxPermanent = 8;

// Row-major square matrix buffer.
using PermanentBuffer = std::array<double, kMaxPermanent * kMaxPermanent>;

// Permanent of the leading size x size block of `m` (row stride
// kMaxPermanent). Sizes up to 3 are expanded directly; larger sizes use the
// subset recursion, which only adds products and so has no cancellation.
inline double Permanent(const PermanentBuffer& m, int size) {
  constexpr int s = kMaxPermanent;
  switch (size) {
    case 0:
      return 1.0;
    case 1:
      return m[0];
    case 2:
      return m[0] * m[s + 1] + m[1] * m[s];
    case 3:
      return m[0] * (m[s + 1] * m[2 * s + 2] + m[s + 2] * m[2 * s + 1]) +
             m[1] * (m[s] * m[2 * s + 2] + m[s + 2] * m[2 * s]) +
             m[2] * (m[s] * m[2 * s + 1] + m[s + 1] * m[2 * s]);
    default:
      break;
  }
  std::array<double, 1u << kMaxPermanent> partial{};
  const std::uint32_t full = (1u << size) - 1;
  partial[0] = 1.0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    const double p = partial[mask];
    if (p == 0.0) continue;
    const int row = __builtin_popcount(mask);
    for (int col = 0; col < size; ++col) {
      if (mask & (1u << col)) continue;
      partial[mask | (1u << col)] += p * m[row * s + col];
    }
  }
  return partial[full];
}

}  // namespace kronalign

#endif  // KRONALIGN_PERMANENT_H_
