#pragma once

#include <cstddef>
#include <span>

namespace splinet {

/// Gauss–Legendre rule on [-1, 1]; exact for polynomials of degree 2n−1.
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

inline constexpr std::size_t kMaxGaussNodes = 64;

/// Rules are computed once on first use and shared; `n` in [1, kMaxGaussNodes].
GaussRule gauss_legendre(std::size_t n);

} // namespace splinet
