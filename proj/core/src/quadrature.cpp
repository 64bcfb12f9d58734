#include "splinet/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace splinet {

namespace {

struct RuleTable {
  std::array<std::vector<double>, kMaxGaussNodes + 1> nodes;
  std::array<std::vector<double>, kMaxGaussNodes + 1> weights;

  RuleTable() {
    for (std::size_t n = 1; n <= kMaxGaussNodes; ++n) {
      build(n);
    }
  }

  // Newton iteration on P_n from the Chebyshev-like initial guesses.
  void build(std::size_t n) {
    auto& x = nodes[n];
    auto& w = weights[n];
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = z;
        for (std::size_t m = 2; m <= n; ++m) {
          const double dm = static_cast<double>(m);
          const double p2 = ((2.0 * dm - 1.0) * z * p1 - (dm - 1.0) * p0) / dm;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) {
          p1 = z;
          p0 = 1.0;
        }
        dp = dn * (z * p1 - p0) / (z * z - 1.0);
        const double step = p1 / dp;
        z -= step;
        if (std::abs(step) < 1e-16) {
          break;
        }
      }
      // recompute derivative at the converged root
      double p0 = 1.0;
      double p1 = z;
      for (std::size_t m = 2; m <= n; ++m) {
        const double dm = static_cast<double>(m);
        const double p2 = ((2.0 * dm - 1.0) * z * p1 - (dm - 1.0) * p0) / dm;
        p0 = p1;
        p1 = p2;
      }
      dp = dn * (z * p1 - p0) / (z * z - 1.0);
      const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = weight;
      w[n - 1 - i] = weight;
    }
    if (n % 2 == 1) {
      x[n / 2] = 0.0;
    }
  }
};

const RuleTable& table() {
  static const RuleTable t;
  return t;
}

} // namespace

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0 || n > kMaxGaussNodes) {
    throw std::out_of_range("gauss_legendre: node count out of range");
  }
  const auto& t = table();
  return {t.nodes[n], t.weights[n]};
}

} // namespace splinet
