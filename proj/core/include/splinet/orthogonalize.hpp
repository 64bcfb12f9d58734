#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "splinet/inner_product.hpp"
#include "splinet/spline.hpp"

namespace splinet {

/// Position of one member inside the dyadic net.
struct NetPosition {
  int level = 0;            // 1 = bottom of the pyramid
  std::size_t tuplet = 0;   // 1-based tuplet index, left to right
  std::size_t position = 0; // index inside the k-tuplet
  bool operator==(const NetPosition&) const = default;
};

/// Orthonormal spline family organized as a dyadic net of k-tuplets. An empty
/// layout marks a family without net structure (one- or two-sided output).
class Splinet {
public:
  Splinet(SplineFamily basis, int levels, std::vector<NetPosition> layout, bool periodic);

  const SplineFamily& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }
  int order() const { return basis_.order(); }
  int levels() const { return levels_; }
  const std::vector<NetPosition>& layout() const { return layout_; }
  bool is_periodic() const { return periodic_; }

  /// Member indices on level l, in index order.
  std::vector<std::size_t> members_at_level(int level) const;
  std::size_t tuplets_at_level(int level) const;
  /// Highest level present in the layout.
  int top_level() const;

private:
  SplineFamily basis_;
  int levels_ = 0;
  std::vector<NetPosition> layout_;
  bool periodic_ = false;
};

/// Classical left-to-right Gram–Schmidt (modified form) with support
/// screening: projections on members whose support is disjoint from the input
/// are skipped and not counted. Throws DependenceError on a vanishing pivot.
SplineFamily gram_schmidt_one_sided(const SplineFamily& family, OpCounter& counter);

/// Two-sided Gram–Schmidt: one-sided from each end towards the middle, then
/// the overlapping central members are orthonormalized jointly with the
/// inverse square root of their Gram matrix. Mirror-symmetric by construction.
SplineFamily gram_schmidt_symmetric(const SplineFamily& family, OpCounter& counter);

/// Replace `members` by G^{-1/2}·members (G their Gram matrix). Order
/// independent. Counts k(k+1)/2 inner products.
void symmetric_orthonormalize(std::vector<Spline>& members, OpCounter& counter);

/// Ruler-sequence level of the 1-based tuplet index: 1 + trailing zeros.
int dyadic_level(std::size_t tuplet);

/// Builds an orthonormal net tuplet by tuplet in the coefficient space of a
/// fixed input family. The only quadrature inner products are entries
/// ⟨f_i, f_j⟩ of the input family's Gram band, evaluated lazily for pairs with
/// overlapping support and reused afterwards; projections onto built members
/// are exact linear algebra on those entries.
class NetBuilder {
public:
  NetBuilder(const SplineFamily& family, OpCounter& counter);

  /// Orthonormalize the raw members `indices` against every built member whose
  /// support meets theirs, then symmetrically within the tuplet.
  void add_tuplet(std::span<const std::size_t> indices, int level, std::size_t tuplet);

  /// Built members that overlapped the most recent tuplet.
  const std::vector<std::size_t>& last_overlap() const { return last_overlap_; }

  bool built(std::size_t i) const { return built_[i]; }
  const Spline& member(std::size_t i) const { return *members_[i]; }
  const Support& member_support(std::size_t i) const { return member_support_[i]; }
  const Eigen::VectorXd& coefficients(std::size_t i) const { return coeffs_[i]; }
  const NetPosition& position(std::size_t i) const { return layout_[i]; }

  /// All members, which must all have been built.
  SplineFamily finish_family() const;
  std::vector<NetPosition> finish_layout() const;

private:
  double band(std::size_t i, std::size_t j);
  double raw_dot(std::size_t i, const Eigen::VectorXd& c);
  double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

  const SplineFamily& family_;
  OpCounter& counter_;
  std::vector<Support> raw_support_;
  Eigen::MatrixXd band_;
  std::vector<std::vector<bool>> band_known_;
  std::vector<bool> built_;
  std::vector<Eigen::VectorXd> coeffs_;
  std::vector<std::optional<Spline>> members_;
  std::vector<Support> member_support_;
  std::vector<NetPosition> layout_;
  std::vector<std::size_t> build_order_;
  std::vector<std::size_t> last_overlap_;
};

/// Dyadic splinet of a B-spline family of order k ≥ 1: consecutive k-tuplets
/// (the last possibly incomplete), tuplet j on level 1 + ctz(j), levels built
/// bottom-up. levels() = ⌈log2(size/k)⌉.
Splinet dyadic_splinet(const SplineFamily& family, OpCounter& counter);

/// Σ over members of support length / domain length.
double total_support(const SplineFamily& family, double zero_tol = kDefaultZeroTol);
double total_support(const Splinet& net, double zero_tol = kDefaultZeroTol);

struct CostReport {
  int k = 0;
  std::size_t n = 0;
  std::size_t measured = 0;       // cross inner products
  std::size_t measured_total = 0; // including norms
  std::optional<double> j1;
  std::optional<double> j2;
  double total_support = 0.0;
  std::optional<double> predicted_total_support;
};

/// Closed forms for the dyadic case n = k·2^N, N ≥ 1:
///   J¹ = 2nk − 3k² − k,  J² = (5k−1)n/4 − 5k²/2 − (3k−1)/4,
///   total support k·log2(2n/k).
/// Throws splinet::Error for non-dyadic (k, n). Measured fields are zero.
CostReport predicted_costs(int k, std::size_t n);

/// N with n = k·2^N, if any.
std::optional<int> dyadic_exponent(int k, std::size_t n);

} // namespace splinet
