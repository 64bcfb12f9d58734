#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "splinet/knot_mesh.hpp"

namespace splinet {

inline constexpr double kDefaultZeroTol = 1e-12;

/// Piecewise polynomial of degree `order` stored by its derivatives at the
/// knots. Row i of the Taylor matrix holds the derivatives of orders
/// 0..order at ξ_i taken from the right; the last row is taken from the left.
/// The polynomial on segment (ξ_i, ξ_{i+1}] is reconstructed from row i alone.
class Spline {
public:
  Spline(MeshPtr mesh, int order, Eigen::MatrixXd taylor);

  static Spline zero(MeshPtr mesh, int order);

  const KnotMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int order() const { return order_; }
  const Eigen::MatrixXd& taylor() const { return taylor_; }

  /// Derivative `deriv` of the polynomial piece of segment `seg`, at local
  /// offset t = x − ξ_seg (t may equal the segment length).
  double segment_value(std::size_t seg, double t, int deriv = 0) const;

  /// True when every Taylor coefficient of row `seg` is within `tol` of 0.
  bool segment_is_zero(std::size_t seg, double tol = kDefaultZeroTol) const;

  Spline& operator+=(const Spline& other);
  Spline& operator-=(const Spline& other);
  Spline& operator*=(double alpha);

  /// this += alpha * other, orders must agree.
  Spline& axpy(double alpha, const Spline& other);

private:
  MeshPtr mesh_;
  int order_ = 0;
  Eigen::MatrixXd taylor_;
};

Spline operator+(Spline a, const Spline& b);
Spline operator-(Spline a, const Spline& b);
Spline operator*(double alpha, Spline s);

/// Ordered collection of splines sharing one mesh and order.
class SplineFamily {
public:
  SplineFamily(MeshPtr mesh, int order, std::vector<Spline> members = {});

  const KnotMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int order() const { return order_; }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const Spline& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Spline>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  void push_back(Spline s);

private:
  MeshPtr mesh_;
  int order_ = 0;
  std::vector<Spline> members_;
};

/// Inclusive run of segment indices [first, last].
struct SegmentRun {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  bool operator==(const SegmentRun&) const = default;
};

using Support = std::vector<SegmentRun>;

/// Indicator splines of (ξ_ℓ, ξ_{ℓ+1}], one per segment.
SplineFamily build_order0_bsplines(const MeshPtr& mesh);

/// The n+1−k B-splines of degree k under the zero-boundary convention,
/// obtained by k applications of the Cox–de Boor recursion.
SplineFamily build_bsplines(const MeshPtr& mesh, int order);

/// Value at x. Throws splinet::Error outside [ξ₀, ξ_{n+1}].
double evaluate(const Spline& s, double x);

/// Derivative value of order `deriv` at x, right limit at ξ₀ and otherwise
/// the limit from inside the segment containing x.
double evaluate_derivative(const Spline& s, double x, int deriv);

Spline derivative(const Spline& s);

/// Exact member-wise weighted sum.
Spline linear_combination(const SplineFamily& family, std::span<const double> weights);
Spline linear_combination(const SplineFamily& family, const Eigen::VectorXd& weights);

/// Maximal runs of segments carrying a non-zero piece.
Support support_of(const Spline& s, double zero_tol = kDefaultZeroTol);

std::size_t support_segment_count(const Support& support);
double support_length(const KnotMesh& mesh, const Support& support);
bool supports_overlap(const Support& a, const Support& b);

/// Derivatives 0..order at knot i taken from the left (i ≥ 1).
Eigen::VectorXd left_derivatives(const Spline& s, std::size_t knot);

/// Exact integral over the whole domain, and over [a, b] ⊂ domain.
double integrate(const Spline& s);
double integrate(const Spline& s, double a, double b);

/// max over interior knots and derivative orders 0..order−1 of the jump
/// between the left and right Taylor values.
double max_smoothness_defect(const Spline& s);

/// Union of the knots of two meshes over the same domain.
MeshPtr merged_mesh(const MeshPtr& a, const MeshPtr& b);

/// The same piecewise polynomial on a mesh whose knots include those of the
/// spline's mesh. Throws splinet::Error when `finer` does not refine it.
Spline refine(const Spline& s, const MeshPtr& finer);

/// Flip the sign so that the largest-magnitude Taylor coefficient is positive.
Spline with_canonical_sign(Spline s);

} // namespace splinet
