#pragma once

#include <cstddef>
#include <vector>

#include "splinet/inner_product.hpp"
#include "splinet/orthogonalize.hpp"
#include "splinet/spline.hpp"

namespace splinet {

/// Periodic B-spline basis over a periodic mesh ξ₀ < … < ξ_{n+1}, ξ₀ ≡ ξ_{n+1}.
///
/// `extended` holds the n+k+1 ordinary B-splines on the extended mesh.
/// `members` holds the n+1 periodic splines restricted to [ξ₀, ξ_{n+1}]:
/// first the n+1−k regular (zero-boundary) ones, then the k wrap-around
/// members, whose indices are listed in `extra_indices`.
struct PeriodicBasis {
  MeshPtr original_mesh;
  MeshPtr extended_mesh;
  int order = 0;
  SplineFamily extended;
  SplineFamily members;
  std::vector<std::size_t> extra_indices;

  std::size_t dimension() const { return members.size(); }
  std::size_t regular_count() const { return members.size() - extra_indices.size(); }
};

/// k knots before ξ₀ repeating the last k spacings and k knots after ξ_{n+1}
/// repeating the first k spacings; n+2k+2 knots, not periodic.
KnotMesh extend_knots(const KnotMesh& mesh, int order);

/// Throws IdentificationError if the first and last k-tuples of the extended
/// family do not coincide after the period shift.
PeriodicBasis build_periodic_bsplines(const MeshPtr& mesh, int order);

/// Largest pointwise gap between the first extended k-tuple and the period
/// shifted last one (the identification signature of the extension).
double identification_defect(const SplineFamily& extended, const KnotMesh& original, int order);

/// Value at ξ₀ + ((θ − ξ₀) mod T); the seam point maps to ξ_{n+1}.
double periodic_evaluate(const Spline& s, double theta);
double periodic_evaluate_derivative(const Spline& s, double theta, int deriv);

/// max over derivative orders 0..k−1 of |s^{(j)}(ξ₀+) − s^{(j)}(ξ_{n+1}−)|.
double seam_defect(const Spline& s);

/// Re-express a periodic spline on a mesh holding the same circle knots with
/// a different starting point (any shift by whole periods is allowed).
Spline rebase(const Spline& s, const MeshPtr& target);

/// Circle mesh starting at knot `start` of `mesh`: ξ_start, …, ξ_start + T.
KnotMesh rotated_mesh(const KnotMesh& mesh, std::size_t start);

/// Periodic splinet: dyadic net over the regular members, then the extra
/// k-tuplet is orthogonalized against the net members it overlaps and
/// symmetrically within itself; it joins the top regular level.
/// `extra_overlap`, if given, receives the net members the extra tuplet met.
Splinet build_periodic_splinet(const PeriodicBasis& basis, OpCounter& counter,
                               std::vector<std::size_t>* extra_overlap = nullptr);

} // namespace splinet
