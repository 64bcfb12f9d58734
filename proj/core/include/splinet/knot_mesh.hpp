#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace splinet {

/// Strictly increasing knots ξ₀ < … < ξ_{n+1}. A periodic mesh identifies
/// ξ₀ with ξ_{n+1}; the period is ξ_{n+1} − ξ₀.
///
/// Segment i is the half-open interval (ξ_i, ξ_{i+1}]; ξ₀ itself is assigned
/// to segment 0 so that splines are defined on the closed interval.
class KnotMesh {
public:
  explicit KnotMesh(std::vector<double> knots, bool periodic = false);

  /// `segments` equal segments on [start, end].
  static KnotMesh uniform(std::size_t segments, double start = 0.0,
                          double end = 1.0, bool periodic = false);

  std::span<const double> knots() const { return knots_; }
  double knot(std::size_t i) const { return knots_[i]; }
  std::size_t knot_count() const { return knots_.size(); }
  std::size_t segment_count() const { return knots_.size() - 1; }

  double start() const { return knots_.front(); }
  double end() const { return knots_.back(); }
  double length() const { return knots_.back() - knots_.front(); }
  double segment_length(std::size_t i) const { return knots_[i + 1] - knots_[i]; }

  bool periodic() const { return periodic_; }

  bool contains(double x) const { return x >= start() && x <= end(); }

  /// Segment index under the (ξ_i, ξ_{i+1}] convention. Requires contains(x).
  std::size_t segment_of(double x) const;

  /// Affine image on [0, 1], same periodic flag.
  KnotMesh normalized() const;

  bool operator==(const KnotMesh& other) const = default;

private:
  std::vector<double> knots_;
  bool periodic_ = false;
};

using MeshPtr = std::shared_ptr<const KnotMesh>;

inline MeshPtr make_mesh(KnotMesh mesh) {
  return std::make_shared<const KnotMesh>(std::move(mesh));
}

/// Meshes are compatible when they are the same object or hold equal knots.
bool same_mesh(const MeshPtr& a, const MeshPtr& b);

} // namespace splinet
