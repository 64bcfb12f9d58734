#pragma once

#include <optional>
#include <span>
#include <vector>

#include "splinet/spline.hpp"

namespace splinet {

/// Scale of the polar maps: a = log 2 / M so that the family maximum lands on
/// radius 2. A family with M ≤ 0 falls back to a = 1.
struct PolarFrame {
  double M = 1.0;
  double m = 0.0;
  double a = 0.0;
  int levels = 0;
};

PolarFrame make_frame(double min_value, double max_value, int levels = 0);

/// Frame from the extreme values of all members at the plotted sample points.
PolarFrame frame_for(std::span<const Spline> curves, int samples_per_segment, int levels = 0);

struct PolarPoint {
  double theta = 0.0;
  double r = 0.0;
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
};

/// θ = 2πx, r = exp(a·y) for a normalized abscissa x ∈ (0, 1].
PolarPoint polar_map(double x, double y, const PolarFrame& frame);

/// θ = 2πx, r = 2(N − l) + exp(a·y) for level 1 ≤ l ≤ N = frame.levels.
PolarPoint dyadic_polar_map(double x, double y, int level, const PolarFrame& frame);

/// Radius of the level-l baseline circle, 2(N − l) + 1.
double baseline_radius(int level, const PolarFrame& frame);

/// θ_i = 2π(ξ_i − ξ₀)/T.
std::vector<double> knot_angles(const KnotMesh& mesh);

PlanePoint to_plane(const PolarPoint& p);

/// Sample points of a spline through T (or T_l when `level` is given):
/// `samples_per_segment` points per segment starting at each left knot, plus
/// the right end point, so a periodic spline gives a closed polyline.
std::vector<PolarPoint> polar_curve(const Spline& s, const PolarFrame& frame,
                                    int samples_per_segment,
                                    std::optional<int> level = std::nullopt);

/// Abscissae used by polar_curve, in domain units.
std::vector<double> sample_abscissae(const KnotMesh& mesh, int samples_per_segment);

} // namespace splinet
