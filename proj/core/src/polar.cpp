#include "splinet/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "splinet/error.hpp"

namespace splinet {

PolarFrame make_frame(double min_value, double max_value, int levels) {
  PolarFrame f;
  f.M = max_value;
  f.m = min_value;
  f.a = max_value > 0.0 ? std::log(2.0) / max_value : 1.0;
  f.levels = levels;
  return f;
}

std::vector<double> sample_abscissae(const KnotMesh& mesh, int samples_per_segment) {
  if (samples_per_segment < 2) {
    throw Error("samples_per_segment must be at least 2");
  }
  std::vector<double> xs;
  xs.reserve(mesh.segment_count() * static_cast<std::size_t>(samples_per_segment) + 1);
  for (std::size_t seg = 0; seg < mesh.segment_count(); ++seg) {
    const double a = mesh.knot(seg);
    const double h = mesh.segment_length(seg);
    for (int q = 0; q < samples_per_segment; ++q) {
      xs.push_back(a + h * q / samples_per_segment);
    }
  }
  xs.push_back(mesh.end());
  return xs;
}

PolarFrame frame_for(std::span<const Spline> curves, int samples_per_segment, int levels) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Spline& s : curves) {
    for (double x : sample_abscissae(s.mesh(), samples_per_segment)) {
      const double y = evaluate(s, x);
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (curves.empty()) {
    lo = hi = 0.0;
  }
  return make_frame(lo, hi, levels);
}

PolarPoint polar_map(double x, double y, const PolarFrame& frame) {
  return {2.0 * std::numbers::pi * x, std::exp(frame.a * y)};
}

double baseline_radius(int level, const PolarFrame& frame) {
  if (level < 1 || level > frame.levels) {
    throw Error("level " + std::to_string(level) + " outside 1.." + std::to_string(frame.levels));
  }
  return 2.0 * (frame.levels - level) + 1.0;
}

PolarPoint dyadic_polar_map(double x, double y, int level, const PolarFrame& frame) {
  const double base = baseline_radius(level, frame) - 1.0;
  return {2.0 * std::numbers::pi * x, base + std::exp(frame.a * y)};
}

std::vector<double> knot_angles(const KnotMesh& mesh) {
  std::vector<double> out;
  out.reserve(mesh.knot_count());
  for (double x : mesh.knots()) {
    out.push_back(2.0 * std::numbers::pi * (x - mesh.start()) / mesh.length());
  }
  return out;
}

PlanePoint to_plane(const PolarPoint& p) {
  return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

std::vector<PolarPoint> polar_curve(const Spline& s, const PolarFrame& frame,
                                    int samples_per_segment, std::optional<int> level) {
  const KnotMesh& mesh = s.mesh();
  std::vector<PolarPoint> out;
  for (double x : sample_abscissae(mesh, samples_per_segment)) {
    const double u = (x - mesh.start()) / mesh.length();
    const double y = evaluate(s, x);
    out.push_back(level ? dyadic_polar_map(u, y, *level, frame) : polar_map(u, y, frame));
  }
  return out;
}

} // namespace splinet
