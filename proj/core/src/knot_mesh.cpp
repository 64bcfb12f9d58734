#include "splinet/knot_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splinet/error.hpp"

namespace splinet {

KnotMesh::KnotMesh(std::vector<double> knots, bool periodic)
  : knots_(std::move(knots))
  , periodic_(periodic) {
  if (knots_.size() < 2) {
    throw Error("knot mesh needs at least 2 knots, got " + std::to_string(knots_.size()));
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) {
      throw Error("knot " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      throw Error("knots must be strictly increasing (violated at index " +
                  std::to_string(i) + ")");
    }
  }
}

KnotMesh KnotMesh::uniform(std::size_t segments, double start, double end, bool periodic) {
  if (segments == 0) {
    throw Error("uniform mesh needs at least one segment");
  }
  std::vector<double> knots(segments + 1);
  const double h = (end - start) / static_cast<double>(segments);
  for (std::size_t i = 0; i <= segments; ++i) {
    knots[i] = start + h * static_cast<double>(i);
  }
  knots.back() = end;
  return KnotMesh(std::move(knots), periodic);
}

std::size_t KnotMesh::segment_of(double x) const {
  if (x <= knots_.front()) {
    return 0;
  }
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.end()) {
    return segment_count() - 1;
  }
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

KnotMesh KnotMesh::normalized() const {
  const double a = start();
  const double len = length();
  std::vector<double> out(knots_.size());
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    out[i] = (knots_[i] - a) / len;
  }
  out.front() = 0.0;
  out.back() = 1.0;
  return KnotMesh(std::move(out), periodic_);
}

bool same_mesh(const MeshPtr& a, const MeshPtr& b) {
  return a == b || (a && b && *a == *b);
}

} // namespace splinet
