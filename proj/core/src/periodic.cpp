#include "splinet/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splinet/error.hpp"

namespace splinet {

namespace {

constexpr double kIdentificationTol = 1e-12;

// Restriction of an extended-mesh spline to the original domain, which starts
// at extended knot `offset`.
Spline restrict_to(const Spline& ext, const MeshPtr& circle, std::size_t offset) {
  const std::size_t segments = circle->segment_count();
  Eigen::MatrixXd taylor(static_cast<Eigen::Index>(segments + 1), ext.order() + 1);
  for (std::size_t i = 0; i < segments; ++i) {
    taylor.row(static_cast<Eigen::Index>(i)) = ext.taylor().row(static_cast<Eigen::Index>(offset + i));
  }
  taylor.row(static_cast<Eigen::Index>(segments)) =
      left_derivatives(ext, offset + segments).transpose();
  return Spline(circle, ext.order(), std::move(taylor));
}

double wrap(const KnotMesh& mesh, double theta) {
  const double period = mesh.length();
  double x = std::fmod(theta - mesh.start(), period);
  if (x <= 0.0) {
    x += period;
  }
  return std::min(mesh.start() + x, mesh.end());
}

} // namespace

KnotMesh extend_knots(const KnotMesh& mesh, int order) {
  if (!mesh.periodic()) {
    throw Error("extend_knots: mesh is not periodic");
  }
  if (order < 0) {
    throw Error("extend_knots: negative order");
  }
  const std::size_t segments = mesh.segment_count();
  const auto k = static_cast<std::size_t>(order);
  if (segments < k + 1) {
    throw Error("extend_knots: n = " + std::to_string(segments - 1) + " < k = " + std::to_string(k));
  }
  const double period = mesh.length();
  std::vector<double> knots;
  knots.reserve(segments + 1 + 2 * k);
  for (std::size_t i = 1; i <= k; ++i) {
    knots.push_back(mesh.knot(segments - k + i - 1) - period);
  }
  for (double x : mesh.knots()) {
    knots.push_back(x);
  }
  for (std::size_t i = 1; i <= k; ++i) {
    knots.push_back(mesh.knot(i) + period);
  }
  return KnotMesh(std::move(knots), false);
}

double identification_defect(const SplineFamily& extended, const KnotMesh& original, int order) {
  const auto k = static_cast<std::size_t>(order);
  const std::size_t segments = original.segment_count();
  const double period = original.length();
  const KnotMesh& ext = extended.mesh();
  constexpr int kSamples = 8;
  double worst = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const Spline& first = extended[j];
    const Spline& last = extended[segments + j];
    for (std::size_t seg = j; seg <= j + k; ++seg) {
      const double a = ext.knot(seg);
      const double h = ext.segment_length(seg);
      for (int q = 1; q <= kSamples; ++q) {
        const double x = a + h * q / kSamples;
        const double shifted = std::min(x + period, ext.end());
        worst = std::max(worst, std::abs(evaluate(first, x) - evaluate(last, shifted)));
      }
    }
  }
  return worst;
}

PeriodicBasis build_periodic_bsplines(const MeshPtr& mesh, int order) {
  const KnotMesh ext_mesh = extend_knots(*mesh, order);
  PeriodicBasis basis{mesh, make_mesh(ext_mesh), order,
                      SplineFamily(mesh, order), SplineFamily(mesh, order), {}};
  basis.extended = build_bsplines(basis.extended_mesh, order);

  const auto k = static_cast<std::size_t>(order);
  const std::size_t segments = mesh->segment_count();
  if (basis.extended.size() != segments + k) {
    throw std::logic_error("extended B-spline count mismatch");
  }

  const double defect = identification_defect(basis.extended, *mesh, order);
  if (!(defect <= kIdentificationTol)) {
    throw IdentificationError("first and last " + std::to_string(k) +
                              "-tuples differ by " + std::to_string(defect) +
                              " after the period shift");
  }

  for (std::size_t l = k; l < segments; ++l) {
    basis.members.push_back(restrict_to(basis.extended[l], mesh, k));
  }
  for (std::size_t j = 0; j < k; ++j) {
    Spline wrapped = restrict_to(basis.extended[j], mesh, k);
    wrapped += restrict_to(basis.extended[segments + j], mesh, k);
    basis.extra_indices.push_back(basis.members.size());
    basis.members.push_back(std::move(wrapped));
  }
  return basis;
}

double periodic_evaluate(const Spline& s, double theta) {
  return evaluate(s, wrap(s.mesh(), theta));
}

double periodic_evaluate_derivative(const Spline& s, double theta, int deriv) {
  return evaluate_derivative(s, wrap(s.mesh(), theta), deriv);
}

double seam_defect(const Spline& s) {
  const std::size_t last = s.mesh().knot_count() - 1;
  const Eigen::VectorXd left = left_derivatives(s, last);
  double worst = 0.0;
  for (int j = 0; j < s.order(); ++j) {
    worst = std::max(worst, std::abs(left(j) - s.taylor()(0, j)));
  }
  return worst;
}

KnotMesh rotated_mesh(const KnotMesh& mesh, std::size_t start) {
  const std::size_t segments = mesh.segment_count();
  if (start >= segments) {
    throw std::out_of_range("rotated_mesh: start knot out of range");
  }
  std::vector<double> knots;
  knots.reserve(segments + 1);
  for (std::size_t i = start; i <= segments; ++i) {
    knots.push_back(mesh.knot(i));
  }
  for (std::size_t i = 1; i <= start; ++i) {
    knots.push_back(mesh.knot(i) + mesh.length());
  }
  return KnotMesh(std::move(knots), true);
}

Spline rebase(const Spline& s, const MeshPtr& target) {
  const KnotMesh& src = s.mesh();
  const std::size_t segments = src.segment_count();
  if (target->segment_count() != segments) {
    throw Error("rebase: meshes have different segment counts");
  }
  const double period = src.length();
  if (std::abs(target->length() - period) > 1e-9 * period) {
    throw Error("rebase: meshes have different periods");
  }
  // circle position of each target knot → source knot index in [0, segments)
  auto source_index = [&](double x) {
    double u = std::fmod(x - src.start(), period);
    if (u < 0.0) {
      u += period;
    }
    for (std::size_t j = 0; j <= segments; ++j) {
      if (std::abs(src.knot(j) - src.start() - u) <= 1e-9 * period) {
        return j == segments ? std::size_t{0} : j;
      }
    }
    throw Error("rebase: target knot " + std::to_string(x) + " is not a source knot");
  };
  Eigen::MatrixXd taylor(static_cast<Eigen::Index>(segments + 1), s.order() + 1);
  for (std::size_t i = 0; i < segments; ++i) {
    taylor.row(static_cast<Eigen::Index>(i)) =
        s.taylor().row(static_cast<Eigen::Index>(source_index(target->knot(i))));
  }
  const std::size_t end_index = source_index(target->end());
  const Eigen::VectorXd left = left_derivatives(s, end_index == 0 ? segments : end_index);
  taylor.row(static_cast<Eigen::Index>(segments)) = left.transpose();
  return Spline(target, s.order(), std::move(taylor));
}

Splinet build_periodic_splinet(const PeriodicBasis& basis, OpCounter& counter,
                               std::vector<std::size_t>* extra_overlap) {
  if (basis.order < 1) {
    throw Error("periodic splinet needs order ≥ 1");
  }
  const auto k = static_cast<std::size_t>(basis.order);
  const std::size_t regular = basis.regular_count();
  const std::size_t tuplets = (regular + k - 1) / k;

  int top = 1;
  for (std::size_t j = 1; j <= tuplets; ++j) {
    top = std::max(top, dyadic_level(j));
  }

  NetBuilder builder(basis.members, counter);
  for (int level = 1; level <= top; ++level) {
    for (std::size_t j = 1; j <= tuplets; ++j) {
      if (dyadic_level(j) != level) {
        continue;
      }
      std::vector<std::size_t> idx;
      for (std::size_t i = (j - 1) * k; i < std::min(j * k, regular); ++i) {
        idx.push_back(i);
      }
      builder.add_tuplet(idx, level, j);
    }
  }
  builder.add_tuplet(basis.extra_indices, top, tuplets + 1);
  if (extra_overlap) {
    *extra_overlap = builder.last_overlap();
  }

  std::size_t levels = 0;
  while ((k << levels) < basis.dimension()) {
    ++levels;
  }
  return Splinet(builder.finish_family(), static_cast<int>(levels), builder.finish_layout(), true);
}

} // namespace splinet
