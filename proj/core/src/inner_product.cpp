#include "splinet/inner_product.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "splinet/error.hpp"
#include "splinet/quadrature.hpp"

namespace splinet {

namespace {

bool row_is_exact_zero(const Eigen::MatrixXd& t, std::size_t row) {
  return (t.row(static_cast<Eigen::Index>(row)).array() == 0.0).all();
}

double integrate_product(const Spline& a, const Spline& b, OpCounter* counter) {
  if (!same_mesh(a.mesh_ptr(), b.mesh_ptr())) {
    throw Error("inner_product: splines live on different meshes");
  }
  const KnotMesh& mesh = a.mesh();
  const GaussRule rule = gauss_legendre(static_cast<std::size_t>(std::max(a.order(), b.order())) + 1);
  double total = 0.0;
  std::size_t segments = 0;
  for (std::size_t i = 0; i < mesh.segment_count(); ++i) {
    if (row_is_exact_zero(a.taylor(), i) || row_is_exact_zero(b.taylor(), i)) {
      continue;
    }
    ++segments;
    const double half = 0.5 * mesh.segment_length(i);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = half * (rule.nodes[q] + 1.0);
      acc += rule.weights[q] * a.segment_value(i, t) * b.segment_value(i, t);
    }
    total += half * acc;
  }
  if (counter) {
    counter->record_segments(segments);
  }
  return total;
}

} // namespace

double inner_product(const Spline& a, const Spline& b, OpCounter* counter) {
  const double v = integrate_product(a, b, counter);
  if (counter) {
    counter->record_inner_product(&a == &b);
  }
  return v;
}

double squared_norm(const Spline& s, OpCounter* counter) {
  const double v = integrate_product(s, s, counter);
  if (counter) {
    counter->record_inner_product(true);
  }
  return v;
}

double norm(const Spline& s, OpCounter* counter) {
  return std::sqrt(std::max(0.0, squared_norm(s, counter)));
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries)
  : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error("Gram matrix must be square");
  }
}

double GramMatrix::identity_defect() const {
  const auto n = entries_.rows();
  return (entries_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

void GramMatrix::write_csv(std::ostream& out, double zero_tol) const {
  out << "i,j,value\n";
  char buf[64];
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = i; j < entries_.cols(); ++j) {
      const double v = entries_(i, j);
      if (std::abs(v) <= zero_tol) {
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << i << ',' << j << ',' << buf << '\n';
    }
  }
}

GramMatrix gram_matrix(const SplineFamily& family, OpCounter* counter) {
  if (family.empty()) {
    throw Error("gram_matrix of an empty family");
  }
  const auto m = static_cast<Eigen::Index>(family.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Spline& a = family[static_cast<std::size_t>(i)];
    g(i, i) = squared_norm(a, counter);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      g(i, j) = inner_product(a, family[static_cast<std::size_t>(j)], counter);
      g(j, i) = g(i, j);
    }
  }
  return GramMatrix(std::move(g));
}

} // namespace splinet
