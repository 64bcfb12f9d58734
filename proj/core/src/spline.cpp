#include "splinet/spline.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "splinet/error.hpp"

namespace splinet {

namespace {

// Σ_{m ≥ deriv} c_m t^{m−deriv} / (m−deriv)!
double taylor_poly(const Eigen::MatrixXd& taylor, std::size_t row, double t, int deriv) {
  const int top = static_cast<int>(taylor.cols()) - 1;
  if (deriv > top) {
    return 0.0;
  }
  double acc = taylor(static_cast<Eigen::Index>(row), top);
  for (int m = top - 1; m >= deriv; --m) {
    acc = taylor(static_cast<Eigen::Index>(row), m) + acc * t / static_cast<double>(m - deriv + 1);
  }
  return acc;
}

void require_compatible(const Spline& a, const Spline& b, const char* op) {
  if (!same_mesh(a.mesh_ptr(), b.mesh_ptr())) {
    throw Error(std::string(op) + ": splines live on different meshes");
  }
  if (a.order() != b.order()) {
    throw Error(std::string(op) + ": order mismatch (" + std::to_string(a.order()) +
                " vs " + std::to_string(b.order()) + ")");
  }
}

} // namespace

Spline::Spline(MeshPtr mesh, int order, Eigen::MatrixXd taylor)
  : mesh_(std::move(mesh))
  , order_(order)
  , taylor_(std::move(taylor)) {
  if (!mesh_) {
    throw Error("spline needs a mesh");
  }
  if (order_ < 0) {
    throw Error("spline order must be non-negative");
  }
  if (taylor_.rows() != static_cast<Eigen::Index>(mesh_->knot_count()) ||
      taylor_.cols() != order_ + 1) {
    throw Error("taylor matrix must be " + std::to_string(mesh_->knot_count()) + " x " +
                std::to_string(order_ + 1) + ", got " + std::to_string(taylor_.rows()) +
                " x " + std::to_string(taylor_.cols()));
  }
}

Spline Spline::zero(MeshPtr mesh, int order) {
  const auto rows = static_cast<Eigen::Index>(mesh->knot_count());
  return Spline(std::move(mesh), order, Eigen::MatrixXd::Zero(rows, order + 1));
}

double Spline::segment_value(std::size_t seg, double t, int deriv) const {
  return taylor_poly(taylor_, seg, t, deriv);
}

bool Spline::segment_is_zero(std::size_t seg, double tol) const {
  return taylor_.row(static_cast<Eigen::Index>(seg)).cwiseAbs().maxCoeff() <= tol;
}

Spline& Spline::operator+=(const Spline& other) {
  return axpy(1.0, other);
}

Spline& Spline::operator-=(const Spline& other) {
  return axpy(-1.0, other);
}

Spline& Spline::operator*=(double alpha) {
  taylor_ *= alpha;
  return *this;
}

Spline& Spline::axpy(double alpha, const Spline& other) {
  require_compatible(*this, other, "axpy");
  taylor_.noalias() += alpha * other.taylor_;
  return *this;
}

Spline operator+(Spline a, const Spline& b) {
  return a += b;
}

Spline operator-(Spline a, const Spline& b) {
  return a -= b;
}

Spline operator*(double alpha, Spline s) {
  return s *= alpha;
}

SplineFamily::SplineFamily(MeshPtr mesh, int order, std::vector<Spline> members)
  : mesh_(std::move(mesh))
  , order_(order) {
  members_.reserve(members.size());
  for (auto& s : members) {
    push_back(std::move(s));
  }
}

void SplineFamily::push_back(Spline s) {
  if (!same_mesh(mesh_, s.mesh_ptr()) || s.order() != order_) {
    throw Error("family members must share mesh and order");
  }
  members_.push_back(std::move(s));
}

SplineFamily build_order0_bsplines(const MeshPtr& mesh) {
  const std::size_t segments = mesh->segment_count();
  const auto rows = static_cast<Eigen::Index>(mesh->knot_count());
  SplineFamily family(mesh, 0);
  for (std::size_t l = 0; l < segments; ++l) {
    Eigen::MatrixXd taylor = Eigen::MatrixXd::Zero(rows, 1);
    taylor(static_cast<Eigen::Index>(l), 0) = 1.0;
    if (l + 1 == segments) {
      taylor(rows - 1, 0) = 1.0;
    }
    family.push_back(Spline(mesh, 0, std::move(taylor)));
  }
  return family;
}

// One Cox–de Boor step on Taylor rows. Multiplying a piece p by the linear
// weight w(x) = α + β(x − ξ_i) gives (wp)^{(j)}(ξ_i) = α p^{(j)} + jβ p^{(j−1)},
// which holds for right and left derivatives alike.
SplineFamily build_bsplines(const MeshPtr& mesh, int order) {
  if (order < 0) {
    throw Error("B-spline order must be non-negative");
  }
  const std::size_t segments = mesh->segment_count();
  const int n = static_cast<int>(segments) - 1;
  if (order > n) {
    throw Error("order " + std::to_string(order) + " exceeds n = " + std::to_string(n) +
                " for a mesh of " + std::to_string(mesh->knot_count()) + " knots");
  }

  SplineFamily current = build_order0_bsplines(mesh);
  const auto rows = static_cast<Eigen::Index>(mesh->knot_count());
  const auto& xi = mesh->knots();

  for (int k = 1; k <= order; ++k) {
    SplineFamily next(mesh, k);
    const std::size_t count = segments - static_cast<std::size_t>(k);
    for (std::size_t l = 0; l < count; ++l) {
      const Eigen::MatrixXd& left = current[l].taylor();
      const Eigen::MatrixXd& right = current[l + 1].taylor();
      const double d1 = xi[l + k] - xi[l];
      const double d2 = xi[l + k + 1] - xi[l + 1];
      Eigen::MatrixXd taylor = Eigen::MatrixXd::Zero(rows, k + 1);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double x = xi[static_cast<std::size_t>(i)];
        const double a1 = (x - xi[l]) / d1;
        const double b1 = 1.0 / d1;
        const double a2 = (xi[l + k + 1] - x) / d2;
        const double b2 = -1.0 / d2;
        for (int j = 0; j <= k; ++j) {
          const double p = j < k ? left(i, j) : 0.0;
          const double q = j < k ? right(i, j) : 0.0;
          double v = a1 * p + a2 * q;
          if (j > 0) {
            v += j * (b1 * left(i, j - 1) + b2 * right(i, j - 1));
          }
          taylor(i, j) = v;
        }
      }
      next.push_back(Spline(mesh, k, std::move(taylor)));
    }
    current = std::move(next);
  }
  return current;
}

double evaluate(const Spline& s, double x) {
  return evaluate_derivative(s, x, 0);
}

double evaluate_derivative(const Spline& s, double x, int deriv) {
  const KnotMesh& mesh = s.mesh();
  if (!mesh.contains(x)) {
    throw Error("abscissa " + std::to_string(x) + " outside [" + std::to_string(mesh.start()) +
                ", " + std::to_string(mesh.end()) + "]");
  }
  const std::size_t seg = mesh.segment_of(x);
  return s.segment_value(seg, x - mesh.knot(seg), deriv);
}

Spline derivative(const Spline& s) {
  if (s.order() < 1) {
    throw Error("cannot differentiate an order-0 spline within the spline space");
  }
  Eigen::MatrixXd taylor = s.taylor().rightCols(s.order());
  return Spline(s.mesh_ptr(), s.order() - 1, std::move(taylor));
}

Spline linear_combination(const SplineFamily& family, std::span<const double> weights) {
  if (weights.size() != family.size()) {
    throw Error("linear_combination: " + std::to_string(weights.size()) + " weights for " +
                std::to_string(family.size()) + " members");
  }
  Spline out = Spline::zero(family.mesh_ptr(), family.order());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] != 0.0) {
      out.axpy(weights[i], family[i]);
    }
  }
  return out;
}

Spline linear_combination(const SplineFamily& family, const Eigen::VectorXd& weights) {
  return linear_combination(family, std::span<const double>(weights.data(),
                                                            static_cast<std::size_t>(weights.size())));
}

Support support_of(const Spline& s, double zero_tol) {
  Support runs;
  const std::size_t segments = s.mesh().segment_count();
  bool open = false;
  for (std::size_t i = 0; i < segments; ++i) {
    const bool live = !s.segment_is_zero(i, zero_tol);
    if (live && !open) {
      runs.push_back({i, i});
      open = true;
    } else if (live) {
      runs.back().last = i;
    } else {
      open = false;
    }
  }
  return runs;
}

std::size_t support_segment_count(const Support& support) {
  std::size_t total = 0;
  for (const auto& run : support) {
    total += run.size();
  }
  return total;
}

double support_length(const KnotMesh& mesh, const Support& support) {
  double total = 0.0;
  for (const auto& run : support) {
    total += mesh.knot(run.last + 1) - mesh.knot(run.first);
  }
  return total;
}

bool supports_overlap(const Support& a, const Support& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].last < b[j].first) {
      ++i;
    } else if (b[j].last < a[i].first) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

Eigen::VectorXd left_derivatives(const Spline& s, std::size_t knot) {
  if (knot == 0 || knot >= s.mesh().knot_count()) {
    throw std::out_of_range("left_derivatives: knot index out of range");
  }
  const std::size_t seg = knot - 1;
  const double h = s.mesh().segment_length(seg);
  Eigen::VectorXd d(s.order() + 1);
  for (int j = 0; j <= s.order(); ++j) {
    d(j) = s.segment_value(seg, h, j);
  }
  return d;
}

namespace {

// ∫_0^t of the Taylor piece in row `row`.
double piece_antiderivative(const Eigen::MatrixXd& taylor, std::size_t row, double t) {
  double acc = 0.0;
  double factor = t;  // t^{m+1}/(m+1)!
  for (Eigen::Index m = 0; m < taylor.cols(); ++m) {
    acc += taylor(static_cast<Eigen::Index>(row), m) * factor;
    factor *= t / static_cast<double>(m + 2);
  }
  return acc;
}

} // namespace

double integrate(const Spline& s) {
  const KnotMesh& mesh = s.mesh();
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.segment_count(); ++i) {
    total += piece_antiderivative(s.taylor(), i, mesh.segment_length(i));
  }
  return total;
}

double integrate(const Spline& s, double a, double b) {
  const KnotMesh& mesh = s.mesh();
  if (a > b) {
    return -integrate(s, b, a);
  }
  if (!mesh.contains(a) || !mesh.contains(b)) {
    throw Error("integration bounds outside the spline domain");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.segment_count(); ++i) {
    const double lo = std::max(a, mesh.knot(i));
    const double hi = std::min(b, mesh.knot(i + 1));
    if (hi <= lo) {
      continue;
    }
    total += piece_antiderivative(s.taylor(), i, hi - mesh.knot(i)) -
             piece_antiderivative(s.taylor(), i, lo - mesh.knot(i));
  }
  return total;
}

double max_smoothness_defect(const Spline& s) {
  double worst = 0.0;
  const std::size_t knots = s.mesh().knot_count();
  for (std::size_t i = 1; i + 1 < knots; ++i) {
    const Eigen::VectorXd left = left_derivatives(s, i);
    for (int j = 0; j < s.order(); ++j) {
      worst = std::max(worst, std::abs(left(j) - s.taylor()(static_cast<Eigen::Index>(i), j)));
    }
  }
  return worst;
}

Spline with_canonical_sign(Spline s) {
  const Eigen::MatrixXd& t = s.taylor();
  double best = 0.0;
  double sign = 1.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (std::abs(t(i, j)) > best) {
        best = std::abs(t(i, j));
        sign = t(i, j) < 0.0 ? -1.0 : 1.0;
      }
    }
  }
  if (sign < 0.0) {
    s *= -1.0;
  }
  return s;
}

} // namespace splinet

namespace splinet {

MeshPtr merged_mesh(const MeshPtr& a, const MeshPtr& b) {
  if (same_mesh(a, b)) {
    return a;
  }
  const double scale = std::max(a->length(), b->length());
  if (std::abs(a->start() - b->start()) > 1e-12 * scale ||
      std::abs(a->end() - b->end()) > 1e-12 * scale) {
    throw Error("merged_mesh: meshes cover different domains");
  }
  std::vector<double> knots;
  knots.reserve(a->knot_count() + b->knot_count());
  std::merge(a->knots().begin(), a->knots().end(), b->knots().begin(), b->knots().end(),
             std::back_inserter(knots));
  std::vector<double> unique;
  for (double x : knots) {
    if (unique.empty() || x - unique.back() > 1e-12 * scale) {
      unique.push_back(x);
    }
  }
  unique.back() = a->end();
  return make_mesh(KnotMesh(std::move(unique), a->periodic() && b->periodic()));
}

Spline refine(const Spline& s, const MeshPtr& finer) {
  if (same_mesh(s.mesh_ptr(), finer)) {
    return s;
  }
  const KnotMesh& coarse = s.mesh();
  const double scale = coarse.length();
  const auto fine = finer->knots();
  for (double x : coarse.knots()) {
    const auto it = std::lower_bound(fine.begin(), fine.end(), x - 1e-12 * scale);
    if (it == fine.end() || std::abs(*it - x) > 1e-12 * scale) {
      throw Error("refine: target mesh does not contain knot " + std::to_string(x));
    }
  }

  const std::size_t segments = finer->segment_count();
  Eigen::MatrixXd taylor(static_cast<Eigen::Index>(segments + 1), s.order() + 1);
  for (std::size_t i = 0; i < segments; ++i) {
    const double mid = 0.5 * (finer->knot(i) + finer->knot(i + 1));
    const std::size_t seg = coarse.segment_of(mid);
    const double t = finer->knot(i) - coarse.knot(seg);
    for (int d = 0; d <= s.order(); ++d) {
      taylor(static_cast<Eigen::Index>(i), d) = s.segment_value(seg, t, d);
    }
  }
  taylor.row(static_cast<Eigen::Index>(segments)) =
      left_derivatives(s, coarse.segment_count()).transpose();
  return Spline(finer, s.order(), std::move(taylor));
}

} // namespace splinet
