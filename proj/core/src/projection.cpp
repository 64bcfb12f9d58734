#include "splinet/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "splinet/error.hpp"
#include "splinet/inner_product.hpp"

namespace splinet {

namespace {

const Splinet& require_net(const NetPtr& net) {
  if (!net) {
    throw Error("projection needs a basis");
  }
  return *net;
}

double circle_position(const KnotMesh& mesh, double x) {
  const double period = mesh.length();
  double u = std::fmod(x - mesh.start(), period);
  if (u <= 0.0) {
    u += period;
  }
  return mesh.start() + std::min(u, period);
}

double argument_on(const KnotMesh& mesh, bool periodic, double x) {
  if (periodic) {
    return circle_position(mesh, x);
  }
  if (!mesh.contains(x)) {
    throw Error("argument " + std::to_string(x) + " outside the basis domain");
  }
  return x;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

ProjectionResult project_splines(std::span<const Spline> curves, const NetPtr& net) {
  const Splinet& n = require_net(net);
  const SplineFamily& basis = n.basis();
  ProjectionResult r{{}, {}, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(curves.size()),
                                                   static_cast<Eigen::Index>(basis.size())),
                     net, SplineFamily(basis.mesh_ptr(), basis.order())};
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const Spline& s = curves[c];
    const MeshPtr mesh = merged_mesh(s.mesh_ptr(), basis.mesh_ptr());
    const Spline target = refine(s, mesh);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      r.coeff(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) =
          inner_product(target, refine(basis[j], mesh));
    }
    r.input_splines.push_back(s);
    r.sp.push_back(linear_combination(basis, Eigen::VectorXd(r.coeff.row(static_cast<Eigen::Index>(c)))));
  }
  return r;
}

ProjectionResult project_spline(const Spline& s, const NetPtr& net) {
  return project_splines(std::span<const Spline>(&s, 1), net);
}

ProjectionResult project_discrete(std::span<const DiscreteCurve> curves, const NetPtr& net) {
  const Splinet& n = require_net(net);
  const SplineFamily& basis = n.basis();
  const KnotMesh& mesh = basis.mesh();
  const auto dim = static_cast<Eigen::Index>(basis.size());
  ProjectionResult r{{}, {}, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(curves.size()), dim),
                     net, SplineFamily(basis.mesh_ptr(), basis.order())};

  for (std::size_t c = 0; c < curves.size(); ++c) {
    DiscreteCurve sorted;
    sorted.reserve(curves[c].size());
    for (const Sample& p : curves[c]) {
      sorted.push_back({argument_on(mesh, n.is_periodic(), p.x), p.y});
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Sample& a, const Sample& b) { return a.x < b.x; });

    std::vector<Sample> averaged;
    std::vector<int> multiplicity;
    for (const Sample& p : sorted) {
      if (!averaged.empty() && averaged.back().x == p.x) {
        averaged.back().y += p.y;
        ++multiplicity.back();
      } else {
        averaged.push_back(p);
        multiplicity.push_back(1);
      }
    }
    for (std::size_t i = 0; i < averaged.size(); ++i) {
      averaged[i].y /= multiplicity[i];
    }
    if (static_cast<Eigen::Index>(averaged.size()) < dim) {
      throw Error("discrete projection needs at least " + std::to_string(dim) +
                  " distinct arguments, got " + std::to_string(averaged.size()));
    }

    const auto rows = static_cast<Eigen::Index>(averaged.size());
    Eigen::MatrixXd design(rows, dim);
    Eigen::VectorXd values(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double x = averaged[static_cast<std::size_t>(i)].x;
      values(i) = averaged[static_cast<std::size_t>(i)].y;
      for (Eigen::Index j = 0; j < dim; ++j) {
        design(i, j) = evaluate(basis[static_cast<std::size_t>(j)], x);
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < dim) {
      throw Error("discrete projection is rank deficient (rank " + std::to_string(qr.rank()) +
                  " < " + std::to_string(dim) + "): too few arguments over some support");
    }
    const Eigen::VectorXd coef = qr.solve(values);
    r.coeff.row(static_cast<Eigen::Index>(c)) = coef.transpose();
    r.sp.push_back(linear_combination(basis, coef));
    r.input_points.push_back(std::move(sorted));
  }
  return r;
}

ProjectionResult project_discrete(const DiscreteCurve& points, const NetPtr& net) {
  return project_discrete(std::span<const DiscreteCurve>(&points, 1), net);
}

Spline histogram_density(const Histogram& h) {
  if (h.edges.size() < 2 || h.counts.size() + 1 != h.edges.size()) {
    throw Error("histogram needs m+1 edges for m counts");
  }
  double total = 0.0;
  for (double c : h.counts) {
    if (!(c >= 0.0)) {
      throw Error("histogram counts must be non-negative");
    }
    total += c;
  }
  if (!(total > 0.0)) {
    throw Error("histogram has zero total count");
  }
  const MeshPtr mesh = make_mesh(KnotMesh(h.edges, true));
  const std::size_t bins = h.counts.size();
  Eigen::MatrixXd taylor(static_cast<Eigen::Index>(bins + 1), 1);
  for (std::size_t i = 0; i < bins; ++i) {
    taylor(static_cast<Eigen::Index>(i), 0) = h.counts[i] / (total * mesh->segment_length(i));
  }
  taylor(static_cast<Eigen::Index>(bins), 0) = taylor(static_cast<Eigen::Index>(bins - 1), 0);
  return Spline(mesh, 0, std::move(taylor));
}

ProjectionResult histogram_to_density(const Histogram& h, const NetPtr& net) {
  return project_spline(histogram_density(h), net);
}

Histogram make_histogram(std::span<const double> values, std::span<const double> edges) {
  Histogram h{std::vector<double>(edges.begin(), edges.end()),
              std::vector<double>(edges.size() > 0 ? edges.size() - 1 : 0, 0.0)};
  const KnotMesh mesh(h.edges, true);
  // values a rounding error above an edge belong to the bin that edge closes
  const double tol = 1e-12 * mesh.length();
  const std::size_t bins = mesh.segment_count();
  for (double v : values) {
    const double u = circle_position(mesh, v);
    std::size_t bin = mesh.segment_of(u);
    if (u - mesh.knot(bin) <= tol) {
      bin = (bin + bins - 1) % bins;
    }
    h.counts[bin] += 1.0;
  }
  return h;
}

Eigen::VectorXd mean_coefficients(std::span<const ProjectionResult> results) {
  if (results.empty()) {
    throw Error("mean of no curves");
  }
  const NetPtr& net = results.front().basis;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(require_net(net).size()));
  Eigen::Index rows = 0;
  for (const ProjectionResult& r : results) {
    if (r.basis != net) {
      throw Error("mean_function: results use different bases");
    }
    sum += r.coeff.colwise().sum().transpose();
    rows += r.coeff.rows();
  }
  if (rows == 0) {
    throw Error("mean of no curves");
  }
  return sum / static_cast<double>(rows);
}

Spline mean_function(std::span<const ProjectionResult> results) {
  const Eigen::VectorXd mean = mean_coefficients(results);
  return linear_combination(results.front().basis->basis(), mean);
}

DiscreteCurve pad_with_zeros(const DiscreteCurve& points, double grid_step,
                             double gap_threshold, double start, double period) {
  if (!(grid_step > 0.0) || !(period > 0.0)) {
    throw Error("pad_with_zeros: grid step and period must be positive");
  }
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const Sample& p : points) {
    double u = std::fmod(p.x - start, period);
    if (u < 0.0) {
      u += period;
    }
    xs.push_back(u);
  }
  std::sort(xs.begin(), xs.end());

  auto nearest = [&](double u) {
    if (xs.empty()) {
      return period;
    }
    const auto it = std::lower_bound(xs.begin(), xs.end(), u);
    const double above = it == xs.end() ? xs.front() + period : *it;
    const double below = it == xs.begin() ? xs.back() - period : *(it - 1);
    return std::min(above - u, u - below);
  };

  // distances equal to the threshold up to rounding do not count as gaps
  const double limit = gap_threshold + 1e-12 * period;
  DiscreteCurve out = points;
  const auto steps = static_cast<std::size_t>(std::floor(period / grid_step + 1e-9));
  for (std::size_t i = 1; i <= steps; ++i) {
    const double u = static_cast<double>(i) * grid_step;
    if (nearest(std::fmod(u, period)) > limit) {
      out.push_back({start + u, 0.0});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Sample& a, const Sample& b) { return a.x < b.x; });
  return out;
}

Spline project_gram(const Spline& s, const SplineFamily& family) {
  const MeshPtr mesh = merged_mesh(s.mesh_ptr(), family.mesh_ptr());
  const Spline target = refine(s, mesh);
  const GramMatrix g = gram_matrix(family);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(family.size()));
  for (std::size_t j = 0; j < family.size(); ++j) {
    rhs(static_cast<Eigen::Index>(j)) = inner_product(target, refine(family[j], mesh));
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(g.entries());
  if (ldlt.info() != Eigen::Success) {
    throw Error("project_gram: Gram matrix factorization failed");
  }
  return linear_combination(family, Eigen::VectorXd(ldlt.solve(rhs)));
}

void write_coefficients_csv(std::ostream& out, const ProjectionResult& r) {
  out << "curve_id,basis_index,value\n";
  for (Eigen::Index i = 0; i < r.coeff.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.coeff.cols(); ++j) {
      out << i << ',' << j << ',' << fmt(r.coeff(i, j)) << '\n';
    }
  }
}

void write_points_csv(std::ostream& out, std::span<const DiscreteCurve> curves) {
  out << "curve_id,x,y\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (const Sample& p : curves[c]) {
      out << c << ',' << fmt(p.x) << ',' << fmt(p.y) << '\n';
    }
  }
}

} // namespace splinet
