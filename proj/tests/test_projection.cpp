#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "splinet/error.hpp"
#include "splinet/inner_product.hpp"
#include "splinet/orthogonalize.hpp"
#include "splinet/periodic.hpp"
#include "splinet/projection.hpp"

using namespace splinet;

namespace {

struct Fixture {
  PeriodicBasis basis;
  NetPtr net;
};

Fixture periodic_net(std::mt19937_64& rng, std::size_t segments, int k) {
  const MeshPtr m = make_mesh(KnotMesh(oracle::random_knots(rng, segments), true));
  PeriodicBasis b = build_periodic_bsplines(m, k);
  OpCounter c;
  auto net = std::make_shared<const Splinet>(build_periodic_splinet(b, c));
  return {std::move(b), std::move(net)};
}

NetPtr open_net(std::size_t segments, int k) {
  const MeshPtr m = make_mesh(KnotMesh::uniform(segments));
  OpCounter c;
  return std::make_shared<const Splinet>(dyadic_splinet(build_bsplines(m, k), c));
}

// A periodic spline on a finer mesh, generally outside the net's space
Spline outside_target(std::mt19937_64& rng, int k) {
  const MeshPtr fine = make_mesh(KnotMesh(oracle::random_knots(rng, 29), true));
  return oracle::random_spline(rng, build_periodic_bsplines(fine, k).members);
}

double l2_distance(const Spline& a, const Spline& b) {
  const MeshPtr m = merged_mesh(a.mesh_ptr(), b.mesh_ptr());
  Spline d = refine(a, m);
  d -= refine(b, m);
  return std::sqrt(oracle::exact_inner(d, d));
}

double smooth(double x) {
  return std::sin(2 * std::numbers::pi * x) + 0.5 * std::cos(6 * std::numbers::pi * x) + 0.3;
}

} // namespace

TEST_CASE("projecting a net member returns a unit coefficient vector") {
  std::mt19937_64 rng(1);
  const Fixture f = periodic_net(rng, 12, 3);
  for (std::size_t i = 0; i < f.net->size(); ++i) {
    const ProjectionResult r = project_spline(f.net->basis()[i], f.net);
    REQUIRE(r.coeff.rows() == 1);
    REQUIRE(r.coeff.cols() == static_cast<Eigen::Index>(f.net->size()));
    for (Eigen::Index j = 0; j < r.coeff.cols(); ++j) {
      CHECK(r.coeff(0, j) == doctest::Approx(static_cast<std::size_t>(j) == i ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
    }
    CHECK(l2_distance(r.sp[0], f.net->basis()[i]) < 1e-9);
  }
}

TEST_CASE("projection properties on targets outside the space") {
  std::mt19937_64 rng(2);
  for (int k = 1; k <= 3; ++k) {
    const Fixture f = periodic_net(rng, 10, k);
    const Spline s = outside_target(rng, k);
    const ProjectionResult r = project_spline(s, f.net);
    const Spline& sp = r.sp[0];
    CHECK(r.input_splines.size() == 1);
    CHECK(r.basis == f.net);

    // residual orthogonal to every member
    const MeshPtr m = merged_mesh(s.mesh_ptr(), f.net->basis().mesh_ptr());
    Spline res = refine(s, m);
    res -= refine(sp, m);
    for (const Spline& e : f.net->basis()) {
      CHECK(std::abs(oracle::exact_inner(res, refine(e, m))) < 1e-9);
    }
    // Pythagoras
    const double ss = oracle::exact_inner(s, s);
    const double pp = oracle::exact_inner(sp, sp);
    CHECK(ss == doctest::Approx(pp + oracle::exact_inner(res, res)).epsilon(1e-8));

    // idempotence
    const ProjectionResult again = project_spline(sp, f.net);
    CHECK((again.coeff - r.coeff).cwiseAbs().maxCoeff() < 1e-12);

    // best approximation: random coefficient perturbations only make it worse
    const double best = l2_distance(s, sp);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd c = r.coeff.row(0).transpose();
      const auto j = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(c.size()));
      c(j) += (n(rng) > 0 ? 1e-3 : -1e-3);
      CHECK(l2_distance(s, linear_combination(f.net->basis(), c)) > best);
    }

    // same projection through the raw periodic B-splines and the Gram system
    CHECK(l2_distance(project_gram(s, f.basis.members), sp) < 1e-8);
  }
}

TEST_CASE("the periodic constant is reproduced with the right integral") {
  std::mt19937_64 rng(3);
  const Fixture f = periodic_net(rng, 12, 2);
  std::vector<double> ones(f.basis.dimension(), 1.0);
  const Spline one = linear_combination(f.basis.members, ones);
  const ProjectionResult r = project_spline(one, f.net);
  CHECK(integrate(r.sp[0]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(l2_distance(r.sp[0], one) < 1e-9);
}

TEST_CASE("projection requires a shared domain") {
  std::mt19937_64 rng(4);
  const Fixture f = periodic_net(rng, 8, 2);
  const MeshPtr other = make_mesh(KnotMesh::uniform(8, 0.0, 2.0, true));
  const Spline s = build_periodic_bsplines(other, 2).members[0];
  CHECK_THROWS_AS(project_spline(s, f.net), Error);
}

TEST_CASE("discrete samples of a spline in the space recover its coefficients") {
  std::mt19937_64 rng(5);
  const Fixture f = periodic_net(rng, 12, 3);
  Eigen::VectorXd c(static_cast<Eigen::Index>(f.net->size()));
  std::normal_distribution<double> n(0.0, 1.0);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c(i) = n(rng);
  }
  const Spline s = linear_combination(f.net->basis(), c);
  DiscreteCurve pts;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    pts.push_back({x, evaluate(s, x)});
  }
  const ProjectionResult r = project_discrete(pts, f.net);
  CHECK((r.coeff.row(0).transpose() - c).cwiseAbs().maxCoeff() < 1e-8);
  REQUIRE(r.input_points.size() == 1);
  CHECK(r.input_points[0].size() == pts.size());
  CHECK(std::is_sorted(r.input_points[0].begin(), r.input_points[0].end(),
                       [](const Sample& a, const Sample& b) { return a.x < b.x; }));

  for (Sample& p : pts) {
    p.y = 0.0;
  }
  CHECK(project_discrete(pts, f.net).coeff.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("periodic discrete projection wraps arguments onto the circle") {
  std::mt19937_64 rng(6);
  const Fixture f = periodic_net(rng, 8, 2);
  DiscreteCurve a;
  DiscreteCurve b;
  for (int i = 0; i < 40; ++i) {
    const double x = (i + 0.5) / 40.0;
    a.push_back({x, smooth(x)});
    b.push_back({x + (i % 3) - 1.0, smooth(x)});
  }
  const ProjectionResult ra = project_discrete(a, f.net);
  const ProjectionResult rb = project_discrete(b, f.net);
  CHECK((ra.coeff - rb.coeff).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dense discrete projection agrees with the continuous projection") {
  std::mt19937_64 rng(7);
  const Fixture f = periodic_net(rng, 12, 3);
  const std::size_t dense = 10000;
  DiscreteCurve pts;
  std::vector<double> knots;
  for (std::size_t i = 0; i <= dense; ++i) {
    knots.push_back(static_cast<double>(i) / dense);
  }
  for (std::size_t i = 1; i <= dense; ++i) {
    pts.push_back({knots[i], smooth(knots[i])});
  }
  // continuous projection of the piecewise-linear interpolant
  const MeshPtr fine = make_mesh(KnotMesh(knots, true));
  Eigen::MatrixXd t(static_cast<Eigen::Index>(dense + 1), 2);
  for (std::size_t i = 0; i <= dense; ++i) {
    const double slope = i < dense ? (smooth(knots[i + 1]) - smooth(knots[i])) * dense
                                   : (smooth(knots[dense]) - smooth(knots[dense - 1])) * dense;
    t.row(static_cast<Eigen::Index>(i)) << smooth(knots[i]), slope;
  }
  const Spline interpolant(fine, 1, t);
  const ProjectionResult cont = project_spline(interpolant, f.net);
  const ProjectionResult disc = project_discrete(pts, f.net);
  CHECK((cont.coeff - disc.coeff).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("rank deficient and duplicated discrete input") {
  const NetPtr net = open_net(8, 2);
  DiscreteCurve few{{0.1, 1.0}, {0.2, 2.0}, {0.3, 1.0}};
  CHECK_THROWS_AS(project_discrete(few, net), Error);
  // enough points, but none over the last member's support
  DiscreteCurve clustered;
  for (int i = 0; i < 50; ++i) {
    clustered.push_back({0.01 * i, 1.0});
  }
  CHECK_THROWS_AS(project_discrete(clustered, net), Error);

  DiscreteCurve pts;
  for (int i = 0; i <= 40; ++i) {
    pts.push_back({i / 40.0, smooth(i / 40.0)});
  }
  DiscreteCurve dup = pts;
  dup.push_back({0.5, smooth(0.5) + 1.0});
  dup.push_back({0.5, smooth(0.5) - 1.0});
  CHECK((project_discrete(pts, net).coeff - project_discrete(dup, net).coeff).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("histogram densities") {
  std::mt19937_64 rng(8);
  const Fixture f = periodic_net(rng, 12, 3);
  Histogram flat;
  for (int i = 0; i <= 12; ++i) {
    flat.edges.push_back(i / 12.0);
  }
  flat.counts.assign(12, 7.0);
  const Spline d = histogram_density(flat);
  CHECK(d.order() == 0);
  CHECK(integrate(d) == doctest::Approx(1.0).epsilon(1e-14));
  const ProjectionResult r = histogram_to_density(flat, f.net);
  for (double x = 0.0; x <= 1.0; x += 0.047) {
    CHECK(evaluate(r.sp[0], x) == doctest::Approx(1.0).epsilon(1e-10));
  }

  Histogram spike = flat;
  spike.counts.assign(12, 0.0);
  spike.counts[4] = 3.0;
  const ProjectionResult rs = histogram_to_density(spike, f.net);
  CHECK(integrate(rs.sp[0]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(integrate(histogram_density(spike), 4.0 / 12.0, 5.0 / 12.0) == doctest::Approx(1.0));

  Histogram empty = flat;
  empty.counts.assign(12, 0.0);
  CHECK_THROWS_AS(histogram_density(empty), Error);
  Histogram negative = flat;
  negative.counts[0] = -1.0;
  CHECK_THROWS_AS(histogram_density(negative), Error);
}

TEST_CASE("histograms count wrapped values into half-open bins") {
  const std::vector<double> edges{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> values{0.25, 0.26, 1.0, 0.0, -0.1, 1.3, 0.75};
  const Histogram h = make_histogram(values, edges);
  // 0.25 → bin 0; 0.26 → 1; 1.0 and 0.0 → 3 (the seam); −0.1 → 0.9 → 3; 1.3 → 0.3 → 1; 0.75 → 2
  CHECK(h.counts == std::vector<double>{1.0, 2.0, 1.0, 3.0});

  // 30/360 lands a rounding error above 1/12 but belongs to the first bin
  std::vector<double> twelfths;
  for (int i = 0; i <= 12; ++i) {
    twelfths.push_back(i / 12.0);
  }
  const std::vector<double> degrees{30.0 / 360.0, 60.0 / 360.0, 360.0 / 360.0};
  const Histogram g = make_histogram(degrees, twelfths);
  CHECK(g.counts[0] == 1.0);
  CHECK(g.counts[1] == 1.0);
  CHECK(g.counts[11] == 1.0);
}

TEST_CASE("functional means") {
  std::mt19937_64 rng(9);
  const Fixture f = periodic_net(rng, 12, 3);
  const Spline s = outside_target(rng, 3);
  const ProjectionResult a = project_spline(s, f.net);
  Spline neg = s;
  neg *= -1.0;
  const ProjectionResult b = project_spline(neg, f.net);
  const std::vector<ProjectionResult> same{a, a};
  CHECK(l2_distance(mean_function(same), a.sp[0]) < 1e-12);
  const std::vector<ProjectionResult> opposite{a, b};
  CHECK(mean_coefficients(opposite).cwiseAbs().maxCoeff() < 1e-14);

  std::vector<ProjectionResult> densities;
  for (int d = 0; d < 5; ++d) {
    Histogram h;
    for (int i = 0; i <= 12; ++i) {
      h.edges.push_back(i / 12.0);
      if (i < 12) {
        h.counts.push_back(static_cast<double>(rng() % 10));
      }
    }
    h.counts[static_cast<std::size_t>(d)] += 1.0;
    densities.push_back(histogram_to_density(h, f.net));
  }
  CHECK(integrate(mean_function(densities)) == doctest::Approx(1.0).epsilon(1e-8));

  const Fixture other = periodic_net(rng, 12, 3);
  const std::vector<ProjectionResult> mixed{a, project_spline(s, other.net)};
  CHECK_THROWS_AS(mean_function(mixed), Error);
  CHECK_THROWS_AS(mean_function(std::vector<ProjectionResult>{}), Error);
}

TEST_CASE("zero padding fills only empty stretches of the circle") {
  DiscreteCurve dense;
  for (int i = 1; i <= 256; ++i) {
    dense.push_back({i / 256.0, 1.0});
  }
  CHECK(pad_with_zeros(dense, 1.0 / 256, 1.0 / 64) == dense);

  const DiscreteCurve grid = pad_with_zeros({}, 0.125, 0.01);
  REQUIRE(grid.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(grid[i].x == doctest::Approx((i + 1) * 0.125));
    CHECK(grid[i].y == 0.0);
  }

  DiscreteCurve half;
  for (int i = 1; i <= 50; ++i) {
    half.push_back({i / 100.0, 2.0});
  }
  const DiscreteCurve padded = pad_with_zeros(half, 0.01, 0.05);
  std::size_t real = 0;
  for (const Sample& p : padded) {
    if (p.y == 0.0) {
      CHECK(p.x > 0.55);
      CHECK(p.x <= 1.0);
    } else {
      ++real;
    }
  }
  CHECK(real == half.size());
  CHECK(padded.size() > half.size());
  CHECK(std::is_sorted(padded.begin(), padded.end(),
                       [](const Sample& a, const Sample& b) { return a.x < b.x; }));
}

TEST_CASE("CSV exports") {
  const NetPtr net = open_net(4, 1);
  DiscreteCurve pts{{0.7, 0.2}, {0.2, 1.0}, {0.45, 0.5}, {0.9, 0.1}};
  const ProjectionResult r = project_discrete(pts, net);
  std::ostringstream c;
  write_coefficients_csv(c, r);
  std::istringstream lines(c.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "curve_id,basis_index,value");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.rfind("0,", 0) == 0);
  }
  CHECK(rows == net->size());

  std::ostringstream p;
  write_points_csv(p, r.input_points);
  CHECK(p.str().rfind("curve_id,x,y\n0,0.20000000000000001,1\n0,0.45000000000000001,0.5\n", 0) == 0);
}
