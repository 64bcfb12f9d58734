#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "splinet/error.hpp"
#include "splinet/inner_product.hpp"
#include "splinet/orthogonalize.hpp"
#include "splinet/periodic.hpp"
#include "splinet/projection.hpp"

using namespace splinet;

namespace {

MeshPtr random_circle(std::mt19937_64& rng, std::size_t segments) {
  return make_mesh(KnotMesh(oracle::random_knots(rng, segments), true));
}

MeshPtr uniform_circle(std::size_t segments) {
  return make_mesh(KnotMesh::uniform(segments, 0.0, 1.0, true));
}

} // namespace

TEST_CASE("knot extension repeats the spacings across the seam") {
  const KnotMesh m({0.0, 0.1, 0.3, 0.6, 1.0}, true);
  const KnotMesh e = extend_knots(m, 2);
  const std::vector<double> expected{-0.7, -0.4, 0.0, 0.1, 0.3, 0.6, 1.0, 1.1, 1.3};
  REQUIRE(e.knot_count() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(e.knot(i) == doctest::Approx(expected[i]).epsilon(1e-15));
  }
  CHECK_FALSE(e.periodic());
  CHECK_THROWS_AS(extend_knots(KnotMesh({0.0, 0.5, 1.0}), 1), Error);
  CHECK_THROWS_AS(extend_knots(KnotMesh({0.0, 0.5, 1.0}, true), 2), Error);
}

TEST_CASE("an extension that does not shift by the period breaks the identification") {
  const KnotMesh m({0.0, 0.1, 0.3, 0.6, 1.0}, true);
  const SplineFamily shifted = build_bsplines(make_mesh(extend_knots(m, 2)), 2);
  CHECK(identification_defect(shifted, m, 2) < 1e-14);
  // left spacings copied from the wrong end of the mesh
  const SplineFamily off = build_bsplines(
      make_mesh(KnotMesh({-0.6, -0.4, 0.0, 0.1, 0.3, 0.6, 1.0, 1.1, 1.3})), 2);
  CHECK(identification_defect(off, m, 2) > 1e-2);
}

TEST_CASE("periodic B-spline counts and layout") {
  std::mt19937_64 rng(12);
  for (int k = 0; k <= 4; ++k) {
    for (std::size_t S : {5u, 8u, 13u}) {
      if (S < static_cast<std::size_t>(k) + 1) {
        continue;
      }
      const PeriodicBasis p = build_periodic_bsplines(random_circle(rng, S), k);
      CHECK(p.dimension() == S);
      CHECK(p.extended.size() == S + static_cast<std::size_t>(k));
      CHECK(p.regular_count() == S - static_cast<std::size_t>(k));
      REQUIRE(p.extra_indices.size() == static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        CHECK(p.extra_indices[static_cast<std::size_t>(i)] == S - static_cast<std::size_t>(k) + static_cast<std::size_t>(i));
      }
    }
  }
  CHECK_THROWS_AS(build_periodic_bsplines(uniform_circle(3), 3), Error);
}

TEST_CASE("periodic members are seamless, periodic and sum to one") {
  std::mt19937_64 rng(13);
  for (int k = 1; k <= 4; ++k) {
    const MeshPtr m = random_circle(rng, 11);
    const PeriodicBasis p = build_periodic_bsplines(m, k);
    for (const Spline& s : p.members) {
      CHECK(seam_defect(s) < 1e-10);
      CHECK(max_smoothness_defect(s) < 1e-10);
    }
    const Spline r = oracle::random_spline(rng, p.members);
    CHECK(seam_defect(r) < 1e-10);
    std::vector<double> ones(p.dimension(), 1.0);
    const Spline sum = linear_combination(p.members, ones);
    for (double x = 0.0; x <= 1.0; x += 0.0173) {
      CHECK(evaluate(sum, x) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(periodic_evaluate(r, x + 1.0) == doctest::Approx(periodic_evaluate(r, x)).epsilon(1e-12));
      CHECK(periodic_evaluate(r, x - 3.0) == doctest::Approx(periodic_evaluate(r, x)).epsilon(1e-12));
    }
    // approaching the seam from the left is approaching the end of the domain
    const double eps = 1e-7;
    CHECK(periodic_evaluate(r, -eps) == doctest::Approx(evaluate(r, 1.0 - eps)).epsilon(1e-12));
    CHECK(periodic_evaluate(r, 0.0) == doctest::Approx(evaluate(r, 1.0)).epsilon(1e-12));
    if (k >= 2) {
      CHECK(periodic_evaluate_derivative(r, -eps, 1) ==
            doctest::Approx(evaluate_derivative(r, 1.0 - eps, 1)).epsilon(1e-9));
    }
  }
}

TEST_CASE("the wrap-around hat peaks at the seam") {
  const PeriodicBasis p = build_periodic_bsplines(uniform_circle(4), 1);
  REQUIRE(p.extra_indices.size() == 1);
  const Spline& hat = p.members[p.extra_indices[0]];
  CHECK(periodic_evaluate(hat, 0.0) == doctest::Approx(1.0));
  CHECK(evaluate(hat, 0.0) == doctest::Approx(1.0));
  CHECK(evaluate(hat, 0.125) == doctest::Approx(0.5));
  CHECK(evaluate(hat, 0.875) == doctest::Approx(0.5));
  CHECK(evaluate(hat, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("periodic splinet structure") {
  for (int k = 1; k <= 4; ++k) {
    for (int N = 1; N <= 4; ++N) {
      const std::size_t S = static_cast<std::size_t>(k) << N;
      const PeriodicBasis p = build_periodic_bsplines(uniform_circle(S), k);
      OpCounter c;
      const Splinet net = build_periodic_splinet(p, c);
      CHECK(net.is_periodic());
      CHECK(net.levels() == N);
      CHECK(net.top_level() == N);
      CHECK(oracle::identity_defect(net.basis().members()) < 1e-9);
      for (int l = 1; l < N; ++l) {
        CHECK(net.tuplets_at_level(l) == (std::size_t{1} << (N - l)));
      }
      CHECK(net.tuplets_at_level(N) == 2);
      for (const Spline& e : net.basis()) {
        CHECK(seam_defect(e) < 1e-12 * e.taylor().cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("cubic periodic net of order three has 12, 6 and 6 members per level") {
  const PeriodicBasis p = build_periodic_bsplines(uniform_circle(24), 3);
  OpCounter c;
  const Splinet net = build_periodic_splinet(p, c);
  CHECK(net.members_at_level(1).size() == 12);
  CHECK(net.members_at_level(2).size() == 6);
  CHECK(net.members_at_level(3).size() == 6);
}

TEST_CASE("the extra tuplet meets only the first and last tuplet of each level") {
  for (int k = 1; k <= 3; ++k) {
    for (int N = 2; N <= 4; ++N) {
      const std::size_t S = static_cast<std::size_t>(k) << N;
      const PeriodicBasis p = build_periodic_bsplines(uniform_circle(S), k);
      OpCounter c;
      std::vector<std::size_t> overlap;
      const Splinet net = build_periodic_splinet(p, c, &overlap);
      std::set<std::size_t> tuplets;
      for (std::size_t i : overlap) {
        const NetPosition& pos = net.layout()[i];
        const std::size_t first = std::size_t{1} << (pos.level - 1);
        const std::size_t last = (std::size_t{1} << N) - first;
        CHECK((pos.tuplet == first || pos.tuplet == last));
        tuplets.insert(pos.tuplet);
      }
      CHECK(tuplets.size() == static_cast<std::size_t>(2 * N - 1));
    }
  }
}

TEST_CASE("orthogonalized extra splines cover the whole circle") {
  const PeriodicBasis p = build_periodic_bsplines(uniform_circle(16), 2);
  OpCounter c;
  const Splinet net = build_periodic_splinet(p, c);
  for (std::size_t i : p.extra_indices) {
    const Support s = support_of(net.basis()[i]);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == SegmentRun{0, 15});
  }
}

TEST_CASE("periodic cost and support against the closed forms") {
  for (int k = 1; k <= 4; ++k) {
    for (int N = 1; N <= 4; ++N) {
      const std::size_t S = static_cast<std::size_t>(k) << N;
      CAPTURE(k);
      CAPTURE(N);
      const PeriodicBasis p = build_periodic_bsplines(uniform_circle(S), k);
      OpCounter net_count;
      const Splinet net = build_periodic_splinet(p, net_count);
      OpCounter gs_count;
      gram_schmidt_one_sided(p.members, gs_count);
      const CostReport r = predicted_costs(k, S);
      CHECK(total_support(net) == doctest::Approx(*r.predicted_total_support).epsilon(1e-9));
      // one-sided Gram-Schmidt on the cycle: 2Sk − 2k² − k cross products
      const double kd = k;
      CHECK(static_cast<double>(gs_count.cross_evaluations()) ==
            doctest::Approx(2.0 * static_cast<double>(S) * kd - 2.0 * kd * kd - kd));
      CHECK(net_count.cross_evaluations() <= gs_count.cross_evaluations());
      if (k >= 2 && N >= 2) {
        CHECK(static_cast<double>(net_count.cross_evaluations()) <= *r.j1);
      }
    }
  }
}

TEST_CASE("total support does not depend on knot placement") {
  std::mt19937_64 rng(14);
  for (int k = 1; k <= 3; ++k) {
    for (int N = 2; N <= 4; ++N) {
      const std::size_t S = static_cast<std::size_t>(k) << N;
      const PeriodicBasis p = build_periodic_bsplines(random_circle(rng, S), k);
      OpCounter c;
      const Splinet net = build_periodic_splinet(p, c);
      CHECK(total_support(net) == doctest::Approx(k * std::log2(2.0 * S / k)).epsilon(1e-9));
    }
  }
}

TEST_CASE("splinet cost grows linearly with the dimension") {
  for (int k = 1; k <= 3; ++k) {
    for (int N = 3; N <= 5; ++N) {
      const std::size_t S = static_cast<std::size_t>(k) << N;
      OpCounter small;
      build_periodic_splinet(build_periodic_bsplines(uniform_circle(S), k), small);
      OpCounter large;
      build_periodic_splinet(build_periodic_bsplines(uniform_circle(2 * S), k), large);
      const double ratio = static_cast<double>(large.cross_evaluations()) /
                           static_cast<double>(small.cross_evaluations());
      CHECK(ratio >= 1.8);
      CHECK(ratio <= 2.2);
    }
  }
}

TEST_CASE("constant functions are reproduced by the periodic splinet") {
  std::mt19937_64 rng(15);
  for (int k = 1; k <= 3; ++k) {
    const PeriodicBasis p = build_periodic_bsplines(random_circle(rng, 12), k);
    OpCounter c;
    const auto net = std::make_shared<const Splinet>(build_periodic_splinet(p, c));
    std::vector<double> ones(p.dimension(), 1.0);
    const Spline one = linear_combination(p.members, ones);
    const ProjectionResult r = project_spline(one, net);
    for (double x = 0.0; x <= 1.0; x += 0.031) {
      CHECK(evaluate(r.sp[0], x) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("the choice of seam does not change the periodic spline space") {
  std::mt19937_64 rng(16);
  for (int k = 1; k <= 3; ++k) {
    const MeshPtr m = random_circle(rng, 10);
    const MeshPtr turned = make_mesh(rotated_mesh(*m, 4));
    CHECK(turned->start() == doctest::Approx(m->knot(4)));
    CHECK(turned->length() == doctest::Approx(m->length()));
    const PeriodicBasis a = build_periodic_bsplines(m, k);
    const PeriodicBasis b = build_periodic_bsplines(turned, k);
    const Spline s = oracle::random_spline(rng, a.members);
    const Spline moved = rebase(s, turned);
    for (double x = 0.0; x <= 2.0; x += 0.037) {
      CHECK(periodic_evaluate(moved, x) == doctest::Approx(periodic_evaluate(s, x)).epsilon(1e-10));
    }
    // every member of the turned basis lies in the span of the original one
    for (const Spline& t : b.members) {
      const Spline back = rebase(t, m);
      const Spline fit = project_gram(back, a.members);
      for (double x = 0.0; x <= 1.0; x += 0.041) {
        CHECK(evaluate(fit, x) == doctest::Approx(evaluate(back, x)).epsilon(1e-9).scale(1.0));
      }
    }
  }
}
