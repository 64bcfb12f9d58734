#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

#include "oracles.hpp"
#include "splinet/error.hpp"
#include "splinet/inner_product.hpp"
#include "splinet/orthogonalize.hpp"
#include "splinet/periodic.hpp"
#include "splinet/polar.hpp"
#include "splinet/svg.hpp"

using namespace splinet;

namespace {

constexpr double pi = std::numbers::pi;

Splinet periodic_net(std::size_t segments, int k) {
  OpCounter c;
  return build_periodic_splinet(
      build_periodic_bsplines(make_mesh(KnotMesh::uniform(segments, 0.0, 1.0, true)), k), c);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

// Coordinates of every polyline of class "curve" in document order
std::vector<std::vector<PlanePoint>> curves_of(const std::string& svg) {
  std::vector<std::vector<PlanePoint>> out;
  const std::regex poly(R"re(<polyline class="curve"[^>]* points="([^"]*)")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    std::istringstream in((*it)[1].str());
    std::vector<PlanePoint> pts;
    double x = 0.0;
    double y = 0.0;
    char comma = 0;
    while (in >> x >> comma >> y) {
      pts.push_back({x, y});
    }
    out.push_back(std::move(pts));
  }
  return out;
}

} // namespace

TEST_CASE("the circle map") {
  const PolarFrame f = make_frame(-1.0, 3.0);
  CHECK(f.a == doctest::Approx(std::log(2.0) / 3.0));
  CHECK(polar_map(0.3, 3.0, f).r == doctest::Approx(2.0));
  CHECK(polar_map(0.3, 3.0, f).theta == doctest::Approx(0.6 * pi));
  for (double x : {0.1, 0.5, 1.0}) {
    CHECK(polar_map(x, 0.0, f).r == doctest::Approx(1.0));
  }
  CHECK(polar_map(0.2, -3.0, f).r == doctest::Approx(0.5));
  CHECK(polar_map(0.2, 1.0, f).r > 1.0);
  CHECK(polar_map(0.2, -1.0, f).r < 1.0);

  const PolarFrame flat = make_frame(0.0, 0.0);
  CHECK(flat.a == 1.0);
  CHECK(make_frame(-2.0, -1.0).a == 1.0);
}

TEST_CASE("the level maps") {
  const PolarFrame f = make_frame(-1.0, 1.0, 3);
  CHECK(dyadic_polar_map(0.5, 0.0, 1, f).r == doctest::Approx(5.0));
  CHECK(dyadic_polar_map(0.5, 0.0, 2, f).r == doctest::Approx(3.0));
  CHECK(dyadic_polar_map(0.5, 0.0, 3, f).r == doctest::Approx(1.0));
  CHECK(baseline_radius(1, f) == 5.0);
  CHECK(baseline_radius(3, f) == 1.0);
  CHECK(dyadic_polar_map(0.5, 1.0, 1, f).r == doctest::Approx(6.0));
  CHECK_THROWS_AS(dyadic_polar_map(0.5, 0.0, 0, f), Error);
  CHECK_THROWS_AS(dyadic_polar_map(0.5, 0.0, 4, f), Error);
}

TEST_CASE("knot angles are proportional to arc length") {
  const auto u = knot_angles(KnotMesh::uniform(4, 0.0, 1.0, true));
  REQUIRE(u.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(u[i] == doctest::Approx(i * pi / 2));
  }
  const auto v = knot_angles(KnotMesh({0.0, 0.1, 0.3, 0.6, 1.0}, true));
  const std::vector<double> expected{0.0, 0.2 * pi, 0.6 * pi, 1.2 * pi, 2 * pi};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(v[i] == doctest::Approx(expected[i]));
  }
  const PlanePoint first = to_plane({v.front(), 1.0});
  const PlanePoint last = to_plane({v.back(), 1.0});
  CHECK(std::hypot(first.x - last.x, first.y - last.y) < 1e-12);
  // shifted domains give the same angles
  const auto w = knot_angles(KnotMesh({2.0, 2.2, 2.6, 3.2, 4.0}, true));
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(w[i] == doctest::Approx(expected[i]));
  }
}

TEST_CASE("sampled curves close up at the seam and stay in range") {
  std::mt19937_64 rng(3);
  for (int k = 1; k <= 4; ++k) {
    const MeshPtr m = make_mesh(KnotMesh(oracle::random_knots(rng, 9), true));
    const PeriodicBasis b = build_periodic_bsplines(m, k);
    const Spline s = oracle::random_spline(rng, b.members);
    const std::vector<Spline> one{s};
    const PolarFrame f = frame_for(one, 16);
    const auto pts = polar_curve(s, f, 16);
    CHECK(pts.size() == 9 * 16 + 1);
    const PlanePoint a = to_plane(pts.front());
    const PlanePoint z = to_plane(pts.back());
    CHECK(std::hypot(a.x - z.x, a.y - z.y) < 1e-9);
    for (const PolarPoint& p : pts) {
      CHECK(p.r > 0.0);
      if (std::abs(f.m) <= f.M) {
        CHECK(p.r <= 2.0 + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(sample_abscissae(KnotMesh::uniform(3), 1), Error);
}

TEST_CASE("net layouts keep every level inside its annulus") {
  const Splinet net = periodic_net(16, 2);
  const PolarFrame f = frame_for(net.basis().members(), 8, net.levels());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const int level = net.layout()[i].level;
    for (const PolarPoint& p : polar_curve(net.basis()[i], f, 8, level)) {
      CHECK(p.r > 2.0 * (f.levels - level));
      CHECK(p.r <= 2.0 * (f.levels - level) + 2.0 + 1e-12);
    }
  }
}

TEST_CASE("the zero spline is drawn on the baseline circle") {
  const MeshPtr m = make_mesh(KnotMesh::uniform(6, 0.0, 1.0, true));
  const std::vector<Spline> zero{Spline::zero(m, 2)};
  const PolarFrame f = make_frame(-1.0, 1.0);
  const std::vector<Panel> panels{circle_panel("zero", zero, f, PlotSpec{})};
  const std::string svg = svg_document(panels, 1, "zero");
  const auto curves = curves_of(svg);
  REQUIRE(curves.size() == 1);
  for (const PlanePoint& p : curves[0]) {
    // unit circle at 200 units around the panel centre (500, 500)
    CHECK(std::hypot(p.x - 500.0, p.y - 500.0) == doctest::Approx(200.0).epsilon(1e-5));
  }
}

TEST_CASE("one dotted tick per distinct knot on the circle") {
  const std::string svg = render(periodic_net(4, 1), PlotSpec{});
  CHECK(count(svg, "class=\"knot-tick\"") == 4);
  CHECK(count(svg, "stroke-dasharray") >= 4);
  CHECK(count(svg, "class=\"curve\"") == 4);
}

TEST_CASE("order-three net over 24 segments fills three levels with 12, 6 and 6 curves") {
  PlotSpec spec;
  spec.kind = Layout::net;
  const std::string svg = render(periodic_net(24, 3), spec);
  CHECK(count(svg, "class=\"curve\" data-index") == 24);
  const std::regex level(R"re(class="curve" data-index="\d+" data-level="(\d)")re");
  std::map<std::string, int> per_level;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), level); it != std::sregex_iterator(); ++it) {
    ++per_level[(*it)[1].str()];
  }
  CHECK(per_level["1"] == 12);
  CHECK(per_level["2"] == 6);
  CHECK(per_level["3"] == 6);
  CHECK(count(svg, "class=\"baseline\"") == 3);
}

TEST_CASE("spike plots mark each coefficient") {
  const Splinet net = periodic_net(8, 2);
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(8, -1.0, 1.0);
  PlotSpec spec;
  spec.kind = Layout::spikes;
  const std::string svg = render(net, spec, c);
  CHECK(count(svg, "class=\"spike\"") == 8);
  CHECK(count(svg, "class=\"cross\"") == 8);
  CHECK_THROWS_AS(render(net, spec), Error);
}

TEST_CASE("layout names round-trip") {
  for (Layout l : {Layout::circle, Layout::net, Layout::spikes, Layout::cartesian}) {
    CHECK(parse_layout(layout_name(l)) == l);
  }
  CHECK_FALSE(parse_layout("pie").has_value());
}

TEST_CASE("rendering is deterministic and ordered") {
  PlotSpec spec;
  spec.kind = Layout::net;
  const std::string a = render(periodic_net(16, 2), spec);
  const std::string b = render(periodic_net(16, 2), spec);
  CHECK(a == b);
  const std::size_t base = a.find("class=\"baseline\"");
  const std::size_t tick = a.find("class=\"knot-tick\"");
  const std::size_t curve = a.find("class=\"curve\"");
  const std::size_t legend = a.find("class=\"legend\"");
  CHECK(base < tick);
  CHECK(tick < curve);
  CHECK(curve < legend);
  CHECK(a.rfind("</svg>") != std::string::npos);

  spec.kind = Layout::cartesian;
  const std::string c = render(periodic_net(16, 2), spec);
  CHECK(count(c, "class=\"curve\"") == 16);
}
