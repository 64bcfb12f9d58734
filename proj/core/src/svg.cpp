#include "splinet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "splinet/error.hpp"

namespace splinet {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") {
    s = "0.000";
  }
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<PlanePoint> plane(const std::vector<PolarPoint>& pts) {
  std::vector<PlanePoint> out;
  out.reserve(pts.size());
  for (const PolarPoint& p : pts) {
    out.push_back(to_plane(p));
  }
  return out;
}

} // namespace

std::optional<Layout> parse_layout(std::string_view name) {
  if (name == "circle") return Layout::circle;
  if (name == "net") return Layout::net;
  if (name == "spikes") return Layout::spikes;
  if (name == "cartesian") return Layout::cartesian;
  return std::nullopt;
}

std::string_view layout_name(Layout layout) {
  switch (layout) {
    case Layout::circle: return "circle";
    case Layout::net: return "net";
    case Layout::spikes: return "spikes";
    case Layout::cartesian: return "cartesian";
  }
  return "circle";
}

Panel::Panel(std::string title, double ox, double oy, double sx, double sy)
  : title_(std::move(title)), ox_(ox), oy_(oy), sx_(sx), sy_(sy) {}

Panel Panel::polar(std::string title, double outer_radius) {
  if (!(outer_radius > 0.0)) {
    throw Error("polar panel needs a positive outer radius");
  }
  const double s = kOuterRadius / outer_radius;
  return Panel(std::move(title), kSize / 2, kSize / 2, s, s);
}

Panel Panel::cartesian(std::string title, double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) {
    throw Error("cartesian panel needs x1 > x0");
  }
  if (!(y1 > y0)) {
    y1 = y0 + 1.0;
  }
  const double sx = 800.0 / (x1 - x0);
  const double sy = 800.0 / (y1 - y0);
  return Panel(std::move(title), 100.0 - sx * x0, 900.0 + sy * y0, sx, sy);
}

std::string Panel::sx(const PlanePoint& p) const { return num(ox_ + sx_ * p.x); }
std::string Panel::sy(const PlanePoint& p) const { return num(oy_ - sy_ * p.y); }
std::string Panel::xy(const PlanePoint& p) const { return sx(p) + "," + sy(p); }

void Panel::baseline_circle(double r, std::optional<int> level) {
  baselines_ += "<circle class=\"baseline\"";
  if (level) {
    baselines_ += " data-level=\"" + std::to_string(*level) + "\"";
  }
  baselines_ += " cx=\"" + num(ox_) + "\" cy=\"" + num(oy_) + "\" r=\"" + num(sx_ * r) +
                "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
}

void Panel::knot_ticks(const KnotMesh& mesh, double r_inner, double r_outer) {
  const std::vector<double> angles = knot_angles(mesh);
  const std::size_t count = mesh.periodic() ? angles.size() - 1 : angles.size();
  for (std::size_t i = 0; i < count; ++i) {
    const PlanePoint a = to_plane({angles[i], r_inner});
    const PlanePoint b = to_plane({angles[i], r_outer});
    ticks_ += "<line class=\"knot-tick\" x1=\"" + sx(a) + "\" y1=\"" + sy(a) + "\" x2=\"" + sx(b) +
              "\" y2=\"" + sy(b) +
              "\" stroke=\"#666\" stroke-width=\"1\" stroke-dasharray=\"3,4\"/>\n";
  }
}

void Panel::knot_lines(const KnotMesh& mesh) {
  for (double x : mesh.knots()) {
    const std::string px = num(ox_ + sx_ * x);
    ticks_ += "<line class=\"knot-tick\" x1=\"" + px + "\" y1=\"100.000\" x2=\"" + px +
              "\" y2=\"900.000\" stroke=\"#666\" stroke-width=\"1\" stroke-dasharray=\"3,4\"/>\n";
  }
}

void Panel::curve(std::span<const PlanePoint> points, std::size_t index, const std::string& color,
                  std::optional<int> level) {
  curves_ += "<polyline class=\"curve\" data-index=\"" + std::to_string(index) + "\"";
  if (level) {
    curves_ += " data-level=\"" + std::to_string(*level) + "\"";
  }
  curves_ += " fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) {
      curves_ += ' ';
    }
    curves_ += xy(points[i]);
  }
  curves_ += "\"/>\n";
}

void Panel::spike(double theta, double r_from, double r_to, std::size_t index,
                  const std::string& color) {
  const std::string a = xy(to_plane({theta, r_from}));
  const std::string b = xy(to_plane({theta, r_to}));
  spikes_ += "<polyline class=\"spike\" data-index=\"" + std::to_string(index) + "\" stroke=\"" +
             color + "\" stroke-width=\"2\" points=\"" + a + " " + b + "\"/>\n";
  const PlanePoint tip = to_plane({theta, r_to});
  const double px = ox_ + sx_ * tip.x;
  const double py = oy_ - sy_ * tip.y;
  constexpr double d = 6.0;
  spikes_ += "<path class=\"cross\" data-index=\"" + std::to_string(index) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\" d=\"M" + num(px - d) + "," + num(py - d) + " L" + num(px + d) +
             "," + num(py + d) + " M" + num(px - d) + "," + num(py + d) + " L" + num(px + d) + "," +
             num(py - d) + "\"/>\n";
}

void Panel::point(const PlanePoint& p, const std::string& color) {
  marks_ += "<circle class=\"point\" cx=\"" + sx(p) + "\" cy=\"" + sy(p) + "\" r=\"4\" fill=\"" +
            color + "\"/>\n";
}

void Panel::sector(double theta0, double theta1, double r_inner, double r_outer,
                   const std::string& color) {
  const std::string a = xy(to_plane({theta0, r_inner}));
  const std::string b = xy(to_plane({theta0, r_outer}));
  const std::string c = xy(to_plane({theta1, r_outer}));
  const std::string d = xy(to_plane({theta1, r_inner}));
  const int large = theta1 - theta0 > std::numbers::pi ? 1 : 0;
  // screen y points down, so increasing θ sweeps clockwise (flag 1)
  marks_ += "<path class=\"bar\" fill=\"" + color + "\" fill-opacity=\"0.5\" stroke=\"" + color +
            "\" d=\"M" + a + " L" + b + " A" + num(sx_ * r_outer) + "," + num(sx_ * r_outer) +
            " 0 " + std::to_string(large) + " 1 " + c + " L" + d + " A" + num(sx_ * r_inner) + "," +
            num(sx_ * r_inner) + " 0 " + std::to_string(large) + " 0 " + a + " Z\"/>\n";
}

void Panel::legend(const std::string& text) {
  legend_ += "<text class=\"legend\" x=\"500\" y=\"" +
             std::to_string(40 + 24 * static_cast<int>(std::count(legend_.begin(), legend_.end(), '\n'))) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"22\">" + escape(text) +
             "</text>\n";
}

std::string Panel::str(double dx, double dy) const {
  std::string out = "<g class=\"panel\" data-title=\"" + escape(title_) + "\" transform=\"translate(" +
                    num(dx) + " " + num(dy) + ")\">\n";
  out += "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"none\" stroke=\"#ddd\"/>\n";
  out += baselines_;
  out += ticks_;
  out += marks_;
  out += curves_;
  out += spikes_;
  out += legend_;
  out += "</g>\n";
  return out;
}

Panel circle_panel(std::string title, std::span<const Spline> curves, const PolarFrame& frame,
                   const PlotSpec& spec) {
  if (curves.empty()) {
    throw Error("nothing to plot");
  }
  const double outer = std::max(2.0, std::exp(frame.a * frame.M));
  Panel panel = Panel::polar(title, outer);
  panel.baseline_circle(1.0, std::nullopt);
  if (spec.knot_ticks) {
    panel.knot_ticks(curves.front().mesh(), 0.0, outer);
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto pts = plane(polar_curve(curves[i], frame, spec.samples_per_segment));
    panel.curve(pts, i, spec.color(i), std::nullopt);
  }
  panel.legend(title);
  return panel;
}

Panel net_panel(std::string title, const Splinet& net, const PolarFrame& frame, const PlotSpec& spec) {
  if (net.size() == 0) {
    throw Error("nothing to plot");
  }
  if (net.layout().size() != net.size() || frame.levels < 1) {
    throw Error("net layout needs a dyadic splinet");
  }
  const double outer = 2.0 * frame.levels;
  Panel panel = Panel::polar(title, outer);
  for (int l = 1; l <= frame.levels; ++l) {
    panel.baseline_circle(baseline_radius(l, frame), l);
  }
  if (spec.knot_ticks) {
    panel.knot_ticks(net.basis().mesh(), 0.0, outer);
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    const int level = net.layout()[i].level;
    const auto pts = plane(polar_curve(net.basis()[i], frame, spec.samples_per_segment, level));
    panel.curve(pts, i, spec.color(net.layout()[i].position), level);
  }
  panel.legend(title);
  return panel;
}

Panel spikes_panel(std::string title, const Splinet& net, const Eigen::VectorXd& coeff,
                   const PlotSpec& spec) {
  if (static_cast<std::size_t>(coeff.size()) != net.size()) {
    throw Error("spikes need one coefficient per basis member");
  }
  const bool dyadic = net.layout().size() == net.size() && net.top_level() >= 1;
  const int levels = dyadic ? net.top_level() : 1;
  const PolarFrame frame = make_frame(0.0, 1.0, levels);
  const double outer = 2.0 * levels;
  Panel panel = Panel::polar(title, outer);
  for (int l = 1; l <= levels; ++l) {
    panel.baseline_circle(baseline_radius(l, frame), dyadic ? std::optional<int>(l) : std::nullopt);
  }
  const KnotMesh& mesh = net.basis().mesh();
  if (spec.knot_ticks) {
    panel.knot_ticks(mesh, 0.0, outer);
  }
  const double scale = std::max(coeff.cwiseAbs().maxCoeff(), 1e-300);
  const std::vector<double> xs = sample_abscissae(mesh, spec.samples_per_segment);
  for (std::size_t i = 0; i < net.size(); ++i) {
    double peak = 0.0;
    double at = xs.front();
    for (double x : xs) {
      const double v = std::abs(evaluate(net.basis()[i], x));
      if (v > peak) {
        peak = v;
        at = x;
      }
    }
    const double theta = 2.0 * std::numbers::pi * (at - mesh.start()) / mesh.length();
    const int level = dyadic ? net.layout()[i].level : 1;
    const double base = baseline_radius(level, frame);
    const std::string& color = spec.color(dyadic ? net.layout()[i].position : i);
    panel.spike(theta, base, base + coeff(static_cast<Eigen::Index>(i)) / scale, i, color);
  }
  panel.legend(title);
  return panel;
}

Panel cartesian_panel(std::string title, std::span<const Spline> curves, const PlotSpec& spec) {
  if (curves.empty()) {
    throw Error("nothing to plot");
  }
  const KnotMesh& mesh = curves.front().mesh();
  const PolarFrame range = frame_for(curves, spec.samples_per_segment);
  const double lo = std::min(range.m, 0.0);
  const double hi = std::max(range.M, 0.0);
  Panel panel = Panel::cartesian(title, mesh.start(), mesh.end(), lo, hi);
  if (spec.knot_ticks) {
    panel.knot_lines(mesh);
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::vector<PlanePoint> pts;
    for (double x : sample_abscissae(curves[i].mesh(), spec.samples_per_segment)) {
      pts.push_back({x, evaluate(curves[i], x)});
    }
    panel.curve(pts, i, spec.color(i), std::nullopt);
  }
  panel.legend(title);
  return panel;
}

Panel histogram_panel(std::string title, const Histogram& h, const PlotSpec& spec) {
  const Spline density = histogram_density(h);
  const KnotMesh& mesh = density.mesh();
  double peak = 0.0;
  for (std::size_t i = 0; i < mesh.segment_count(); ++i) {
    peak = std::max(peak, density.taylor()(static_cast<Eigen::Index>(i), 0));
  }
  const PolarFrame frame = make_frame(0.0, peak);
  Panel panel = Panel::polar(title, 2.0);
  panel.baseline_circle(1.0, std::nullopt);
  if (spec.knot_ticks) {
    panel.knot_ticks(mesh, 0.0, 2.0);
  }
  const std::vector<double> angles = knot_angles(mesh);
  for (std::size_t i = 0; i < mesh.segment_count(); ++i) {
    const double y = density.taylor()(static_cast<Eigen::Index>(i), 0);
    if (y > 0.0) {
      panel.sector(angles[i], angles[i + 1], 1.0, std::exp(frame.a * y), spec.color(0));
    }
  }
  panel.legend(title);
  return panel;
}

Panel scatter_panel(std::string title, const DiscreteCurve& points, double start, double period,
                    const PlotSpec& spec) {
  double hi = 0.0;
  for (const Sample& p : points) {
    hi = std::max(hi, p.y);
  }
  const PolarFrame frame = make_frame(0.0, hi);
  Panel panel = Panel::polar(title, 2.0);
  panel.baseline_circle(1.0, std::nullopt);
  for (const Sample& p : points) {
    double u = std::fmod(p.x - start, period) / period;
    if (u < 0.0) {
      u += 1.0;
    }
    panel.point(to_plane(polar_map(u, p.y, frame)), spec.color(0));
  }
  panel.legend(title);
  return panel;
}

std::string svg_document(std::span<const Panel> panels, std::size_t columns, std::string_view title) {
  if (panels.empty() || columns == 0) {
    throw Error("figure needs at least one panel");
  }
  const std::size_t cols = std::min(columns, panels.size());
  const std::size_t rows = (panels.size() + cols - 1) / cols;
  const double w = Panel::kSize * static_cast<double>(cols);
  const double h = Panel::kSize * static_cast<double>(rows) + 60.0;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " + num(w) + " " +
         num(h) + "\" width=\"" + num(w / 2) + "\" height=\"" + num(h / 2) + "\">\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    out += panels[i].str(Panel::kSize * static_cast<double>(i % cols),
                         60.0 + Panel::kSize * static_cast<double>(i / cols));
  }
  out += "<text class=\"legend title\" x=\"" + num(w / 2) +
         "\" y=\"40\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"30\">" +
         escape(title) + "</text>\n";
  out += "</svg>\n";
  return out;
}

std::string render(const Splinet& net, const PlotSpec& spec, const std::optional<Eigen::VectorXd>& coeff) {
  const std::vector<Spline>& members = net.basis().members();
  std::vector<Panel> panels;
  switch (spec.kind) {
    case Layout::circle:
      panels.push_back(circle_panel("basis", members, frame_for(members, spec.samples_per_segment), spec));
      break;
    case Layout::net:
      panels.push_back(net_panel("net", net,
                                 frame_for(members, spec.samples_per_segment, net.top_level()), spec));
      break;
    case Layout::spikes:
      if (!coeff) {
        throw Error("spike layout needs coefficients");
      }
      panels.push_back(spikes_panel("coefficients", net, *coeff, spec));
      break;
    case Layout::cartesian:
      panels.push_back(cartesian_panel("basis", members, spec));
      break;
  }
  return svg_document(panels, 1, layout_name(spec.kind));
}

} // namespace splinet
