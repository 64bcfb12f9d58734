#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "splinet/orthogonalize.hpp"
#include "splinet/polar.hpp"
#include "splinet/projection.hpp"

namespace splinet {

enum class Layout { circle, net, spikes, cartesian };

std::optional<Layout> parse_layout(std::string_view name);
std::string_view layout_name(Layout layout);

struct PlotSpec {
  Layout kind = Layout::circle;
  int samples_per_segment = 32;
  std::vector<std::string> palette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  bool knot_ticks = true;

  const std::string& color(std::size_t i) const { return palette[i % palette.size()]; }
};

/// One square panel of a figure, 1000 × 1000 units. Elements are kept in
/// buckets and emitted in a fixed order: baseline circles, knot ticks, data
/// marks (bars, points), curves, spikes, legend. Every element carries a
/// class attribute naming its role.
class Panel {
public:
  static constexpr double kSize = 1000.0;
  static constexpr double kOuterRadius = 400.0;

  /// Polar panel whose largest drawn radius `outer_radius` maps to 400 units.
  static Panel polar(std::string title, double outer_radius);
  /// Cartesian panel over [x0, x1] × [y0, y1].
  static Panel cartesian(std::string title, double x0, double x1, double y0, double y1);

  const std::string& title() const { return title_; }

  void baseline_circle(double r, std::optional<int> level);
  /// Dotted radial segments at the distinct circle positions of the knots.
  void knot_ticks(const KnotMesh& mesh, double r_inner, double r_outer);
  /// Dotted vertical lines at every knot (cartesian panels).
  void knot_lines(const KnotMesh& mesh);
  void curve(std::span<const PlanePoint> points, std::size_t index, const std::string& color,
             std::optional<int> level);
  void spike(double theta, double r_from, double r_to, std::size_t index, const std::string& color);
  void point(const PlanePoint& p, const std::string& color);
  void sector(double theta0, double theta1, double r_inner, double r_outer, const std::string& color);
  void legend(const std::string& text);

  std::string str(double dx, double dy) const;

private:
  Panel(std::string title, double ox, double oy, double sx, double sy);
  std::string sx(const PlanePoint& p) const;
  std::string sy(const PlanePoint& p) const;
  std::string xy(const PlanePoint& p) const;

  std::string title_;
  double ox_ = 0.0;
  double oy_ = 0.0;
  double sx_ = 1.0;
  double sy_ = 1.0;
  std::string baselines_;
  std::string ticks_;
  std::string marks_;
  std::string curves_;
  std::string spikes_;
  std::string legend_;
};

/// Members on the unit-baseline circle through T.
Panel circle_panel(std::string title, std::span<const Spline> curves, const PolarFrame& frame,
                   const PlotSpec& spec);

/// Members on concentric level circles through T_l (requires a dyadic layout).
Panel net_panel(std::string title, const Splinet& net, const PolarFrame& frame, const PlotSpec& spec);

/// Radial spikes, one per member at the angle where the member peaks, with a
/// cross at the scaled coefficient; on level circles when the net has a layout.
Panel spikes_panel(std::string title, const Splinet& net, const Eigen::VectorXd& coeff,
                   const PlotSpec& spec);

Panel cartesian_panel(std::string title, std::span<const Spline> curves, const PlotSpec& spec);

/// Histogram bars as annular sectors of height exp(a·density) over the unit circle.
Panel histogram_panel(std::string title, const Histogram& h, const PlotSpec& spec);

/// Scatter (argument, value) through T on the circle [start, start + period].
Panel scatter_panel(std::string title, const DiscreteCurve& points, double start, double period,
                    const PlotSpec& spec);

/// SVG 1.1 document laying out the panels on a grid with `columns` columns.
std::string svg_document(std::span<const Panel> panels, std::size_t columns, std::string_view title);

/// Single-panel figure of a family in the requested layout. Spikes need the
/// coefficients of a decomposition.
std::string render(const Splinet& net, const PlotSpec& spec,
                   const std::optional<Eigen::VectorXd>& coeff = std::nullopt);

} // namespace splinet
