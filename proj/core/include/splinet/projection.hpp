#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "splinet/orthogonalize.hpp"
#include "splinet/spline.hpp"

namespace splinet {

struct Sample {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Sample&) const = default;
};

/// One discretely observed curve.
using DiscreteCurve = std::vector<Sample>;

/// Bin edges e₀ < … < e_m and the m counts of (e_i, e_{i+1}].
struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;
};

using NetPtr = std::shared_ptr<const Splinet>;

/// Row i of `coeff` holds the expansion of input curve i in the net, and
/// sp[i] is the corresponding projected spline.
struct ProjectionResult {
  std::vector<Spline> input_splines;  // spline and histogram inputs
  std::vector<DiscreteCurve> input_points; // discrete inputs, sorted by argument
  Eigen::MatrixXd coeff;
  NetPtr basis;
  SplineFamily sp;
};

/// coeff_j = ⟨s, e_j⟩. The input may live on any mesh over the same domain.
ProjectionResult project_spline(const Spline& s, const NetPtr& net);
ProjectionResult project_splines(std::span<const Spline> curves, const NetPtr& net);

/// Unweighted least squares on the net evaluated at the arguments; repeated
/// arguments are averaged first. Periodic nets wrap arguments onto the circle.
/// Throws splinet::Error when the design matrix is rank deficient.
ProjectionResult project_discrete(const DiscreteCurve& points, const NetPtr& net);
ProjectionResult project_discrete(std::span<const DiscreteCurve> curves, const NetPtr& net);

/// Piecewise-constant density of unit integral on the bin mesh.
Spline histogram_density(const Histogram& h);

/// Projection of histogram_density(h), computed exactly by inner products.
ProjectionResult histogram_to_density(const Histogram& h, const NetPtr& net);

/// Count the arguments of `values` into bins given by `edges`; values are
/// wrapped into (e₀, e_m] first.
Histogram make_histogram(std::span<const double> values, std::span<const double> edges);

/// Net expansion with the average coefficient row of all results.
Spline mean_function(std::span<const ProjectionResult> results);

/// Row-wise coefficient average across results sharing one basis.
Eigen::VectorXd mean_coefficients(std::span<const ProjectionResult> results);

/// Adds (θ, 0) at θ = start + i·grid_step, i = 1..⌊period/grid_step⌋, wherever
/// no observation lies within circular distance gap_threshold. Output sorted.
DiscreteCurve pad_with_zeros(const DiscreteCurve& points, double grid_step,
                             double gap_threshold, double start = 0.0,
                             double period = 1.0);

/// L² projection onto the span of an arbitrary (non-orthogonal) family by
/// solving the Gram system.
Spline project_gram(const Spline& s, const SplineFamily& family);

/// "curve_id,basis_index,value" with a header line.
void write_coefficients_csv(std::ostream& out, const ProjectionResult& r);
/// "curve_id,x,y" with a header line.
void write_points_csv(std::ostream& out, std::span<const DiscreteCurve> curves);

} // namespace splinet
