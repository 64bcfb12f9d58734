#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "splinet/orthogonalize.hpp"
#include "splinet/projection.hpp"
#include "splinet/spline.hpp"

namespace splinet {

/// {"order", "knots", "periodic", "taylor": [[row], ...]}. Numbers are written
/// in shortest round-trip form, so reading back is bit-exact.
std::string spline_to_json(const Spline& s);
Spline spline_from_json(std::string_view text);

/// A family on disk: shared mesh and order, one Taylor matrix per member,
/// plus the optional periodic extra indices and dyadic layout.
struct FamilyDocument {
  SplineFamily family;
  std::vector<std::size_t> extra_indices;
  std::vector<NetPosition> layout;
  int levels = 0;
};

std::string family_to_json(const FamilyDocument& doc);
FamilyDocument family_from_json(std::string_view text);

/// Wraps a document as a net; families without a layout get an empty one.
Splinet as_splinet(const FamilyDocument& doc);
FamilyDocument as_document(const Splinet& net, std::vector<std::size_t> extra_indices = {});

std::string cost_report_to_json(const CostReport& report);

std::string read_text_file(const std::filesystem::path& path);
/// Creates missing parent directories; throws splinet::Error on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Numbers separated by whitespace, commas or newlines; '#' starts a comment.
std::vector<double> parse_numbers(std::string_view text);

/// "curve_id,x,y" rows (a header line is allowed), grouped by curve id in
/// order of first appearance.
std::vector<DiscreteCurve> parse_points_csv(std::string_view text);

/// "lower,upper,count" rows of adjacent bins (a header line is allowed).
Histogram parse_histogram_csv(std::string_view text);

} // namespace splinet
