#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splinet/error.hpp"
#include "splinet/io.hpp"
#include "splinet/orthogonalize.hpp"
#include "splinet/periodic.hpp"
#include "splinet/projection.hpp"
#include "splinet/svg.hpp"
#include "splinet/wind.hpp"

namespace splinet::cli {

namespace fs = std::filesystem;

namespace {

struct BasisArgs {
  std::string knots;
  std::size_t uniform = 0;
  int order = 3;
  bool periodic = false;
  std::string out;
  std::string svg;
};

struct OrthoArgs {
  std::string basis;
  std::string method = "splinet";
  std::string report;
  std::string out;
  std::string gram;
};

struct ProjectArgs {
  std::string basis;
  std::string data;
  std::string kind = "spline";
  std::string outdir = ".";
};

struct WindArgs {
  std::string input;
  std::string outdir = "wind_out";
  WindConfig config;
};

struct PlotArgs {
  std::string basis;
  std::string layout = "circle";
  std::string data;
  std::string out;
  int samples = 32;
};

struct SynthArgs {
  std::size_t days = 64;
  std::uint64_t seed = 2023;
  std::string out;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_text_file(path, content);
  }
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

int cmd_basis(const BasisArgs& a, std::ostream& out) {
  if (a.knots.empty() == (a.uniform == 0)) {
    throw Error("give exactly one of --knots FILE or --uniform N");
  }
  KnotMesh mesh = a.knots.empty() ? KnotMesh::uniform(a.uniform, 0.0, 1.0, a.periodic)
                                  : KnotMesh(parse_numbers(read_text_file(a.knots)), a.periodic);
  const MeshPtr m = make_mesh(std::move(mesh));
  FamilyDocument doc{SplineFamily(m, a.order), {}, {}, 0};
  if (a.periodic) {
    PeriodicBasis pb = build_periodic_bsplines(m, a.order);
    doc.family = pb.members;
    doc.extra_indices = pb.extra_indices;
  } else {
    doc.family = build_bsplines(m, a.order);
  }
  emit(a.out, family_to_json(doc), out);
  if (!a.svg.empty()) {
    const PlotSpec spec;
    const std::vector<Panel> panels = {circle_panel(
        "B-splines of order " + std::to_string(a.order), doc.family.members(),
        frame_for(doc.family.members(), spec.samples_per_segment), spec)};
    write_text_file(a.svg, svg_document(panels, 1, "basis"));
  }
  return 0;
}

int cmd_ortho(const OrthoArgs& a, std::ostream& out) {
  const FamilyDocument in = family_from_json(read_text_file(a.basis));
  const SplineFamily& family = in.family;
  OpCounter counter;
  FamilyDocument result{SplineFamily(family.mesh_ptr(), family.order()), {}, {}, 0};
  if (a.method == "onesided") {
    result.family = gram_schmidt_one_sided(family, counter);
  } else if (a.method == "twosided") {
    result.family = gram_schmidt_symmetric(family, counter);
  } else if (!in.extra_indices.empty()) {
    const PeriodicBasis pb{family.mesh_ptr(), nullptr, family.order(),
                           SplineFamily(family.mesh_ptr(), family.order()), family,
                           in.extra_indices};
    for (std::size_t i = 0; i < pb.extra_indices.size(); ++i) {
      if (pb.extra_indices[i] != pb.regular_count() + i) {
        throw Error("periodic splinet expects the extra members last");
      }
    }
    result = as_document(build_periodic_splinet(pb, counter), in.extra_indices);
  } else {
    result = as_document(dyadic_splinet(family, counter));
  }

  CostReport report;
  report.k = family.order();
  report.n = family.size();
  if (dyadic_exponent(report.k, report.n).value_or(0) >= 1) {
    report = predicted_costs(report.k, report.n);
  }
  report.measured = counter.cross_evaluations();
  report.measured_total = counter.inner_product_evaluations();
  report.total_support = total_support(result.family);

  emit(a.out, family_to_json(result), out);
  if (!a.report.empty()) {
    write_text_file(a.report, cost_report_to_json(report));
  }
  if (!a.gram.empty()) {
    std::ostringstream csv;
    gram_matrix(result.family).write_csv(csv, 1e-14);
    write_text_file(a.gram, csv.str());
  }
  if (!a.out.empty() && a.out != "-") {
    out << a.method << ": " << result.family.size() << " members, " << report.measured
        << " cross inner products";
    if (report.j1) {
      out << " (J1 = " << fmt("%g", *report.j1) << ", J2 = " << fmt("%g", *report.j2) << ")";
    }
    out << ", total support " << fmt("%.6g", report.total_support) << "\n";
  }
  return 0;
}

NetPtr load_orthonormal(const std::string& path) {
  auto net = std::make_shared<const Splinet>(as_splinet(family_from_json(read_text_file(path))));
  const double defect = gram_matrix(net->basis()).identity_defect();
  if (defect > 1e-8) {
    throw Error("basis in " + path + " is not orthonormal (Gram defect " + fmt("%.3g", defect) +
                "); run `splinet ortho` first");
  }
  return net;
}

int cmd_project(const ProjectArgs& a, std::ostream& out) {
  const NetPtr net = load_orthonormal(a.basis);
  const std::string text = read_text_file(a.data);
  std::optional<ProjectionResult> r;
  if (a.kind == "spline") {
    r = project_spline(spline_from_json(text), net);
  } else if (a.kind == "discrete") {
    r = project_discrete(parse_points_csv(text), net);
  } else {
    r = histogram_to_density(parse_histogram_csv(text), net);
  }
  const fs::path dir = a.outdir;
  std::ostringstream coeff;
  write_coefficients_csv(coeff, *r);
  write_text_file(dir / "coefficients.csv", coeff.str());
  write_text_file(dir / "projection.json", family_to_json({r->sp, {}, {}, 0}));
  if (!r->input_points.empty()) {
    std::ostringstream pts;
    write_points_csv(pts, r->input_points);
    write_text_file(dir / "input.csv", pts.str());
  }
  out << "projected " << r->coeff.rows() << " curve(s) onto " << net->size() << " members\n";
  return 0;
}

int cmd_wind(const WindArgs& a, std::ostream& out) {
  const std::vector<WindRecord> records = ingest_csv(a.input);
  const WindBases bases = make_wind_bases(a.config);
  const std::vector<DailyFunctions> days = daily_pipeline(records, bases, a.config);
  write_wind_outputs(a.outdir, days, bases);
  out << records.size() << " records, " << days.size() << " days written to " << a.outdir << "\n";
  return 0;
}

// A single spline document, or the first curve of a family such as a projection result
Spline spike_target(const std::string& text) {
  if (text.find("\"splines\"") == std::string::npos) {
    return spline_from_json(text);
  }
  const FamilyDocument doc = family_from_json(text);
  if (doc.family.empty()) {
    throw Error("--data holds no spline");
  }
  return doc.family[0];
}

int cmd_plot(const PlotArgs& a, std::ostream& out) {
  const Splinet net = as_splinet(family_from_json(read_text_file(a.basis)));
  PlotSpec spec;
  spec.kind = *parse_layout(a.layout);
  spec.samples_per_segment = a.samples;
  std::optional<Eigen::VectorXd> coeff;
  if (spec.kind == Layout::spikes) {
    if (a.data.empty()) {
      throw Error("--layout spikes needs --data with a spline to decompose");
    }
    const NetPtr shared = load_orthonormal(a.basis);
    coeff = project_spline(spike_target(read_text_file(a.data)), shared).coeff.row(0).transpose();
  }
  emit(a.out, render(net, spec, coeff), out);
  return 0;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  emit(a.out, synthesize_wind_csv(a.days, a.seed), out);
  return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic B-splines, orthonormal splinets and their projections", "splinet"};
  app.require_subcommand(1);

  BasisArgs basis;
  auto* b = app.add_subcommand("basis", "Build a B-spline basis and write it as JSON");
  b->add_option("--knots", basis.knots, "File with the knots ξ₀ < … < ξ_{n+1}");
  b->add_option("--uniform", basis.uniform, "Number of equal segments on [0, 1]");
  b->add_option("--order", basis.order, "Polynomial degree k")->check(CLI::NonNegativeNumber);
  b->add_flag("--periodic", basis.periodic, "Identify ξ₀ with ξ_{n+1}");
  b->add_option("--out", basis.out, "Output JSON (default stdout)");
  b->add_option("--svg", basis.svg, "Also draw the basis on the circle");

  OrthoArgs ortho;
  auto* o = app.add_subcommand("ortho", "Orthonormalize a basis and count inner products");
  o->add_option("--basis", ortho.basis, "Basis JSON")->required();
  o->add_option("--method", ortho.method, "onesided | twosided | splinet")
      ->check(CLI::IsMember({"onesided", "twosided", "splinet"}));
  o->add_option("--report", ortho.report, "Write the cost report JSON here");
  o->add_option("--out", ortho.out, "Output JSON (default stdout)");
  o->add_option("--gram", ortho.gram, "Write the Gram matrix of the result as CSV");

  ProjectArgs project;
  auto* p = app.add_subcommand("project", "Project data onto an orthonormal basis");
  p->add_option("--basis", project.basis, "Orthonormal basis JSON")->required();
  p->add_option("--data", project.data, "Spline JSON, points CSV or histogram CSV")->required();
  p->add_option("--kind", project.kind, "spline | discrete | histogram")
      ->check(CLI::IsMember({"spline", "discrete", "histogram"}));
  p->add_option("--outdir", project.outdir, "Directory for the result files");

  WindArgs wind;
  auto* w = app.add_subcommand("wind", "Daily direction densities and speed curves from a wind CSV");
  w->add_option("--input", wind.input, "Hourly wind CSV")->required();
  w->add_option("--outdir", wind.outdir, "Output directory");
  w->add_option("--bins", wind.config.bins, "Direction histogram bins")->check(CLI::PositiveNumber);
  w->add_option("--density-dim", wind.config.density_dimension, "Dimension of the density space")
      ->check(CLI::PositiveNumber);
  w->add_option("--density-order", wind.config.density_order, "Order of the density splines")
      ->check(CLI::PositiveNumber);
  w->add_option("--speed-order", wind.config.speed_order, "Order of the speed splines")
      ->check(CLI::PositiveNumber);
  w->add_option("--speed-levels", wind.config.speed_levels, "Dyadic levels of the speed net")
      ->check(CLI::PositiveNumber);

  PlotArgs plot;
  auto* pl = app.add_subcommand("plot", "Draw a basis as SVG");
  pl->add_option("--basis", plot.basis, "Basis JSON")->required();
  pl->add_option("--layout", plot.layout, "circle | net | spikes | cartesian")
      ->check(CLI::IsMember({"circle", "net", "spikes", "cartesian"}));
  pl->add_option("--data", plot.data, "Spline JSON decomposed by the spike layout");
  pl->add_option("--samples", plot.samples, "Samples per segment")->check(CLI::Range(2, 4096));
  pl->add_option("--out", plot.out, "Output SVG (default stdout)");

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "Write a synthetic hourly wind CSV");
  sy->add_option("--days", synth.days, "Number of days")->check(CLI::PositiveNumber);
  sy->add_option("--seed", synth.seed, "Random seed");
  sy->add_option("--out", synth.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*b) return cmd_basis(basis, out);
    if (*o) return cmd_ortho(ortho, out);
    if (*p) return cmd_project(project, out);
    if (*w) return cmd_wind(wind, out);
    if (*pl) return cmd_plot(plot, out);
    if (*sy) return cmd_synth(synth, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

} // namespace splinet::cli
