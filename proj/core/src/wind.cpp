#include "splinet/wind.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "splinet/error.hpp"
#include "splinet/io.hpp"
#include "splinet/svg.hpp"

namespace splinet {

namespace {

constexpr std::array<const char*, 8> kColumns = {"YEAR",  "MO",    "DY",    "HR",
                                                 "WD10M", "WS10M", "WD50M", "WS50M"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    out.push_back(trim(line.substr(begin, comma == line.npos ? line.npos : comma - begin)));
    if (comma == line.npos) {
      return out;
    }
    begin = comma + 1;
  }
}

template <class T>
T parse_field(std::string_view s, const char* name, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(std::string("bad ") + name + " value '" + std::string(s) + "'", line);
  }
  return v;
}

double direction(double deg, const char* name, std::size_t line) {
  if (!(deg >= 0.0 && deg <= 360.0)) {
    throw ParseError(std::string(name) + " outside [0, 360]", line);
  }
  return deg == 0.0 ? 360.0 : deg;
}

double speed(double v, const char* name, std::size_t line) {
  if (!(v >= 0.0)) {
    throw ParseError(std::string(name) + " must be non-negative", line);
  }
  return v;
}

NetPtr periodic_net(const PeriodicBasis& basis) {
  OpCounter counter;
  return std::make_shared<const Splinet>(build_periodic_splinet(basis, counter));
}

std::vector<ProjectionResult> collect(const std::vector<DailyFunctions>& days,
                                      ProjectionResult DailyFunctions::*field) {
  std::vector<ProjectionResult> out;
  out.reserve(days.size());
  for (const DailyFunctions& d : days) {
    out.push_back(d.*field);
  }
  return out;
}

std::vector<Spline> curves_of(const std::vector<ProjectionResult>& results) {
  std::vector<Spline> out;
  for (const ProjectionResult& r : results) {
    out.insert(out.end(), r.sp.begin(), r.sp.end());
  }
  return out;
}

double circular_gap_deg(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

} // namespace

std::vector<WindRecord> read_wind_csv(std::istream& in) {
  std::vector<WindRecord> out;
  std::array<std::size_t, kColumns.size()> col{};
  std::size_t width = 0;
  bool have_header = false;
  bool in_preamble = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (line == "-BEGIN HEADER-") {
      in_preamble = true;
      continue;
    }
    if (in_preamble) {
      in_preamble = line != "-END HEADER-";
      continue;
    }
    const auto f = split(line);
    if (!have_header) {
      for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto it = std::find(f.begin(), f.end(), kColumns[c]);
        if (it == f.end()) {
          throw ParseError(std::string("header lacks column ") + kColumns[c], line_no);
        }
        col[c] = static_cast<std::size_t>(it - f.begin());
      }
      width = f.size();
      have_header = true;
      continue;
    }
    if (f.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()),
                       line_no);
    }
    WindRecord r;
    r.year = parse_field<int>(f[col[0]], "YEAR", line_no);
    r.month = parse_field<int>(f[col[1]], "MO", line_no);
    r.day = parse_field<int>(f[col[2]], "DY", line_no);
    r.hour = parse_field<int>(f[col[3]], "HR", line_no);
    if (r.month < 1 || r.month > 12 || r.day < 1 || r.day > 31 || r.hour < 0 || r.hour > 23) {
      throw ParseError("invalid calendar fields", line_no);
    }
    r.wd10 = direction(parse_field<double>(f[col[4]], "WD10M", line_no), "WD10M", line_no);
    r.ws10 = speed(parse_field<double>(f[col[5]], "WS10M", line_no), "WS10M", line_no);
    r.wd50 = direction(parse_field<double>(f[col[6]], "WD50M", line_no), "WD50M", line_no);
    r.ws50 = speed(parse_field<double>(f[col[7]], "WS50M", line_no), "WS50M", line_no);
    if (!out.empty()) {
      const WindRecord& p = out.back();
      if (std::tie(r.year, r.month, r.day, r.hour) <= std::tie(p.year, p.month, p.day, p.hour)) {
        throw ParseError("timestamps must be strictly increasing", line_no);
      }
    }
    out.push_back(r);
  }
  if (out.empty()) {
    throw ParseError(have_header ? "no records" : "empty file", 0);
  }
  return out;
}

std::vector<WindRecord> ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  return read_wind_csv(in);
}

WindBases make_wind_bases(const WindConfig& config) {
  if (config.speed_levels < 1) {
    throw Error("speed basis needs at least one level");
  }
  WindBases b{build_periodic_bsplines(make_mesh(KnotMesh::uniform(config.density_dimension, 0.0, 1.0, true)),
                                      config.density_order),
              nullptr,
              build_periodic_bsplines(
                  make_mesh(KnotMesh::uniform(static_cast<std::size_t>(config.speed_order)
                                                  << config.speed_levels,
                                              0.0, 1.0, true)),
                  config.speed_order),
              nullptr};
  b.density = periodic_net(b.density_basis);
  b.speed = periodic_net(b.speed_basis);
  return b;
}

std::vector<DailyFunctions> daily_pipeline(const std::vector<WindRecord>& records,
                                           const WindBases& bases, const WindConfig& config) {
  if (records.empty()) {
    throw Error("no wind records");
  }
  if (config.bins == 0) {
    throw Error("histogram needs at least one bin");
  }
  std::vector<double> edges;
  const KnotMesh& density_mesh = bases.density->basis().mesh();
  if (config.bins == density_mesh.segment_count()) {
    edges.assign(density_mesh.knots().begin(), density_mesh.knots().end());
  } else {
    const KnotMesh uniform = KnotMesh::uniform(config.bins, 0.0, 1.0, true);
    edges.assign(uniform.knots().begin(), uniform.knots().end());
  }

  std::vector<DailyFunctions> days;
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].year == records[begin].year &&
           records[end].month == records[begin].month && records[end].day == records[begin].day) {
      ++end;
    }
    std::vector<double> dir10;
    std::vector<double> dir50;
    DiscreteCurve sc10;
    DiscreteCurve sc50;
    for (std::size_t i = begin; i < end; ++i) {
      const WindRecord& r = records[i];
      dir10.push_back(r.wd10 / 360.0);
      dir50.push_back(r.wd50 / 360.0);
      sc10.push_back({r.wd10 / 360.0, r.ws10});
      sc50.push_back({r.wd50 / 360.0, r.ws50});
    }
    Histogram hist10 = make_histogram(dir10, edges);
    Histogram hist50 = make_histogram(dir50, edges);
    ProjectionResult density10 = histogram_to_density(hist10, bases.density);
    ProjectionResult density50 = histogram_to_density(hist50, bases.density);
    ProjectionResult speed10 =
        project_discrete(pad_with_zeros(sc10, config.pad_step, config.pad_gap), bases.speed);
    ProjectionResult speed50 =
        project_discrete(pad_with_zeros(sc50, config.pad_step, config.pad_gap), bases.speed);
    days.push_back(DailyFunctions{days.size() + 1, records[begin].year, records[begin].month,
                                  records[begin].day, std::move(hist10), std::move(hist50),
                                  std::move(sc10), std::move(sc50), std::move(density10),
                                  std::move(speed10), std::move(density50), std::move(speed50)});
    begin = end;
  }
  return days;
}

void write_wind_outputs(const std::filesystem::path& outdir, const std::vector<DailyFunctions>& days,
                        const WindBases& bases) {
  if (days.empty()) {
    throw Error("no days to write");
  }
  const std::array<std::pair<const char*, ProjectionResult DailyFunctions::*>, 4> kinds = {{
      {"density10", &DailyFunctions::density10},
      {"speed10", &DailyFunctions::speed10},
      {"density50", &DailyFunctions::density50},
      {"speed50", &DailyFunctions::speed50},
  }};
  for (const DailyFunctions& d : days) {
    const std::filesystem::path dir = outdir / ("day_" + std::to_string(d.day));
    for (const auto& [name, field] : kinds) {
      std::ostringstream csv;
      write_coefficients_csv(csv, d.*field);
      write_text_file(dir / (std::string(name) + ".csv"), csv.str());
    }
  }

  std::map<std::string, Spline> means;
  for (const auto& [name, field] : kinds) {
    const Spline mean = mean_function(collect(days, field));
    write_text_file(outdir / "means" / (std::string(name) + ".json"), spline_to_json(mean));
    means.emplace(name, mean);
  }

  const PlotSpec spec;
  const DailyFunctions& first = days.front();
  const int samples = spec.samples_per_segment;

  {
    const std::vector<Panel> panels = {
        histogram_panel("day 1 direction histogram, 10 m", first.hist10, spec),
        histogram_panel("day 1 direction histogram, 50 m", first.hist50, spec),
        scatter_panel("day 1 speed vs direction, 10 m", first.scatter10, 0.0, 1.0, spec),
        scatter_panel("day 1 speed vs direction, 50 m", first.scatter50, 0.0, 1.0, spec)};
    write_text_file(outdir / "fig_raw.svg", svg_document(panels, 2, "Raw data of the first day"));
  }

  auto transform_figure = [&](const std::string& file, const std::string& what, Panel raw,
                              const NetPtr& net, const ProjectionResult& fit) {
    const std::vector<Spline>& members = net->basis().members();
    const std::vector<Spline> fitted = {fit.sp[0]};
    const std::vector<Panel> panels = {
        std::move(raw),
        net_panel("splinet of order " + std::to_string(net->order()), *net,
                  frame_for(members, samples, net->top_level()), spec),
        spikes_panel("projection coefficients", *net, fit.coeff.row(0).transpose(), spec),
        circle_panel("projected " + what, fitted, frame_for(fitted, samples), spec)};
    write_text_file(outdir / file, svg_document(panels, 2, "Day 1 " + what + " at 10 m"));
  };
  transform_figure("fig_density.svg", "direction density",
                   histogram_panel("raw histogram", first.hist10, spec), bases.density, first.density10);
  transform_figure("fig_speed.svg", "wind speed",
                   scatter_panel("raw speed vs direction", first.scatter10, 0.0, 1.0, spec), bases.speed,
                   first.speed10);

  {
    const std::vector<Spline> densities = curves_of(collect(days, &DailyFunctions::density10));
    const std::vector<Spline> speeds = curves_of(collect(days, &DailyFunctions::speed10));
    const std::vector<Spline> mean_density = {means.at("density10")};
    const std::vector<Spline> mean_speed = {means.at("speed10")};
    const std::string n = std::to_string(days.size());
    const std::vector<Panel> panels = {
        circle_panel(n + " daily direction densities", densities, frame_for(densities, samples), spec),
        circle_panel(n + " daily speed vs direction", speeds, frame_for(speeds, samples), spec),
        circle_panel("mean direction density", mean_density, frame_for(mean_density, samples), spec),
        circle_panel("mean speed vs direction", mean_speed, frame_for(mean_speed, samples), spec)};
    write_text_file(outdir / "fig_days.svg", svg_document(panels, 2, "Daily functional data at 10 m"));
  }
}

std::string synthesize_wind_csv(std::size_t days, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  struct Mode {
    double center;
    double spread;
    double weight;
  };

  std::string out;
  out += "-BEGIN HEADER-\n";
  out += "Synthetic hourly wind record, " + std::to_string(days) + " days, seed " +
         std::to_string(seed) + "\n";
  out += "WD10M/WD50M: direction (degrees), WS10M/WS50M: speed (m/s)\n";
  out += "-END HEADER-\n";
  out += "YEAR,MO,DY,HR,WD10M,WS10M,WD50M,WS50M\n";

  using namespace std::chrono;
  const sys_days start = sys_days{year{2023} / January / 1};
  char buf[128];
  for (std::size_t d = 0; d < days; ++d) {
    const year_month_day date{start + std::chrono::days{static_cast<int>(d)}};
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(d) / 16.0;
    // a dominant easterly mode, a moderate northerly one, the rest uniform
    const std::array<Mode, 2> modes = {{{100.0 + 25.0 * std::sin(phase), 30.0, 0.6},
                                        {10.0 + 15.0 * std::cos(phase), 25.0, 0.3}}};
    const double gust = 1.0 + 0.25 * normal(rng);
    for (int h = 0; h < 24; ++h) {
      const double u = uniform(rng);
      double wd = 0.0;
      if (u < modes[0].weight) {
        wd = modes[0].center + modes[0].spread * normal(rng);
      } else if (u < modes[0].weight + modes[1].weight) {
        wd = modes[1].center + modes[1].spread * normal(rng);
      } else {
        wd = 360.0 * uniform(rng);
      }
      wd = std::fmod(wd, 360.0);
      if (wd < 0.0) {
        wd += 360.0;
      }
      const double east = circular_gap_deg(wd, 100.0) / 40.0;
      const double north = circular_gap_deg(wd, 10.0) / 30.0;
      double ws = (2.0 + 3.0 * std::exp(-0.5 * east * east) + 3.5 * std::exp(-0.5 * north * north)) *
                  std::max(0.2, gust) * (1.0 + 0.1 * normal(rng));
      ws = std::max(0.0, ws);
      double wd50 = std::fmod(wd + 8.0 + 3.0 * normal(rng) + 360.0, 360.0);
      const double ws50 = std::max(0.0, 1.35 * ws + 0.3 * normal(rng));
      // round first so a value that rounds to 360.00 is written as such
      wd = std::round(wd * 100.0) / 100.0;
      wd50 = std::round(wd50 * 100.0) / 100.0;
      std::snprintf(buf, sizeof buf, "%d,%u,%u,%d,%.2f,%.2f,%.2f,%.2f\n", static_cast<int>(date.year()),
                    static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()), h,
                    wd == 0.0 ? 360.0 : wd, ws, wd50 == 0.0 ? 360.0 : wd50, ws50);
      out += buf;
    }
  }
  return out;
}

} // namespace splinet
