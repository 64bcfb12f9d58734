#include "splinet/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "splinet/error.hpp"

namespace splinet {

namespace {

using nlohmann::json;

json taylor_json(const Eigen::MatrixXd& t) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      row.push_back(t(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd taylor_from(const json& rows, std::size_t knots, int order) {
  if (!rows.is_array() || rows.size() != knots) {
    throw ParseError("taylor matrix needs one row per knot", 0);
  }
  Eigen::MatrixXd t(static_cast<Eigen::Index>(knots), order + 1);
  for (std::size_t i = 0; i < knots; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(order + 1)) {
      throw ParseError("taylor row " + std::to_string(i) + " needs order+1 entries", 0);
    }
    for (int j = 0; j <= order; ++j) {
      t(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return t;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
}

MeshPtr mesh_from(const json& doc) {
  return make_mesh(KnotMesh(doc.at("knots").get<std::vector<double>>(),
                            doc.value("periodic", false)));
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what(), 0);
  }
}

// Splits a line at commas, trimming blanks.
std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    std::string_view f = line.substr(begin, comma == std::string_view::npos ? line.npos : comma - begin);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.push_back(f);
    if (comma == std::string_view::npos) {
      return out;
    }
    begin = comma + 1;
  }
}

bool to_double(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

// Iterates non-empty, non-comment lines with their 1-based numbers.
template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t nl = text.find('\n', begin);
    std::string_view line = text.substr(begin, nl == std::string_view::npos ? text.npos : nl - begin);
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (!line.empty() && line.front() != '#') {
      f(line, line_no);
    }
    if (nl == std::string_view::npos) {
      break;
    }
    begin = nl + 1;
  }
}

} // namespace

std::string spline_to_json(const Spline& s) {
  json doc;
  doc["order"] = s.order();
  doc["knots"] = std::vector<double>(s.mesh().knots().begin(), s.mesh().knots().end());
  doc["periodic"] = s.mesh().periodic();
  doc["taylor"] = taylor_json(s.taylor());
  return doc.dump(1) + "\n";
}

Spline spline_from_json(std::string_view text) {
  const json doc = parse(text);
  return guarded([&] {
    const MeshPtr mesh = mesh_from(doc);
    const int order = doc.at("order").get<int>();
    return Spline(mesh, order, taylor_from(doc.at("taylor"), mesh->knot_count(), order));
  });
}

std::string family_to_json(const FamilyDocument& d) {
  json doc;
  doc["order"] = d.family.order();
  doc["knots"] = std::vector<double>(d.family.mesh().knots().begin(), d.family.mesh().knots().end());
  doc["periodic"] = d.family.mesh().periodic();
  json splines = json::array();
  for (const Spline& s : d.family) {
    splines.push_back(taylor_json(s.taylor()));
  }
  doc["splines"] = std::move(splines);
  if (!d.extra_indices.empty()) {
    doc["extra_indices"] = d.extra_indices;
  }
  if (!d.layout.empty()) {
    doc["levels"] = d.levels;
    json layout = json::array();
    for (const NetPosition& p : d.layout) {
      layout.push_back({{"level", p.level}, {"tuplet", p.tuplet}, {"position", p.position}});
    }
    doc["layout"] = std::move(layout);
  }
  return doc.dump(1) + "\n";
}

FamilyDocument family_from_json(std::string_view text) {
  const json doc = parse(text);
  return guarded([&] {
    const MeshPtr mesh = mesh_from(doc);
    const int order = doc.at("order").get<int>();
    FamilyDocument out{SplineFamily(mesh, order), {}, {}, doc.value("levels", 0)};
    for (const json& t : doc.at("splines")) {
      out.family.push_back(Spline(mesh, order, taylor_from(t, mesh->knot_count(), order)));
    }
    if (doc.contains("extra_indices")) {
      out.extra_indices = doc.at("extra_indices").get<std::vector<std::size_t>>();
      for (std::size_t i : out.extra_indices) {
        if (i >= out.family.size()) {
          throw ParseError("extra index " + std::to_string(i) + " out of range", 0);
        }
      }
    }
    if (doc.contains("layout")) {
      for (const json& p : doc.at("layout")) {
        out.layout.push_back({p.at("level").get<int>(), p.at("tuplet").get<std::size_t>(),
                              p.at("position").get<std::size_t>()});
      }
      if (out.layout.size() != out.family.size()) {
        throw ParseError("layout needs one entry per spline", 0);
      }
    }
    return out;
  });
}

Splinet as_splinet(const FamilyDocument& doc) {
  return Splinet(doc.family, doc.levels, doc.layout, doc.family.mesh().periodic());
}

FamilyDocument as_document(const Splinet& net, std::vector<std::size_t> extra_indices) {
  return {net.basis(), std::move(extra_indices), net.layout(), net.levels()};
}

std::string cost_report_to_json(const CostReport& r) {
  json doc;
  doc["k"] = r.k;
  doc["n"] = r.n;
  doc["measured"] = r.measured;
  doc["measured_total"] = r.measured_total;
  doc["J1"] = r.j1 ? json(*r.j1) : json(nullptr);
  doc["J2"] = r.j2 ? json(*r.j2) : json(nullptr);
  doc["total_support"] = r.total_support;
  doc["predicted_total_support"] =
      r.predicted_total_support ? json(*r.predicted_total_support) : json(nullptr);
  return doc.dump(1) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error("cannot write " + path.string());
  }
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  for_each_line(text, [&](std::string_view line, std::size_t no) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',')) ++i;
      if (i >= line.size() || line[i] == '#') {
        break;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',') ++j;
      double v = 0.0;
      if (!to_double(line.substr(i, j - i), v)) {
        throw ParseError("not a number: '" + std::string(line.substr(i, j - i)) + "'", no);
      }
      out.push_back(v);
      i = j;
    }
  });
  return out;
}

std::vector<DiscreteCurve> parse_points_csv(std::string_view text) {
  std::vector<DiscreteCurve> curves;
  std::map<std::string, std::size_t> ids;
  bool first = true;
  for_each_line(text, [&](std::string_view line, std::size_t no) {
    const auto f = fields(line);
    double x = 0.0;
    double y = 0.0;
    const bool numeric = f.size() == 3 && to_double(f[1], x) && to_double(f[2], y);
    if (first && !numeric) {
      first = false;
      return; // header
    }
    first = false;
    if (!numeric) {
      throw ParseError("expected curve_id,x,y", no);
    }
    const auto [it, inserted] = ids.emplace(std::string(f[0]), curves.size());
    if (inserted) {
      curves.emplace_back();
    }
    curves[it->second].push_back({x, y});
  });
  if (curves.empty()) {
    throw ParseError("no data points", 0);
  }
  return curves;
}

Histogram parse_histogram_csv(std::string_view text) {
  Histogram h;
  bool first = true;
  for_each_line(text, [&](std::string_view line, std::size_t no) {
    const auto f = fields(line);
    double lo = 0.0;
    double hi = 0.0;
    double count = 0.0;
    const bool numeric =
        f.size() == 3 && to_double(f[0], lo) && to_double(f[1], hi) && to_double(f[2], count);
    if (first && !numeric) {
      first = false;
      return;
    }
    first = false;
    if (!numeric) {
      throw ParseError("expected lower,upper,count", no);
    }
    if (h.edges.empty()) {
      h.edges.push_back(lo);
    } else if (lo != h.edges.back()) {
      throw ParseError("bins must be adjacent", no);
    }
    h.edges.push_back(hi);
    h.counts.push_back(count);
  });
  if (h.counts.empty()) {
    throw ParseError("no bins", 0);
  }
  return h;
}

} // namespace splinet
