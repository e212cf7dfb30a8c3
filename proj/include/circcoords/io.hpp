#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "circular_map.hpp"
#include "cohomology.hpp"
#include "geometry.hpp"
#include "laplacian.hpp"
#include "lp_optimizer.hpp"
#include "rips.hpp"

namespace circcoords::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, which reads back to the same double.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw FormatError("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Non-empty lines, trailing '\r' removed.
inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point clouds

inline std::string cloud_csv(const PointCloud& cloud) {
  std::string s;
  for (std::size_t k = 0; k < cloud.dim; ++k) s += (k ? ",x" : "x") + std::to_string(k);
  for (std::size_t k = 0; k < cloud.truth_dims; ++k) s += ",truth" + std::to_string(k);
  s += '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t k = 0; k < cloud.dim; ++k) {
      if (k) s += ',';
      s += format_double(p[k]);
    }
    for (std::size_t k = 0; k < cloud.truth_dims; ++k) s += ',' + format_double(cloud.truth_at(i, k));
    s += '\n';
  }
  return s;
}

/// Reads a numeric CSV. Columns whose header starts with "truth" become
/// truth columns and every other column a coordinate. Without a header row
/// all columns are coordinates.
inline PointCloud parse_cloud_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("point cloud CSV is empty");
  auto first = split_csv(lines[0]);
  bool header = false;
  for (auto cell : first) {
    try {
      parse_double(cell);
    } catch (const FormatError&) {
      header = true;
    }
  }
  std::vector<bool> is_truth(first.size(), false);
  if (header)
    for (std::size_t c = 0; c < first.size(); ++c) is_truth[c] = first[c].starts_with("truth");

  PointCloud cloud;
  for (bool t : is_truth) (t ? cloud.truth_dims : cloud.dim) += 1;
  if (cloud.dim == 0) throw FormatError("point cloud CSV has no coordinate columns");
  for (std::size_t r = header ? 1 : 0; r < lines.size(); ++r) {
    const auto cells = split_csv(lines[r]);
    if (cells.size() != first.size())
      throw FormatError("row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) + " fields, expected " +
                        std::to_string(first.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!is_truth[c]) cloud.coords.push_back(parse_double(cells[c]));
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (is_truth[c]) cloud.truth.push_back(parse_double(cells[c]));
  }
  cloud.validate();
  return cloud;
}

inline PointCloud read_cloud(const std::string& path) { return parse_cloud_csv(read_file(path)); }

// ---------------------------------------------------------------------------
// Persistence

inline std::string diagram_csv(const std::vector<PersistencePair>& pairs) {
  std::string s = "birth,death,lifetime,pair_id\n";
  for (std::size_t k = 0; k < pairs.size(); ++k)
    s += format_double(pairs[k].birth) + ',' + format_double(pairs[k].death) + ',' +
         format_double(pairs[k].lifetime()) + ',' + std::to_string(k) + '\n';
  return s;
}

inline std::string cocycle_csv(const PersistencePair& pair) {
  std::string s = "edge_i,edge_j,value\n";
  for (const auto& e : pair.representative)
    s += std::to_string(e.i) + ',' + std::to_string(e.j) + ',' + std::to_string(e.value) + '\n';
  return s;
}

inline std::vector<CocycleEntry> parse_cocycle_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != "edge_i,edge_j,value") throw FormatError("cocycle CSV: bad header");
  std::vector<CocycleEntry> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv(lines[r]);
    if (cells.size() != 3) throw FormatError("cocycle CSV: row " + std::to_string(r + 1) + " needs 3 fields");
    std::uint32_t v[3];
    for (int k = 0; k < 3; ++k) {
      const auto [ptr, ec] = std::from_chars(cells[k].data(), cells[k].data() + cells[k].size(), v[k]);
      if (ec != std::errc{} || ptr != cells[k].data() + cells[k].size())
        throw FormatError("cocycle CSV: bad integer '" + std::string(cells[k]) + "'");
    }
    out.push_back({v[0], v[1], v[2]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solver outputs

inline std::string weights_csv(const RipsComplex& c, const WeightScheme& w) {
  std::string s = "edge_i,edge_j,q\n";
  for (std::size_t e = 0; e < c.n_edges(); ++e)
    s += std::to_string(c.edge(e).i) + ',' + std::to_string(c.edge(e).j) + ',' + format_double(w.q[e]) + '\n';
  return s;
}

inline std::string trace_csv(const LossTrace& trace) {
  std::string s = "iter,loss,norm_kind,p_or_t\n";
  for (const auto& row : trace.rows)
    s += std::to_string(row.iter) + ',' + format_double(row.loss) + ',' + to_string(row.kind) + ',' +
         format_double(row.p_or_t) + '\n';
  return s;
}

struct CoordsTable {
  std::vector<double> f;
  CircularMap map;
};

inline std::string coords_csv(std::span<const double> f, const CircularMap& map) {
  if (f.size() != map.size()) throw std::invalid_argument("coords_csv: f and theta differ in length");
  std::string s = "vertex,f,theta,component\n";
  for (std::size_t v = 0; v < f.size(); ++v)
    s += std::to_string(v) + ',' + format_double(f[v]) + ',' + format_double(map.theta[v]) + ',' +
         std::to_string(map.component[v]) + '\n';
  return s;
}

inline CoordsTable parse_coords_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != "vertex,f,theta,component") throw FormatError("coords CSV: bad header");
  CoordsTable t;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv(lines[r]);
    if (cells.size() != 4) throw FormatError("coords CSV: row " + std::to_string(r + 1) + " needs 4 fields");
    if (parse_double(cells[0]) != static_cast<double>(r - 1)) throw FormatError("coords CSV: vertices out of order");
    t.f.push_back(parse_double(cells[1]));
    t.map.theta.push_back(parse_double(cells[2]));
    t.map.component.push_back(static_cast<std::uint32_t>(parse_double(cells[3])));
  }
  return t;
}

inline std::string scatter_csv(const EvalReport& report) {
  std::string s = "truth,theta,method\n";
  for (const auto& [truth, theta] : report.scatter)
    s += format_double(truth) + ',' + format_double(theta) + ',' + report.method + '\n';
  return s;
}

inline nlohmann::ordered_json report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["method"] = report.method;
  j["winding"] = report.winding;
  j["linearity_score"] = report.linearity_score;
  j["n"] = report.scatter.size();
  return j;
}

}  // namespace circcoords::io
