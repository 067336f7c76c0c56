#pragma once

// Text formats for points, hierarchies, batch summaries and parameter files.
//
// All writers use ',' delimiters, '\n' line endings and "%.17g" for doubles,
// so equal inputs give byte-identical output and doubles round-trip exactly.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hiergen/generator.hpp"
#include "hiergen/metrics.hpp"
#include "hiergen/model.hpp"

namespace hiergen {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io {

inline std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline std::vector<std::string_view> split(std::string_view line, char delim = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(line, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline std::uint64_t parse_uint(std::string_view text, std::size_t line) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "not a non-negative integer: '" + std::string(text) + "'");
  }
  return value;
}

inline NodePath parse_path(std::string_view text, std::size_t line) {
  text = trim(text);
  if (text.empty() || text.front() != '/') throw ParseError(line, "node path must start with '/'");
  if (text == "/") return NodePath{};
  std::vector<std::uint32_t> indices;
  for (auto part : split(text.substr(1), '/')) {
    const auto v = parse_uint(part, line);
    if (v > UINT32_MAX) throw ParseError(line, "child index out of range");
    indices.push_back(static_cast<std::uint32_t>(v));
  }
  return NodePath(std::move(indices));
}

template <typename Fn>
void with_output(const std::filesystem::path& destination, Fn&& fn) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + destination.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("write to '" + destination.string() + "' failed");
}

inline std::ifstream open_input(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot open '" + source.string() + "' for reading");
  return in;
}

}  // namespace io

// ---------------------------------------------------------------------------
// points: point_id,node_path,f1,...,fd

inline void write_points(std::ostream& out, const std::vector<DataPoint>& points, std::size_t d) {
  out << "point_id,node_path";
  for (std::size_t k = 1; k <= d; ++k) out << ",f" << k;
  out << '\n';
  std::vector<const DataPoint*> sorted;
  for (const auto& p : points) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const DataPoint* p : sorted) {
    out << p->id << ',' << p->owner.to_string();
    for (double f : p->features) out << ',' << io::format_double(f);
    out << '\n';
  }
}

inline void write_points(const std::filesystem::path& destination, const std::vector<DataPoint>& points,
                         std::size_t d) {
  io::with_output(destination, [&](std::ostream& out) { write_points(out, points, d); });
}

inline std::vector<DataPoint> read_points(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const auto header = io::split(io::trim(line));
  if (header.size() < 2 || header[0] != "point_id" || header[1] != "node_path") {
    throw ParseError(1, "expected header 'point_id,node_path,f1,...'");
  }
  const std::size_t d = header.size() - 2;
  std::vector<DataPoint> points;
  std::size_t number = 1;
  std::set<PointId> seen;
  while (std::getline(in, line)) {
    ++number;
    if (io::trim(line).empty()) continue;
    const auto fields = io::split(io::trim(line));
    if (fields.size() != d + 2) throw ParseError(number, "expected " + std::to_string(d + 2) + " fields");
    DataPoint p;
    p.id = io::parse_uint(fields[0], number);
    if (!seen.insert(p.id).second) throw ParseError(number, "duplicate point id");
    p.owner = io::parse_path(fields[1], number);
    for (std::size_t k = 0; k < d; ++k) p.features.push_back(io::parse_double(fields[k + 2], number));
    points.push_back(std::move(p));
  }
  return points;
}

inline std::vector<DataPoint> read_points(const std::filesystem::path& source) {
  auto in = io::open_input(source);
  return read_points(in);
}

// ---------------------------------------------------------------------------
// hierarchy: node_path,parent_path,depth,point_count,mu_1..mu_d,sigma_1..sigma_d

inline void write_hierarchy(std::ostream& out, const Hierarchy& hierarchy) {
  const std::size_t d = hierarchy.params().d;
  out << "node_path,parent_path,depth,point_count";
  for (std::size_t k = 1; k <= d; ++k) out << ",mu_" << k;
  for (std::size_t k = 1; k <= d; ++k) out << ",sigma_" << k;
  out << '\n';
  // Map order is the depth-first pre-order.
  for (const auto& [path, node] : hierarchy.nodes()) {
    out << path.to_string() << ',' << (path.is_root() ? std::string() : path.parent().to_string()) << ','
        << path.depth() << ',' << node.point_ids.size();
    for (double m : node.distribution.means) out << ',' << io::format_double(m);
    for (double s : node.distribution.sigmas) out << ',' << io::format_double(s);
    out << '\n';
  }
}

inline void write_hierarchy(const std::filesystem::path& destination, const Hierarchy& hierarchy) {
  io::with_output(destination, [&](std::ostream& out) { write_hierarchy(out, hierarchy); });
}

/// Node rows as stored in a hierarchy file.
struct HierarchyFile {
  Hierarchy hierarchy;                          // params().d set from the header
  std::map<NodePath, std::size_t> point_counts; // as written in the file
};

/// Parses a hierarchy file and checks it is a closed tree in depth-first
/// order: every non-root row names an existing parent that appeared earlier.
inline HierarchyFile read_hierarchy(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const auto header = io::split(io::trim(line));
  if (header.size() < 6 || (header.size() - 4) % 2 != 0 || header[0] != "node_path" ||
      header[1] != "parent_path" || header[2] != "depth" || header[3] != "point_count") {
    throw ParseError(1, "expected header 'node_path,parent_path,depth,point_count,mu_*,sigma_*'");
  }
  const std::size_t d = (header.size() - 4) / 2;
  GeneratorParams params;
  params.d = d;
  HierarchyFile file{Hierarchy(params), {}};
  std::size_t number = 1;
  std::optional<NodePath> previous;
  while (std::getline(in, line)) {
    ++number;
    if (io::trim(line).empty()) continue;
    const auto fields = io::split(io::trim(line));
    if (fields.size() != header.size()) {
      throw ParseError(number, "expected " + std::to_string(header.size()) + " fields");
    }
    NodeState node;
    node.path = io::parse_path(fields[0], number);
    if (file.hierarchy.contains(node.path)) throw ConsistencyError("duplicate node " + node.path.to_string());
    if (previous && !(*previous < node.path)) {
      throw ConsistencyError("node " + node.path.to_string() + " is out of depth-first order");
    }
    if (node.path.is_root()) {
      if (!io::trim(fields[1]).empty()) throw ConsistencyError("root row has a parent");
    } else {
      const NodePath parent = io::parse_path(fields[1], number);
      if (parent != node.path.parent()) {
        throw ConsistencyError("node " + node.path.to_string() + " names the wrong parent");
      }
      if (!file.hierarchy.contains(parent)) {
        throw ConsistencyError("orphan node " + node.path.to_string() + ": parent row missing");
      }
    }
    if (io::parse_uint(fields[2], number) != node.path.depth()) {
      throw ConsistencyError("node " + node.path.to_string() + " has the wrong depth");
    }
    file.point_counts[node.path] = io::parse_uint(fields[3], number);
    for (std::size_t k = 0; k < d; ++k) node.distribution.means.push_back(io::parse_double(fields[4 + k], number));
    for (std::size_t k = 0; k < d; ++k) {
      const double s = io::parse_double(fields[4 + d + k], number);
      if (!(s > 0.0)) throw ConsistencyError("node " + node.path.to_string() + " has a non-positive sigma");
      node.distribution.sigmas.push_back(s);
    }
    previous = node.path;
    file.hierarchy.insert(std::move(node));
  }
  if (!file.hierarchy.contains(NodePath{})) throw ConsistencyError("hierarchy has no root row");
  return file;
}

inline HierarchyFile read_hierarchy(const std::filesystem::path& source) {
  auto in = io::open_input(source);
  return read_hierarchy(in);
}

/// Rebuilds a Dataset from a hierarchy file and a points file; throws
/// ConsistencyError when the two disagree.
inline Dataset load_dataset(HierarchyFile file, std::vector<DataPoint> points) {
  Dataset data{std::move(file.hierarchy), std::move(points)};
  const std::size_t d = data.hierarchy.params().d;
  std::sort(data.points.begin(), data.points.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const DataPoint& p : data.points) {
    if (p.features.size() != d) throw ConsistencyError("points and hierarchy dimensions differ");
    NodeState* owner = data.hierarchy.find(p.owner);
    if (owner == nullptr) {
      throw ConsistencyError("point " + std::to_string(p.id) + " references missing node " + p.owner.to_string());
    }
    owner->point_ids.push_back(p.id);
  }
  for (const auto& [path, node] : data.hierarchy.nodes()) {
    if (node.point_ids.size() != file.point_counts.at(path)) {
      throw ConsistencyError("node " + path.to_string() + " point_count disagrees with the points file");
    }
  }
  return data;
}

// ---------------------------------------------------------------------------
// batch summaries: metric,level_or_factor,set_label,mean,std

namespace io {

inline constexpr std::string_view kSummaryHeader = "metric,level_or_factor,set_label,mean,std";

inline void write_row(std::ostream& out, std::string_view metric, const std::string& key, const std::string& label,
                      const MeanStd& v) {
  out << metric << ',' << key << ',' << label << ',' << format_double(v.mean) << ',' << format_double(v.std)
      << '\n';
}

}  // namespace io

/// Rows for one labelled batch (no header).
inline void write_summary_rows(std::ostream& out, const std::string& label, const BatchSummary& s) {
  using io::write_row;
  write_row(out, "replicates", "", label, {static_cast<double>(s.replicates), 0.0});
  write_row(out, "N", "", label, s.node_count);
  write_row(out, "L", "", label, s.leaf_count);
  write_row(out, "D", "", label, s.depth);
  write_row(out, "B", "", label, s.breadth);
  write_row(out, "P", "", label, s.path_length);
  write_row(out, "point_depth", "", label, s.mean_point_depth);
  auto rows = [&](std::string_view metric, const std::vector<MeanStd>& values) {
    for (std::size_t level = 0; level < values.size(); ++level) {
      write_row(out, metric, std::to_string(level), label, values[level]);
    }
  };
  rows("instances", s.instances);
  rows("width", s.width);
  rows("leaves", s.leaves);
  rows("children_per_node", s.children_per_node);
  for (const auto& [factor, v] : s.branching) write_row(out, "branching", std::to_string(factor), label, v);
}

using SummaryTable = std::vector<std::pair<std::string, BatchSummary>>;

inline void write_histograms(std::ostream& out, const SummaryTable& table) {
  if (table.empty()) throw std::invalid_argument("write_histograms: empty batch");
  out << io::kSummaryHeader << '\n';
  for (const auto& [label, summary] : table) write_summary_rows(out, label, summary);
}

inline void write_histograms(const std::filesystem::path& destination, const SummaryTable& table) {
  io::with_output(destination, [&](std::ostream& out) { write_histograms(out, table); });
}

/// Parses a summary table back; labels keep their first-appearance order.
inline SummaryTable read_histograms(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || io::trim(line) != io::kSummaryHeader) {
    throw ParseError(1, "expected header '" + std::string(io::kSummaryHeader) + "'");
  }
  SummaryTable table;
  std::map<std::string, std::size_t> slot;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (io::trim(line).empty()) continue;
    const auto f = io::split(io::trim(line));
    if (f.size() != 5) throw ParseError(number, "expected 5 fields");
    const std::string label(f[2]);
    auto [it, added] = slot.try_emplace(label, table.size());
    if (added) table.emplace_back(label, BatchSummary{});
    BatchSummary& s = table[it->second].second;
    const MeanStd v{io::parse_double(f[3], number), io::parse_double(f[4], number)};
    const std::string_view metric = f[0];
    auto level_slot = [&](std::vector<MeanStd>& row) {
      const auto level = io::parse_uint(f[1], number);
      if (row.size() <= level) row.resize(level + 1);
      row[level] = v;
    };
    if (metric == "replicates") s.replicates = static_cast<std::size_t>(v.mean);
    else if (metric == "N") s.node_count = v;
    else if (metric == "L") s.leaf_count = v;
    else if (metric == "D") s.depth = v;
    else if (metric == "B") s.breadth = v;
    else if (metric == "P") s.path_length = v;
    else if (metric == "point_depth") s.mean_point_depth = v;
    else if (metric == "instances") level_slot(s.instances);
    else if (metric == "width") level_slot(s.width);
    else if (metric == "leaves") level_slot(s.leaves);
    else if (metric == "children_per_node") level_slot(s.children_per_node);
    else if (metric == "branching") s.branching[io::parse_uint(f[1], number)] = v;
    else throw ParseError(number, "unknown metric '" + std::string(metric) + "'");
  }
  return table;
}

inline SummaryTable read_histograms(const std::filesystem::path& source) {
  auto in = io::open_input(source);
  return read_histograms(in);
}

// ---------------------------------------------------------------------------
// parameter files: key=value per line, '#' starts a comment.
//
// Required: n, d. Defaults: alpha0=1, lambda=0.5, gamma=0.2, p=1, q=5,
// sigma_min=0.05, sigma_max=10, seed=0, max_depth=512.

inline GeneratorParams read_params(std::istream& in) {
  GeneratorParams params;
  bool have_n = false;
  bool have_d = false;
  std::set<std::string> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = io::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(number, "expected key=value");
    const std::string key(io::trim(text.substr(0, eq)));
    const std::string_view value = io::trim(text.substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError(number, "duplicate key '" + key + "'");
    if (key == "n") {
      params.n = io::parse_uint(value, number);
      have_n = true;
    } else if (key == "d") {
      params.d = io::parse_uint(value, number);
      have_d = true;
    } else if (key == "alpha0") params.alpha0 = io::parse_double(value, number);
    else if (key == "lambda") params.lambda = io::parse_double(value, number);
    else if (key == "gamma") params.gamma = io::parse_double(value, number);
    else if (key == "p") params.p = io::parse_double(value, number);
    else if (key == "q") params.q = io::parse_double(value, number);
    else if (key == "sigma_min") params.sigma_min = io::parse_double(value, number);
    else if (key == "sigma_max") params.sigma_max = io::parse_double(value, number);
    else if (key == "seed") params.seed = io::parse_uint(value, number);
    else if (key == "max_depth") params.max_depth = io::parse_uint(value, number);
    else throw ParseError(number, "unknown key '" + key + "'");
  }
  if (!have_n || !have_d) {
    std::string missing = !have_n && !have_d ? "n, d" : (!have_n ? "n" : "d");
    throw ParseError(number, "missing required key(s): " + missing);
  }
  validate(params);
  return params;
}

inline GeneratorParams read_params(const std::filesystem::path& source) {
  auto in = io::open_input(source);
  return read_params(in);
}

inline void write_params(std::ostream& out, const GeneratorParams& params) {
  out << "n=" << params.n << '\n'
      << "d=" << params.d << '\n'
      << "alpha0=" << io::format_double(params.alpha0) << '\n'
      << "lambda=" << io::format_double(params.lambda) << '\n'
      << "gamma=" << io::format_double(params.gamma) << '\n'
      << "p=" << io::format_double(params.p) << '\n'
      << "q=" << io::format_double(params.q) << '\n'
      << "sigma_min=" << io::format_double(params.sigma_min) << '\n'
      << "sigma_max=" << io::format_double(params.sigma_max) << '\n'
      << "seed=" << params.seed << '\n'
      << "max_depth=" << params.max_depth << '\n';
}

}  // namespace hiergen
