#include "heatlab/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace heatlab {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw IoError("parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace

SpaceSpec read_graph_file(std::istream& in) {
  SpaceSpec spec;
  spec.kind = SpaceKind::custom_graph;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  long long nv = 0, ne = 0, seen_e = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (!have_header) {
      if (tag != "graph") parse_fail(lineno, "expected 'graph <nv> <ne>' header");
      if (!(ss >> nv >> ne) || nv < 1 || ne < 0) parse_fail(lineno, "bad graph header");
      spec.n_vertices = static_cast<int>(nv);
      spec.vertex_weights.assign(nv, 1.0);
      have_header = true;
      continue;
    }
    if (tag == "v") {
      long long id;
      double w;
      if (!(ss >> id >> w)) parse_fail(lineno, "bad vertex line");
      if (id < 0 || id >= nv) parse_fail(lineno, "vertex id out of range");
      if (!(w > 0)) parse_fail(lineno, "non-positive vertex weight");
      spec.vertex_weights[id] = w;
    } else if (tag == "e") {
      long long a, b;
      if (!(ss >> a >> b)) parse_fail(lineno, "bad edge line");
      if (a < 0 || b < 0 || a >= nv || b >= nv) parse_fail(lineno, "edge id out of range");
      if (a == b) parse_fail(lineno, "self-loop edge");
      spec.edge_list.emplace_back(static_cast<int>(a), static_cast<int>(b));
      ++seen_e;
    } else {
      parse_fail(lineno, "unknown record '" + tag + "'");
    }
  }
  if (!have_header) parse_fail(lineno, "missing graph header");
  if (seen_e != ne) parse_fail(lineno, "edge count mismatch with header");
  return spec;
}

SpaceSpec read_graph_file_path(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return read_graph_file(f);
}

void write_graph_file(std::ostream& out, const Space& s) {
  if (s.adjacency().empty()) throw IoError("write_graph_file: graph kinds only");
  long long ne = 0;
  for (int i = 0; i < s.size(); ++i)
    for (int j : s.adjacency()[i])
      if (j > i) ++ne;
  out << "graph " << s.size() << " " << ne << "\n";
  char buf[64];
  for (int i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s.mass(i));
    out << "v " << i << " " << buf << "\n";
  }
  for (int i = 0; i < s.size(); ++i)
    for (int j : s.adjacency()[i])
      if (j > i) out << "e " << i << " " << j << "\n";
}

void write_net_file(std::ostream& out, const Net& net) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", net.eps);
  out << "# eps " << buf << "\n";
  long long ne = static_cast<long long>(net.edges.size());
  out << "graph " << net.size() << " " << ne << "\n";
  for (int i = 0; i < net.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", net.m[i]);
    out << "v " << i << " " << buf << "\n";
  }
  for (auto& [a, b] : net.edges) out << "e " << a << " " << b << "\n";
}

void write_kernel_file(std::ostream& out, const Kernel& k) {
  long long nnz = 0;
  for (int i = 0; i < k.size(); ++i)
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
      if (k.col[t] >= i) ++nnz;
  out << "kernel " << k.size() << " " << nnz << "\n";
  char buf[64];
  for (int i = 0; i < k.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", k.m[i]);
    out << "m " << i << " " << buf << "\n";
  }
  for (int i = 0; i < k.size(); ++i)
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
      if (k.col[t] >= i) {
        std::snprintf(buf, sizeof buf, "%.17g", k.val[t]);
        out << "p " << i << " " << k.col[t] << " " << buf << "\n";
      }
}

KernelDump read_kernel_file(std::istream& in) {
  KernelDump d;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  long long nnz = 0, seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (!have_header) {
      if (tag != "kernel") parse_fail(lineno, "expected 'kernel <n> <nnz>' header");
      long long n;
      if (!(ss >> n >> nnz) || n < 1 || nnz < 0) parse_fail(lineno, "bad kernel header");
      d.n = static_cast<int>(n);
      d.m.assign(n, 0.0);
      have_header = true;
      continue;
    }
    if (tag == "m") {
      long long id;
      double v;
      if (!(ss >> id >> v)) parse_fail(lineno, "bad measure line");
      if (id < 0 || id >= d.n) parse_fail(lineno, "measure id out of range");
      if (!(v > 0)) parse_fail(lineno, "non-positive measure");
      d.m[id] = v;
    } else if (tag == "p") {
      long long a, b;
      double v;
      if (!(ss >> a >> b >> v)) parse_fail(lineno, "bad kernel entry");
      if (a < 0 || b < 0 || a >= d.n || b >= d.n) parse_fail(lineno, "entry id out of range");
      if (a > b) parse_fail(lineno, "kernel entries must have id1 <= id2");
      if (v < 0) parse_fail(lineno, "negative kernel entry");
      d.entries.emplace_back(static_cast<int>(a), static_cast<int>(b), v);
      ++seen;
    } else {
      parse_fail(lineno, "unknown record '" + tag + "'");
    }
  }
  if (!have_header) parse_fail(lineno, "missing kernel header");
  if (seen != nnz) parse_fail(lineno, "entry count mismatch with header");
  for (double v : d.m)
    if (!(v > 0)) throw IoError("kernel file: missing measure entries");
  return d;
}

KernelDump read_kernel_file_path(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return read_kernel_file(f);
}

Kernel kernel_from_dump(const KernelDump& dump, std::shared_ptr<const Space> space,
                        double h, double hp) {
  if (space->size() != dump.n) throw IoError("kernel_from_dump: size mismatch with space");
  Kernel k;
  k.space = std::move(space);
  k.m = dump.m;
  k.h = h;
  k.hp = hp;
  std::vector<std::vector<std::pair<int, double>>> rows(dump.n);
  for (auto& [a, b, v] : dump.entries) {
    rows[a].emplace_back(b, v);
    if (a != b) rows[b].emplace_back(a, v);
  }
  k.row_ptr.assign(dump.n + 1, 0);
  for (int i = 0; i < dump.n; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    k.row_ptr[i + 1] = k.row_ptr[i] + static_cast<int>(rows[i].size());
  }
  double supr = 0;
  for (int i = 0; i < dump.n; ++i)
    for (auto& [j, v] : rows[i]) {
      k.col.push_back(j);
      k.val.push_back(v);
      if (v > 0) supr = std::max(supr, k.space->metric(i, j));
    }
  k.support_radius = supr;
  k.boundary_row.assign(dump.n, 0);
  for (int i = 0; i < dump.n; ++i) {
    if (k.space->margin(i) < hp - 1e-12) k.boundary_row[i] = 1;
    double rowsum = 0;
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
      rowsum += k.val[t] * k.m[k.col[t]];
    if (std::abs(rowsum - 1.0) > 1e-12) k.boundary_row[i] = 1;
  }
  return k;
}

Kernel kernel_from_dump(const KernelDump& dump, double h, double hp) {
  // fall back to the dump's own support graph; hop metric
  SpaceSpec spec;
  spec.kind = SpaceKind::custom_graph;
  spec.n_vertices = dump.n;
  spec.vertex_weights.assign(dump.n, 1.0);
  for (auto& [a, b, v] : dump.entries)
    if (a != b && v > 0) spec.edge_list.emplace_back(a, b);
  auto sp = std::make_shared<Space>(Space::build(spec));
  return kernel_from_dump(dump, sp, h, hp);
}

}  // namespace heatlab
