#include "heatlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "heatlab/rng.hpp"

namespace heatlab {

int& thread_count() {
  static int n = 1;
  return n;
}

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::euclidean_radial: return "euclidean_radial";
    case SpaceKind::broken_line: return "broken_line";
    case SpaceKind::lattice: return "lattice";
    case SpaceKind::tree: return "tree";
    case SpaceKind::bipartite: return "bipartite";
    case SpaceKind::custom_graph: return "custom_graph";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& s) {
  if (s == "euclidean_radial") return SpaceKind::euclidean_radial;
  if (s == "broken_line") return SpaceKind::broken_line;
  if (s == "lattice") return SpaceKind::lattice;
  if (s == "tree") return SpaceKind::tree;
  if (s == "bipartite") return SpaceKind::bipartite;
  if (s == "custom_graph") return SpaceKind::custom_graph;
  throw SpaceError("unsupported space kind: " + s);
}

bool Space::grid_backed() const {
  return spec_.kind == SpaceKind::euclidean_radial || spec_.kind == SpaceKind::broken_line;
}

namespace {

double radial_density(double alpha, double r2) { return std::pow(1.0 + r2, alpha / 2.0); }

bool in_broken_line(double x) {
  double n = std::round(x);
  return std::abs(x - n) <= 0.25 + 1e-12;
}

}  // namespace

Space Space::build(const SpaceSpec& spec) {
  Space s;
  s.spec_ = spec;
  switch (spec.kind) {
    case SpaceKind::euclidean_radial: {
      if (spec.dim < 1) throw SpaceError("euclidean_radial: dimension must be >= 1");
      if (spec.rho <= 0) throw SpaceError("non-positive resolution");
      if (spec.window <= 0) throw SpaceError("window radius must be positive");
      if (spec.rho > spec.window / 10.0) throw SpaceError("resolution too coarse for window");
      s.dim_ = spec.dim;
      // cell centers at (m + 1/2) rho, lexicographic order
      int half = static_cast<int>(std::floor(spec.window / spec.rho + 0.5));
      std::vector<double> axis;
      for (int m = -half; m < half; ++m) {
        double c = (m + 0.5) * spec.rho;
        if (std::abs(c) <= spec.window + 1e-12) axis.push_back(c);
      }
      if (axis.empty()) throw SpaceError("window too small to contain any point");
      double cell = std::pow(spec.rho, spec.dim);
      std::vector<int> idx(spec.dim, 0);
      std::vector<double> pt(spec.dim);
      while (true) {
        double r2 = 0;
        for (int k = 0; k < spec.dim; ++k) {
          pt[k] = axis[idx[k]];
          r2 += pt[k] * pt[k];
        }
        s.coords_.insert(s.coords_.end(), pt.begin(), pt.end());
        s.mass_.push_back(radial_density(spec.alpha, r2) * cell);
        int k = spec.dim - 1;
        while (k >= 0 && ++idx[k] == static_cast<int>(axis.size())) idx[k--] = 0;
        if (k < 0) break;
      }
      if (spec.dim >= 2) s.build_bucket_index();
      break;
    }
    case SpaceKind::broken_line: {
      if (spec.rho <= 0) throw SpaceError("non-positive resolution");
      if (spec.window <= 0) throw SpaceError("window radius must be positive");
      if (spec.rho > spec.window / 10.0) throw SpaceError("resolution too coarse for window");
      s.dim_ = 1;
      int half = static_cast<int>(std::floor(spec.window / spec.rho + 0.5));
      for (int m = -half; m < half; ++m) {
        double c = (m + 0.5) * spec.rho;
        if (std::abs(c) <= spec.window + 1e-12 && in_broken_line(c)) {
          s.coords_.push_back(c);
          s.mass_.push_back(spec.rho);
        }
      }
      if (s.mass_.empty()) throw SpaceError("window too small to contain any point");
      break;
    }
    case SpaceKind::lattice: {
      if (spec.side < 1) throw SpaceError("lattice side must be >= 1");
      if (spec.lattice_dim < 1) throw SpaceError("lattice dimension must be >= 1");
      s.dim_ = spec.lattice_dim;
      int n = 1;
      for (int k = 0; k < spec.lattice_dim; ++k) n *= spec.side;
      s.coords_.reserve(static_cast<size_t>(n) * spec.lattice_dim);
      std::vector<int> idx(spec.lattice_dim, 0);
      while (true) {
        for (int k = 0; k < spec.lattice_dim; ++k) s.coords_.push_back(idx[k]);
        s.mass_.push_back(1.0);
        int k = spec.lattice_dim - 1;
        while (k >= 0 && ++idx[k] == spec.side) idx[k--] = 0;
        if (k < 0) break;
      }
      break;
    }
    case SpaceKind::tree: {
      if (spec.degree < 3) throw SpaceError("tree degree must be >= 3");
      if (spec.depth < 1) throw SpaceError("tree depth must be >= 1");
      s.dim_ = 1;
      // BFS order, root = 0; root spawns `degree` children, inner vertices degree-1.
      s.adj_.push_back({});
      s.tree_level_.push_back(0);
      s.coords_.push_back(0);
      std::deque<int> frontier{0};
      while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        int level = s.tree_level_[v];
        if (level == spec.depth) continue;
        int nchild = (v == 0) ? spec.degree : spec.degree - 1;
        for (int c = 0; c < nchild; ++c) {
          int id = static_cast<int>(s.adj_.size());
          s.adj_.push_back({v});
          s.adj_[v].push_back(id);
          s.tree_level_.push_back(level + 1);
          s.coords_.push_back(id);
          frontier.push_back(id);
        }
      }
      s.mass_.assign(s.adj_.size(), 1.0);
      break;
    }
    case SpaceKind::bipartite: {
      if (spec.part_a < 1 || spec.part_b < 1) throw SpaceError("bipartite parts must be >= 1");
      s.dim_ = 1;
      int n = spec.part_a + spec.part_b;
      s.adj_.assign(n, {});
      for (int a = 0; a < spec.part_a; ++a)
        for (int b = 0; b < spec.part_b; ++b) {
          s.adj_[a].push_back(spec.part_a + b);
          s.adj_[spec.part_a + b].push_back(a);
        }
      for (int i = 0; i < n; ++i) s.coords_.push_back(i);
      s.mass_.assign(n, 1.0);
      break;
    }
    case SpaceKind::custom_graph: {
      if (spec.n_vertices < 1) throw SpaceError("custom_graph: need at least one vertex");
      s.dim_ = 1;
      s.adj_.assign(spec.n_vertices, {});
      for (auto [a, b] : spec.edge_list) {
        if (a < 0 || b < 0 || a >= spec.n_vertices || b >= spec.n_vertices || a == b)
          throw SpaceError("custom_graph: bad edge");
        s.adj_[a].push_back(b);
        s.adj_[b].push_back(a);
      }
      if (spec.vertex_weights.empty()) {
        s.mass_.assign(spec.n_vertices, 1.0);
      } else {
        if (static_cast<int>(spec.vertex_weights.size()) != spec.n_vertices)
          throw SpaceError("custom_graph: weight count mismatch");
        for (double w : spec.vertex_weights)
          if (!(w > 0)) throw SpaceError("custom_graph: non-positive vertex weight");
        s.mass_ = spec.vertex_weights;
      }
      for (int i = 0; i < spec.n_vertices; ++i) s.coords_.push_back(i);
      break;
    }
  }
  s.total_mass_ = std::accumulate(s.mass_.begin(), s.mass_.end(), 0.0);
  return s;
}

void Space::build_bucket_index() {
  bucket_lo_ = -spec_.window;
  bucket_cell_ = std::max(spec_.rho, (2 * spec_.window) / 64.0);
  int nb = static_cast<int>(std::ceil(2 * spec_.window / bucket_cell_)) + 1;
  bucket_dims_.assign(dim_, nb);
  size_t total = 1;
  for (int k = 0; k < dim_; ++k) total *= nb;
  buckets_.assign(total, {});
  for (int i = 0; i < size(); ++i) {
    size_t key = 0;
    for (int k = 0; k < dim_; ++k) {
      int b = static_cast<int>((coord(i, k) - bucket_lo_) / bucket_cell_);
      b = std::clamp(b, 0, nb - 1);
      key = key * nb + b;
    }
    buckets_[key].push_back(i);
  }
}

double Space::metric(int i, int j) const {
  switch (spec_.kind) {
    case SpaceKind::euclidean_radial:
    case SpaceKind::broken_line: {
      double s2 = 0;
      for (int k = 0; k < dim_; ++k) {
        double d = coord(i, k) - coord(j, k);
        s2 += d * d;
      }
      return std::sqrt(s2);
    }
    case SpaceKind::lattice: {
      double s = 0;
      for (int k = 0; k < dim_; ++k) s += std::abs(coord(i, k) - coord(j, k));
      return s;
    }
    default: {
      if (i == j) return 0.0;
      // hop metric by truncated BFS
      std::vector<int> dist(size(), -1);
      std::deque<int> q{i};
      dist[i] = 0;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : adj_[v]) {
          if (dist[w] < 0) {
            dist[w] = dist[v] + 1;
            if (w == j) return dist[w];
            q.push_back(w);
          }
        }
      }
      return std::numeric_limits<double>::infinity();
    }
  }
}

std::vector<double> Space::distances_from(int i) const {
  std::vector<double> out(size());
  if (!adj_.empty()) {
    std::vector<int> dist(size(), -1);
    std::deque<int> q{i};
    dist[i] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : adj_[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
    }
    for (int j = 0; j < size(); ++j)
      out[j] = dist[j] < 0 ? std::numeric_limits<double>::infinity() : dist[j];
  } else {
    for (int j = 0; j < size(); ++j) out[j] = metric(i, j);
  }
  return out;
}

double Space::margin(int i) const {
  switch (spec_.kind) {
    case SpaceKind::euclidean_radial: {
      double m = std::numeric_limits<double>::infinity();
      for (int k = 0; k < dim_; ++k) m = std::min(m, spec_.window - std::abs(coord(i, k)));
      return m;
    }
    case SpaceKind::broken_line:
      return spec_.window - std::abs(coord(i, 0));
    case SpaceKind::lattice: {
      double m = std::numeric_limits<double>::infinity();
      for (int k = 0; k < dim_; ++k)
        m = std::min(m, std::min(coord(i, k), spec_.side - 1 - coord(i, k)));
      return m;
    }
    case SpaceKind::tree:
      return spec_.depth - tree_level_[i];
    default:
      return std::numeric_limits<double>::infinity();
  }
}

bool Space::boundary_free() const {
  return spec_.kind == SpaceKind::bipartite || spec_.kind == SpaceKind::custom_graph;
}

double Space::diameter() const {
  switch (spec_.kind) {
    case SpaceKind::euclidean_radial:
      return 2.0 * spec_.window * std::sqrt(static_cast<double>(dim_));
    case SpaceKind::broken_line:
      return 2.0 * spec_.window;
    case SpaceKind::lattice:
      return static_cast<double>(dim_) * (spec_.side - 1);
    case SpaceKind::tree:
      return 2.0 * spec_.depth;
    default: {
      // exact eccentricity scan; graphs of this kind stay small
      double best = 0;
      for (int i = 0; i < size(); ++i) {
        auto d = distances_from(i);
        for (double v : d)
          if (std::isfinite(v)) best = std::max(best, v);
      }
      return best;
    }
  }
}

void Space::for_each_in_ball(int i, double r,
                             const std::function<void(int, double)>& fn) const {
  const double eps = 1e-12;
  switch (spec_.kind) {
    case SpaceKind::broken_line:
    case SpaceKind::euclidean_radial: {
      if (dim_ == 1) {
        // coords ascending by construction
        double x = coord(i, 0);
        auto lo = std::lower_bound(coords_.begin(), coords_.end(), x - r - eps);
        for (auto it = lo; it != coords_.end() && *it <= x + r + eps; ++it) {
          int j = static_cast<int>(it - coords_.begin());
          double d = std::abs(*it - x);
          if (d <= r + eps) fn(j, d);
        }
      } else {
        int nb = bucket_dims_[0];
        std::vector<int> blo(dim_), bhi(dim_);
        for (int k = 0; k < dim_; ++k) {
          blo[k] = std::clamp(
              static_cast<int>((coord(i, k) - r - bucket_lo_) / bucket_cell_), 0, nb - 1);
          bhi[k] = std::clamp(
              static_cast<int>((coord(i, k) + r - bucket_lo_) / bucket_cell_), 0, nb - 1);
        }
        std::vector<int> idx(blo);
        while (true) {
          size_t key = 0;
          for (int k = 0; k < dim_; ++k) key = key * nb + idx[k];
          for (int j : buckets_[key]) {
            double s2 = 0;
            for (int k = 0; k < dim_; ++k) {
              double d = coord(j, k) - coord(i, k);
              s2 += d * d;
            }
            double d = std::sqrt(s2);
            if (d <= r + eps) fn(j, d);
          }
          int k = dim_ - 1;
          while (k >= 0 && ++idx[k] > bhi[k]) idx[k--] = blo[k];
          if (k < 0) break;
        }
      }
      break;
    }
    case SpaceKind::lattice: {
      int rr = static_cast<int>(std::floor(r + eps));
      if (rr < 0) return;
      std::vector<int> c(dim_);
      for (int k = 0; k < dim_; ++k) c[k] = static_cast<int>(coord(i, k));
      // enumerate |offset|_1 <= rr recursively
      std::vector<int> off(dim_, 0);
      std::function<void(int, int)> rec = [&](int k, int budget) {
        if (k == dim_ - 1) {
          for (int o = -budget; o <= budget; ++o) {
            int v = c[k] + o;
            if (v < 0 || v >= spec_.side) continue;
            off[k] = o;
            long long j = 0;
            int dist = 0;
            for (int t = 0; t < dim_; ++t) {
              j = j * spec_.side + (c[t] + off[t]);
              dist += std::abs(off[t]);
            }
            fn(static_cast<int>(j), dist);
          }
          return;
        }
        for (int o = -budget; o <= budget; ++o) {
          int v = c[k] + o;
          if (v < 0 || v >= spec_.side) continue;
          off[k] = o;
          rec(k + 1, budget - std::abs(o));
        }
      };
      rec(0, rr);
      break;
    }
    default: {
      int rr = static_cast<int>(std::floor(r + eps));
      if (rr < 0) return;
      std::vector<int> dist(size(), -1);
      std::deque<int> q{i};
      dist[i] = 0;
      fn(i, 0);
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (dist[v] == rr) continue;
        for (int w : adj_[v])
          if (dist[w] < 0) {
            dist[w] = dist[v] + 1;
            fn(w, dist[w]);
            q.push_back(w);
          }
      }
      break;
    }
  }
}

std::vector<int> Space::ball(int i, double r) const {
  std::vector<int> out;
  for_each_in_ball(i, r, [&](int j, double) { out.push_back(j); });
  std::sort(out.begin(), out.end());
  return out;
}

int Space::nearest_point(const std::vector<double>& x) const {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) {
    double s = 0;
    for (int k = 0; k < dim_ && k < static_cast<int>(x.size()); ++k)
      s += (coord(i, k) - x[k]) * (coord(i, k) - x[k]);
    if (s < bd) {
      bd = s;
      best = i;
    }
  }
  return best;
}

double ball_volume(const Space& s, int x, double r, bool* truncated) {
  if (r < 0) throw SpaceError("ball_volume: negative radius");
  double v = 0;
  // accumulate in index order for bit-stable sums
  std::vector<std::pair<int, double>> hits;
  s.for_each_in_ball(x, r, [&](int j, double) { hits.emplace_back(j, s.mass(j)); });
  std::sort(hits.begin(), hits.end());
  for (auto& h : hits) v += h.second;
  if (truncated) *truncated = r > s.margin(x) + 1e-12;
  return v;
}

namespace {

// adaptive Simpson for the radial density
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fb, double fm, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, fm, flm, tol / 2, depth - 1) +
         simpson(f, m, b, fm, fb, frm, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a >= b) return 0.0;
  double m = 0.5 * (a + b);
  return simpson(f, a, b, f(a), f(b), f(m), tol, 48);
}

}  // namespace

double ball_volume_exact(const Space& s, double center, double r) {
  if (s.kind() == SpaceKind::euclidean_radial && s.dim() == 1) {
    double alpha = s.spec().alpha;
    auto dens = [alpha](double t) { return std::pow(1.0 + t * t, alpha / 2.0); };
    return integrate(dens, center - r, center + r, 1e-12);
  }
  if (s.kind() == SpaceKind::broken_line) {
    double lo = center - r, hi = center + r, len = 0;
    for (int n = static_cast<int>(std::floor(lo)) - 1; n <= static_cast<int>(std::ceil(hi)) + 1;
         ++n) {
      double a = std::max(lo, n - 0.25), b = std::min(hi, n + 0.25);
      if (b > a) len += b - a;
    }
    return len;
  }
  throw SpaceError("exact ball volume: only 1-D continuous kinds");
}

VolumeProfile volume_profile(const Space& s, int center, const std::vector<double>& radii) {
  VolumeProfile p;
  p.center = center;
  p.radii = radii;
  for (double r : radii) {
    bool tr = false;
    p.volumes.push_back(ball_volume(s, center, r, &tr));
    p.truncated.push_back(tr);
  }
  for (size_t i = 1; i < p.volumes.size(); ++i)
    if (p.radii[i] < p.radii[i - 1]) throw SpaceError("volume_profile: radii must increase");
  return p;
}

DoublingProfile doubling_profile(const Space& s, const std::vector<int>& centers,
                                 const std::vector<double>& radii) {
  if (centers.empty()) throw SpaceError("doubling_profile: empty centers list");
  DoublingProfile out;
  double cb = 0;
  for (double r : radii) {
    DoublingRow row;
    row.r = r;
    for (int x : centers) {
      bool tr = false;
      double v1 = ball_volume(s, x, r, &tr);
      bool tr2 = false;
      double v2 = ball_volume(s, x, 2 * r, &tr2);
      if (2 * r > s.margin(x) + 1e-12) row.truncated = true;
      if (v1 > 0 && v2 / v1 > row.cd) {
        row.cd = v2 / v1;
        row.argmax = x;
      }
    }
    cb = std::max(cb, row.cd);
    out.rows.push_back(row);
  }
  out.delta_hat = cb > 0 ? std::log2(cb) : 0.0;
  // e-vd1 consistency: V(x,r)/V(x,s) <= C_b (r/s)^delta for delta >= log2 C_b
  double viol = -std::numeric_limits<double>::infinity();
  for (int x : centers)
    for (size_t i = 0; i < radii.size(); ++i)
      for (size_t j = 0; j < i; ++j) {
        double vr = ball_volume(s, x, radii[i]);
        double vs = ball_volume(s, x, radii[j]);
        if (vs <= 0) continue;
        double bound = cb * std::pow(radii[i] / radii[j], out.delta_hat);
        viol = std::max(viol, vr / vs - bound);
      }
  out.evd1_max_violation = viol;
  // growth of C_D(r) itself
  if (out.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (auto& row : out.rows) {
      if (row.cd <= 0) continue;
      double lx = std::log2(row.r), ly = std::log2(row.cd);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    if (n >= 2 && n * sxx - sx * sx > 1e-15)
      out.cd_loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

ReverseDoublingFit reverse_doubling(const Space& s, const std::vector<int>& centers,
                                    const std::vector<double>& radii, double b) {
  if (radii.size() < 3) throw SpaceError("reverse_doubling: need at least 3 radii");
  if (centers.empty()) throw SpaceError("reverse_doubling: empty centers list");
  double rmin = *std::min_element(radii.begin(), radii.end());
  double rmax = *std::max_element(radii.begin(), radii.end());
  if (b > rmin + 1e-12 || rmax > s.diameter() / 5.0 + 1e-12)
    throw SpaceError("reverse_doubling: radii outside [b, diam/5]");
  ReverseDoublingFit fit;
  fit.gamma_hat = std::numeric_limits<double>::infinity();
  for (int x : centers) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double r : radii) {
      double v = ball_volume(s, x, r);
      if (v <= 0) continue;
      double lx = std::log(r), ly = std::log(v);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    if (n < 3) continue;
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.gamma_hat = std::min(fit.gamma_hat, slope);
  }
  if (!std::isfinite(fit.gamma_hat)) throw SpaceError("reverse_doubling: degenerate volumes");
  double c = std::numeric_limits<double>::infinity();
  for (int x : centers)
    for (size_t i = 0; i < radii.size(); ++i)
      for (size_t j = 0; j < i; ++j) {
        double vr = ball_volume(s, x, radii[i]);
        double vs = ball_volume(s, x, radii[j]);
        if (vs <= 0) continue;
        double ratio = (vr / vs) / std::pow(radii[i] / radii[j], fit.gamma_hat);
        c = std::min(c, ratio);
      }
  fit.c_hat = c;
  return fit;
}

VdInfVerdict vd_inf_verdict(const DoublingProfile& dp, const ReverseDoublingFit& rd) {
  VdInfVerdict v;
  double cd_max = 0;
  for (auto& row : dp.rows) cd_max = std::max(cd_max, row.cd);
  if (rd.gamma_hat <= 0.1) {
    v.verdict = Verdict::FAIL;
    v.reason = "reverse-doubling exponent degenerates (bounded volume)";
  } else if (dp.cd_loglog_slope >= 0.5 && cd_max >= 3.5) {
    v.verdict = Verdict::FAIL;
    v.reason = "doubling ratio grows with r (super-polynomial volume)";
  } else {
    v.verdict = Verdict::PASS;
    v.reason = "doubling ratio bounded and volume growth polynomial";
  }
  return v;
}

double metric_axiom_violation(const Space& s, int trials, uint64_t seed) {
  Rng rng(seed);
  double worst = 0;
  int n = s.size();
  for (int t = 0; t < trials; ++t) {
    int i = static_cast<int>(rng.below(n));
    int j = static_cast<int>(rng.below(n));
    int k = static_cast<int>(rng.below(n));
    double dij = s.metric(i, j), dji = s.metric(j, i);
    double dik = s.metric(i, k), dkj = s.metric(k, j);
    worst = std::max(worst, std::abs(dij - dji));
    worst = std::max(worst, s.metric(i, i));
    if (std::isfinite(dik) && std::isfinite(dkj))
      worst = std::max(worst, dij - (dik + dkj));
  }
  return worst;
}

}  // namespace heatlab
