#include "heatlab/net.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "heatlab/rng.hpp"

namespace heatlab {

std::vector<double> Net::dg_from(int local) const {
  std::vector<double> dist(size(), std::numeric_limits<double>::infinity());
  std::deque<int> q{local};
  dist[local] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : adj[v])
      if (!std::isfinite(dist[w])) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

std::shared_ptr<Space> Net::as_space() const {
  SpaceSpec spec;
  spec.kind = SpaceKind::custom_graph;
  spec.n_vertices = size();
  spec.vertex_weights = m;
  spec.edge_list = edges;
  return std::make_shared<Space>(Space::build(spec));
}

Net build_net(std::shared_ptr<const Space> parent, double eps) {
  if (eps <= 0) throw NetError("build_net: eps must be positive");
  if (parent->size() == 0) throw NetError("build_net: empty space");
  if (parent->grid_backed() && eps < 2 * parent->rho())
    throw NetError("build_net: eps below grid resolution");
  Net net;
  net.parent = parent;
  net.eps = eps;
  int n = parent->size();
  std::vector<char> admitted(n, 0);
  // greedy in deterministic index order: admit iff > eps from all admitted
  for (int p = 0; p < n; ++p) {
    bool ok = true;
    parent->for_each_in_ball(p, eps, [&](int j, double) {
      if (admitted[j]) ok = false;
    });
    if (ok) {
      admitted[p] = 1;
      net.vertices.push_back(p);
    }
  }
  std::vector<int> parent2local(n, -1);
  for (int i = 0; i < net.size(); ++i) parent2local[net.vertices[i]] = i;
  net.adj.assign(net.size(), {});
  for (int i = 0; i < net.size(); ++i) {
    parent->for_each_in_ball(net.vertices[i], 3 * eps, [&](int j, double d) {
      int lj = parent2local[j];
      if (lj > i && d > 0) {
        net.edges.emplace_back(i, lj);
        net.adj[i].push_back(lj);
        net.adj[lj].push_back(i);
      }
    });
  }
  for (auto& a : net.adj) std::sort(a.begin(), a.end());
  std::sort(net.edges.begin(), net.edges.end());
  net.m.resize(net.size());
  for (int i = 0; i < net.size(); ++i) {
    net.m[i] = ball_volume(*parent, net.vertices[i], eps);
    if (net.m[i] <= 0) throw NetError("build_net: vertex with zero weight");
  }
  return net;
}

NetAudit audit_net(const Net& net, int probe_pairs, double delta, uint64_t seed) {
  const Space& par = *net.parent;
  NetAudit a;
  int nv = net.size();
  // exact separation and edge rule
  std::vector<int> parent2local(par.size(), -1);
  for (int i = 0; i < nv; ++i) parent2local[net.vertices[i]] = i;
  for (int i = 0; i < nv; ++i) {
    std::vector<char> is_edge(nv, 0);
    for (int j : net.adj[i]) is_edge[j] = 1;
    par.for_each_in_ball(net.vertices[i], 3 * net.eps, [&](int p, double d) {
      int lj = parent2local[p];
      if (lj < 0 || lj == i) return;
      if (d <= net.eps + 1e-12) a.separated = false;
      if (!is_edge[lj]) a.edge_rule = false;
    });
    for (int j : net.adj[i])
      if (par.metric(net.vertices[i], net.vertices[j]) > 3 * net.eps + 1e-12)
        a.edge_rule = false;
    a.max_degree = std::max(a.max_degree, static_cast<int>(net.adj[i].size()));
  }
  // exact covering + overlap over all parent points
  std::vector<int> cover_count(par.size(), 0);
  std::vector<int> overlap_count(par.size(), 0);
  for (int i = 0; i < nv; ++i) {
    par.for_each_in_ball(net.vertices[i], net.eps,
                         [&](int p, double) { cover_count[p] += 1; });
    par.for_each_in_ball(net.vertices[i], delta,
                         [&](int p, double) { overlap_count[p] += 1; });
  }
  for (int p = 0; p < par.size(); ++p) {
    if (cover_count[p] == 0) a.covering = false;
    a.overlap = std::max(a.overlap, overlap_count[p]);
  }
  // connectivity + metric comparison
  auto d0 = net.dg_from(0);
  a.connected = std::all_of(d0.begin(), d0.end(), [](double v) { return std::isfinite(v); });
  a.lower_const = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  // all edge endpoints plus random pairs; reuse one BFS per source
  std::vector<std::pair<int, int>> pairs;
  for (auto& e : net.edges) pairs.push_back(e);
  for (int t = 0; t < probe_pairs; ++t)
    pairs.emplace_back(static_cast<int>(rng.below(nv)), static_cast<int>(rng.below(nv)));
  std::sort(pairs.begin(), pairs.end());
  int cur = -1;
  std::vector<double> dist;
  for (auto& [i, j] : pairs) {
    if (i == j) continue;
    if (i != cur) {
      dist = net.dg_from(i);
      cur = i;
    }
    if (!std::isfinite(dist[j])) continue;
    double d = par.metric(net.vertices[i], net.vertices[j]);
    if (d > 0) a.lower_const = std::min(a.lower_const, 3 * net.eps * dist[j] / d);
    a.a_hat = std::max(a.a_hat, dist[j] / (d + 1.0));
  }
  if (!std::isfinite(a.lower_const)) a.lower_const = 1.0;  // single-vertex net
  return a;
}

ChainResult find_chain(const Space& s, double b, int x, int y) {
  if (b <= 0) throw NetError("find_chain: b must be positive");
  ChainResult res;
  if (x == y) {
    res.found = true;
    res.points = {x};
    return res;
  }
  std::vector<int> prev(s.size(), -2);
  std::deque<int> q{x};
  prev[x] = -1;
  bool reached = false;
  while (!q.empty() && !reached) {
    int v = q.front();
    q.pop_front();
    s.for_each_in_ball(v, b, [&](int w, double d) {
      if (d > 0 && prev[w] == -2) {
        prev[w] = v;
        if (w == y) reached = true;
        q.push_back(w);
      }
    });
  }
  if (prev[y] == -2) return res;  // NoChain: different b-components
  res.found = true;
  for (int v = y; v != -1; v = prev[v]) res.points.push_back(v);
  std::reverse(res.points.begin(), res.points.end());
  res.hops = static_cast<int>(res.points.size()) - 1;
  for (size_t i = 0; i + 1 < res.points.size(); ++i)
    res.length += s.metric(res.points[i], res.points[i + 1]);
  double dxy = s.metric(x, y);
  res.ratio = dxy > 0 ? res.hops * b / dxy : 0.0;
  return res;
}

std::vector<double> to_net(const Net& net, const std::vector<double>& g) {
  const Space& par = *net.parent;
  std::vector<double> out(net.size(), 0.0);
  for (int i = 0; i < net.size(); ++i) {
    std::vector<std::pair<int, double>> hits;
    par.for_each_in_ball(net.vertices[i], net.eps,
                         [&](int p, double) { hits.emplace_back(p, g[p] * par.mass(p)); });
    std::sort(hits.begin(), hits.end());
    double acc = 0;
    for (auto& h : hits) acc += h.second;
    out[i] = acc / net.m[i];
  }
  return out;
}

std::vector<double> from_net(const Net& net, const std::vector<double>& f) {
  const Space& par = *net.parent;
  std::vector<double> num(par.size(), 0.0);
  std::vector<double> den(par.size(), 0.0);
  for (int i = 0; i < net.size(); ++i)
    par.for_each_in_ball(net.vertices[i], net.eps, [&](int p, double) {
      num[p] += f[i];
      den[p] += 1.0;
    });
  std::vector<double> out(par.size());
  for (int p = 0; p < par.size(); ++p) {
    if (den[p] == 0.0)
      throw NetError("from_net: uncovered parent point (net maximality violated)");
    out[p] = num[p] / den[p];
  }
  return out;
}

QiAudit audit_quasi_isometry(const std::vector<int>& map, const Space& s1, const Space& s2,
                             double epsilon_surj, int sample_pairs, uint64_t seed) {
  if (static_cast<int>(map.size()) != s1.size())
    throw NetError("audit_quasi_isometry: map size mismatch");
  QiAudit audit;
  Rng rng(seed);
  std::vector<std::pair<double, double>> dd;  // (d1, d2)
  long long full = static_cast<long long>(s1.size()) * (s1.size() - 1) / 2;
  if (full <= sample_pairs) {
    for (int i = 0; i < s1.size(); ++i)
      for (int j = i + 1; j < s1.size(); ++j)
        dd.emplace_back(s1.metric(i, j), s2.metric(map[i], map[j]));
  } else {
    for (int t = 0; t < sample_pairs; ++t) {
      int i = static_cast<int>(rng.below(s1.size()));
      int j = static_cast<int>(rng.below(s1.size()));
      if (i == j) continue;
      dd.emplace_back(s1.metric(i, j), s2.metric(map[i], map[j]));
    }
  }
  // choose (a, b) minimizing a + b over a geometric grid of a;
  // b(a) = max violation of a^-1 d1 - b <= d2 <= a d1 + b
  auto b_of = [&](double a) {
    double b = 0;
    for (auto& [d1, d2] : dd) {
      b = std::max(b, d2 - a * d1);
      b = std::max(b, d1 / a - d2);
    }
    return b;
  };
  double best_a = 1.0, best_b = b_of(1.0);
  for (double a = 1.0; a <= 64.0; a *= 1.05) {
    double b = b_of(a);
    if (a + b < best_a + best_b - 1e-12) {
      best_a = a;
      best_b = b;
    }
  }
  audit.a_hat = best_a;
  audit.b_hat = best_b;
  // eps-surjectivity
  std::vector<char> hit(s2.size(), 0);
  for (int v : map) hit[v] = 1;
  for (int y = 0; y < s2.size(); ++y) {
    bool near = false;
    s2.for_each_in_ball(y, epsilon_surj, [&](int z, double) {
      if (hit[z]) near = true;
    });
    if (!near) {
      audit.surjective = false;
      audit.witness = y;
      break;
    }
  }
  // unit-ball volume comparability
  double c = 1.0;
  for (int i = 0; i < s1.size(); ++i) {
    double v1 = ball_volume(s1, i, 1.0);
    double v2 = ball_volume(s2, map[i], 1.0);
    if (v1 > 0 && v2 > 0) c = std::max({c, v1 / v2, v2 / v1});
  }
  audit.c_hat = c;
  return audit;
}

}  // namespace heatlab
