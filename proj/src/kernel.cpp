#include "heatlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace heatlab {

Budget& budget() {
  static Budget b;
  return b;
}

void Kernel::apply(const double* f, double* out) const {
  budget().charge(nnz());
  int n = size();
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int t = row_ptr[i]; t < row_ptr[i + 1]; ++t) acc += val[t] * f[col[t]] * m[col[t]];
    out[i] = acc;
  }
}

std::vector<double> Kernel::apply(const std::vector<double>& f) const {
  std::vector<double> out(f.size());
  apply(f.data(), out.data());
  return out;
}

double Kernel::entry(int i, int j) const {
  for (int t = row_ptr[i]; t < row_ptr[i + 1]; ++t)
    if (col[t] == j) return val[t];
  return 0.0;
}

std::vector<double> Kernel::row_density(int x) const {
  std::vector<double> out(size(), 0.0);
  for (int t = row_ptr[x]; t < row_ptr[x + 1]; ++t) out[col[t]] = val[t];
  return out;
}

double Kernel::vol_m(int x, double r) const {
  std::vector<std::pair<int, double>> hits;
  space->for_each_in_ball(x, r, [&](int j, double) { hits.emplace_back(j, m[j]); });
  std::sort(hits.begin(), hits.end());
  double v = 0;
  for (auto& h2 : hits) v += h2.second;
  return v;
}

void Kernel::validate() const {
  int n = size();
  for (int i = 0; i < n; ++i) {
    double rowsum = 0;
    for (int t = row_ptr[i]; t < row_ptr[i + 1]; ++t) {
      if (val[t] < 0) throw KernelError("negative kernel entry");
      if (std::abs(entry(col[t], i) - val[t]) != 0.0)
        throw KernelError("kernel symmetry violated");
      rowsum += val[t] * m[col[t]];
    }
    if (!boundary_row[i] && std::abs(rowsum - 1.0) > 1e-12)
      throw KernelError("interior row not stochastic");
    if (boundary_row[i] && rowsum > 1.0 + 1e-12)
      throw KernelError("row sum exceeds 1");
  }
}

namespace {

struct Builder {
  int n;
  std::vector<std::vector<std::pair<int, double>>> rows;
  explicit Builder(int n_) : n(n_), rows(n_) {}
  void add(int i, int j, double v) { rows[i].emplace_back(j, v); }
  void finish(Kernel& k) {
    k.row_ptr.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
      std::sort(rows[i].begin(), rows[i].end());
      k.row_ptr[i + 1] = k.row_ptr[i] + static_cast<int>(rows[i].size());
    }
    k.col.reserve(k.row_ptr[n]);
    k.val.reserve(k.row_ptr[n]);
    for (int i = 0; i < n; ++i)
      for (auto& [j, v] : rows[i]) {
        k.col.push_back(j);
        k.val.push_back(v);
      }
  }
};

void flag_boundary(Kernel& k) {
  int n = k.size();
  k.boundary_row.assign(n, 0);
  for (int i = 0; i < n; ++i)
    if (k.space->margin(i) < k.hp - 1e-12) k.boundary_row[i] = 1;
}

}  // namespace

Kernel ball_walk(std::shared_ptr<const Space> s, double h) {
  if (s->grid_backed() && h < 2 * s->rho())
    throw KernelError("ball_walk: h below 2*rho resolution");
  if (h <= 0) throw KernelError("ball_walk: h must be positive");
  int n = s->size();
  std::vector<double> vol(n);
  for (int i = 0; i < n; ++i) {
    vol[i] = ball_volume(*s, i, h);
    if (vol[i] <= 0) throw KernelError("ball_walk: empty ball");
  }
  Kernel k;
  k.space = s;
  k.h = h;
  k.hp = h;
  k.support_radius = h;
  k.m.resize(n);
  for (int i = 0; i < n; ++i) k.m[i] = vol[i] * s->mass(i);
  Builder b(n);
  for (int i = 0; i < n; ++i)
    s->for_each_in_ball(i, h, [&](int j, double) { b.add(i, j, 1.0 / (vol[i] * vol[j])); });
  b.finish(k);
  flag_boundary(k);
  return k;
}

Kernel srw(std::shared_ptr<const Space> s) {
  if (s->adjacency().empty() && s->kind() != SpaceKind::lattice)
    throw KernelError("srw: graph kind required");
  int n = s->size();
  // neighbour mass at distance exactly 1 (the punctured unit ball)
  std::vector<double> deg(n, 0.0);
  for (int i = 0; i < n; ++i) {
    s->for_each_in_ball(i, 1.0, [&](int j, double d) {
      if (d > 0) deg[i] += s->mass(j);
    });
    if (deg[i] == 0) throw KernelError("srw: isolated vertex");
  }
  // connectivity
  {
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      s->for_each_in_ball(v, 1.0, [&](int w, double d) {
        if (d > 0 && !seen[w]) {
          seen[w] = 1;
          ++cnt;
          q.push_back(w);
        }
      });
    }
    if (cnt != n) throw KernelError("srw: graph not connected");
  }
  Kernel k;
  k.space = s;
  k.h = 1.0;
  k.hp = 1.0;
  k.support_radius = 1.0;
  k.m.resize(n);
  for (int i = 0; i < n; ++i) k.m[i] = deg[i] * s->mass(i);
  Builder b(n);
  for (int i = 0; i < n; ++i)
    s->for_each_in_ball(i, 1.0, [&](int j, double d) {
      if (d > 0) b.add(i, j, 1.0 / (deg[i] * deg[j]));
    });
  b.finish(k);
  flag_boundary(k);
  return k;
}

Kernel annulus_walk(std::shared_ptr<const Space> s, double h, double h1, double h2) {
  if (!(0 < h1 && h1 < h2)) throw KernelError("annulus_walk: need 0 < h1 < h2");
  int n = s->size();
  std::vector<double> avol(n, 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> hits;
    s->for_each_in_ball(i, h2, [&](int j, double d) {
      if (d > h1 + 1e-12) hits.emplace_back(j, s->mass(j));
    });
    std::sort(hits.begin(), hits.end());
    for (auto& p : hits) avol[i] += p.second;
    if (avol[i] <= 0 && s->margin(i) >= h2)
      throw KernelError("annulus_walk: empty annulus at interior point");
    if (avol[i] <= 0) avol[i] = 1.0;  // fully truncated boundary row; no entries emitted
  }
  Kernel k;
  k.space = s;
  k.h = h;
  k.hp = h2;
  k.support_radius = h2;
  k.m.resize(n);
  for (int i = 0; i < n; ++i) k.m[i] = avol[i] * s->mass(i);
  Builder b(n);
  for (int i = 0; i < n; ++i)
    s->for_each_in_ball(i, h2, [&](int j, double d) {
      if (d > h1 + 1e-12) b.add(i, j, 1.0 / (avol[i] * avol[j]));
    });
  b.finish(k);
  flag_boundary(k);
  return k;
}

Kernel lazy(const Kernel& k) {
  Kernel out;
  out.space = k.space;
  out.m = k.m;
  out.h = k.h;
  out.hp = k.hp;
  out.support_radius = k.support_radius;
  int n = k.size();
  Builder b(n);
  for (int i = 0; i < n; ++i) {
    bool saw_diag = false;
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) {
      double v = k.val[t] / 2.0;
      if (k.col[t] == i) {
        v += 1.0 / (2.0 * k.m[i]);
        saw_diag = true;
      }
      b.add(i, k.col[t], v);
    }
    if (!saw_diag) b.add(i, i, 1.0 / (2.0 * k.m[i]));
  }
  b.finish(out);
  out.boundary_row = k.boundary_row;
  return out;
}

RowResult iterate(const Kernel& k, int steps, int x) {
  if (steps < 1) throw KernelError("iterate: steps must be >= 1");
  RowResult r;
  r.density = k.row_density(x);
  auto touches = [&](const std::vector<double>& v) {
    for (int i = 0; i < k.size(); ++i)
      if (v[i] != 0.0 && k.boundary_row[i]) return true;
    return false;
  };
  r.truncated = k.boundary_row[x] || touches(r.density);
  std::vector<double> tmp(k.size());
  for (int s = 1; s < steps; ++s) {
    k.apply(r.density.data(), tmp.data());
    r.density.swap(tmp);
    if (!r.truncated && touches(r.density)) r.truncated = true;
  }
  double tot = 0;
  for (int i = 0; i < k.size(); ++i) tot += r.density[i] * k.m[i];
  r.mass_deficit = 1.0 - tot;
  return r;
}

RowResult hk_row(const Kernel& k, int steps, int x) {
  if (steps < 0) throw KernelError("hk_row: steps must be >= 0");
  RowResult r = iterate(k, 2, x);  // p_2 row
  std::vector<double> tmp(k.size());
  for (int s = 0; s < steps; ++s) {
    k.apply(r.density.data(), tmp.data());
    for (int i = 0; i < k.size(); ++i) r.density[i] = 0.5 * (r.density[i] + tmp[i]);
  }
  double tot = 0;
  for (int i = 0; i < k.size(); ++i) tot += r.density[i] * k.m[i];
  r.mass_deficit = 1.0 - tot;
  return r;
}

// --- Dirichlet ---------------------------------------------------------------

void DirichletKernel::apply(const double* f, double* out) const {
  budget().charge(static_cast<long long>(val.size()));
  int n = size();
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int t = row_ptr[i]; t < row_ptr[i + 1]; ++t) acc += val[t] * f[col[t]] * m[col[t]];
    out[i] = acc;
  }
}

std::vector<double> DirichletKernel::apply(const std::vector<double>& f) const {
  std::vector<double> out(f.size());
  apply(f.data(), out.data());
  return out;
}

double DirichletKernel::entry(int i, int j) const {
  for (int t = row_ptr[i]; t < row_ptr[i + 1]; ++t)
    if (col[t] == j) return val[t];
  return 0.0;
}

std::vector<double> DirichletKernel::row_density(int x_local) const {
  std::vector<double> out(size(), 0.0);
  for (int t = row_ptr[x_local]; t < row_ptr[x_local + 1]; ++t) out[col[t]] = val[t];
  return out;
}

bool DirichletKernel::covers_whole_conservative_space() const {
  if (size() != base->size()) return false;
  for (int i = 0; i < base->size(); ++i)
    if (base->boundary_row[i]) return false;
  return true;
}

DirichletKernel restrict_to_ball(const Kernel& k, int center, double r) {
  DirichletKernel dk;
  dk.base = &k;
  dk.center = center;
  dk.radius = r;
  dk.points = k.space->ball(center, r);
  if (dk.points.empty()) throw KernelError("restrict: empty ball");
  if (!k.space->boundary_free() && r > k.space->margin(center) + 1e-12)
    throw KernelError("restrict: ball not within window");
  dk.global2loc.assign(k.size(), -1);
  for (int i = 0; i < dk.size(); ++i) dk.global2loc[dk.points[i]] = i;
  dk.m.resize(dk.size());
  for (int i = 0; i < dk.size(); ++i) dk.m[i] = k.m[dk.points[i]];
  dk.row_ptr.assign(dk.size() + 1, 0);
  std::vector<std::vector<std::pair<int, double>>> rows(dk.size());
  for (int i = 0; i < dk.size(); ++i) {
    int g = dk.points[i];
    for (int t = k.row_ptr[g]; t < k.row_ptr[g + 1]; ++t) {
      int lj = dk.global2loc[k.col[t]];
      if (lj >= 0) rows[i].emplace_back(lj, k.val[t]);
    }
    std::sort(rows[i].begin(), rows[i].end());
    dk.row_ptr[i + 1] = dk.row_ptr[i] + static_cast<int>(rows[i].size());
  }
  for (auto& row : rows)
    for (auto& [j, v] : row) {
      dk.col.push_back(j);
      dk.val.push_back(v);
    }
  return dk;
}

std::vector<double> iterate_dirichlet(const DirichletKernel& dk, int steps, int x_local) {
  if (steps < 1) throw KernelError("iterate_dirichlet: steps must be >= 1");
  std::vector<double> v = dk.row_density(x_local);
  std::vector<double> tmp(dk.size());
  for (int s = 1; s < steps; ++s) {
    dk.apply(v.data(), tmp.data());
    v.swap(tmp);
  }
  return v;
}

double dirichlet_l2_norm(const DirichletKernel& dk, double tol, int maxit) {
  // power iteration on s(y,z) = p(y,z) sqrt(m(y) m(z)); |lambda|_max equals
  // the L2(m) operator norm of P_B
  int n = dk.size();
  std::vector<double> v(n), w(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(n) + i);
  auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
    budget().charge(static_cast<long long>(dk.val.size()));
    for (int i = 0; i < n; ++i) {
      double acc = 0;
      for (int t = dk.row_ptr[i]; t < dk.row_ptr[i + 1]; ++t) {
        int j = dk.col[t];
        acc += dk.val[t] * std::sqrt(dk.m[i] * dk.m[j]) * in[j];
      }
      out[i] = acc;
    }
  };
  double prev = 0;
  for (int it = 0; it < maxit; ++it) {
    matvec(v, w);
    double nw = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (nw == 0) return 0.0;
    for (auto& x : w) x /= nw;
    v.swap(w);
    if (std::abs(nw - prev) <= tol * std::max(1.0, nw)) return nw;
    prev = nw;
  }
  throw KernelError("dirichlet_l2_norm: power iteration did not converge");
}

GreenResult green(const Kernel& k, int x, double tol, int kmax) {
  GreenResult g;
  std::vector<double> term = k.row_density(x);
  g.sum.assign(k.size(), 0.0);
  std::vector<double> tmp(k.size());
  for (int i = 1; i <= kmax; ++i) {
    double inc = 0;
    for (int j = 0; j < k.size(); ++j) {
      g.sum[j] += term[j];
      inc = std::max(inc, term[j]);
    }
    g.terms = i;
    g.last_increment = inc;
    if (inc < tol) return g;
    k.apply(term.data(), tmp.data());
    term.swap(tmp);
  }
  g.status = GreenStatus::NoConvergence;
  return g;
}

GreenResult green(const DirichletKernel& dk, int x_local, double tol, int kmax) {
  GreenResult g;
  double nrm = dirichlet_l2_norm(dk);
  if (nrm >= 1.0)
    throw KernelError("green: spectral radius of the Dirichlet operator is not < 1");
  std::vector<double> term = dk.row_density(x_local);
  g.sum.assign(dk.size(), 0.0);
  std::vector<double> tmp(dk.size());
  double min_m = *std::min_element(dk.m.begin(), dk.m.end());
  for (int i = 1; i <= kmax; ++i) {
    double inc = 0;
    for (int j = 0; j < dk.size(); ++j) {
      g.sum[j] += term[j];
      inc = std::max(inc, term[j]);
    }
    g.terms = i;
    g.last_increment = inc;
    double l2 = norm_m(term, dk.m, 2.0);
    g.tail_bound = l2 * nrm / (1.0 - nrm) / std::sqrt(min_m);
    if (inc < tol && g.tail_bound < tol * dk.size()) return g;
    dk.apply(term.data(), tmp.data());
    term.swap(tmp);
  }
  g.status = GreenStatus::NoConvergence;
  return g;
}

CompatAudit audit_compat(const Kernel& k, double h, double hp) {
  if (h > hp) throw KernelError("audit_compat: need h <= h'");
  CompatAudit a;
  int n = k.size();
  a.c1_hat = std::numeric_limits<double>::infinity();
  // support check over stored entries
  for (int i = 0; i < n; ++i)
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
      if (k.val[t] > 0 && k.space->metric(i, k.col[t]) > hp + 1e-12) a.support_ok = false;
  // interior rows only: p_2 computed on the window is exact there
  std::vector<double> tmp(n);
  std::vector<int> interior;
  for (int i = 0; i < n; ++i) {
    if (k.space->margin(i) < 2 * hp) continue;
    interior.push_back(i);
    double vh = k.vol_m(i, h);
    double vhp = k.vol_m(i, hp);
    k.space->for_each_in_ball(i, h, [&](int j, double) {
      a.c1_hat = std::min(a.c1_hat, k.entry(i, j) * vh);
    });
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
      a.C1_hat = std::max(a.C1_hat, k.val[t] * vhp);
  }
  // alpha on an evenly spaced sample of interior rows (a full pass would cost
  // one matvec per point)
  double alpha = std::numeric_limits<double>::infinity();
  if (!interior.empty()) {
    size_t stride = std::max<size_t>(1, interior.size() / 256);
    for (size_t s = 0; s < interior.size(); s += stride) {
      int i = interior[s];
      auto row = k.row_density(i);
      k.apply(row.data(), tmp.data());
      for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
        if (k.val[t] > 0) alpha = std::min(alpha, tmp[k.col[t]] / k.val[t]);
    }
  }
  if (!std::isfinite(a.c1_hat)) a.c1_hat = 0.0;
  a.alpha_hat = std::isfinite(alpha) ? std::max(alpha, 0.0) : 0.0;
  // e-pcomp spot check on a few interior rows: p_{k+1} >= alpha p_k, k in {2,3,4}
  a.pcomp_min = std::numeric_limits<double>::infinity();
  int checked = 0;
  for (int i = 0; i < n && checked < 5; ++i) {
    if (k.space->margin(i) < 6 * hp) continue;
    ++checked;
    auto pk = iterate(k, 2, i).density;
    for (int step = 2; step <= 4; ++step) {
      k.apply(pk.data(), tmp.data());
      for (int j = 0; j < n; ++j)
        if (pk[j] > 1e-300) a.pcomp_min = std::min(a.pcomp_min, tmp[j] / pk[j]);
      pk.assign(tmp.begin(), tmp.end());
    }
  }
  if (!std::isfinite(a.pcomp_min)) a.pcomp_min = 0.0;
  return a;
}

DirichletForms dirichlet_forms(const Kernel& k, const std::vector<double>& f) {
  int n = k.size();
  if (!k.space->boundary_free()) {
    for (int i = 0; i < n; ++i)
      if (f[i] != 0.0 && k.space->margin(i) < k.hp)
        throw KernelError("dirichlet_forms: support violation (within h' of boundary)");
  }
  DirichletForms out;
  double quad = 0;
  for (int i = 0; i < n; ++i)
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) {
      double d = f[i] - f[k.col[t]];
      quad += d * d * k.val[t] * k.m[i] * k.m[k.col[t]];
    }
  out.e_quad = 0.5 * quad;
  auto pf = k.apply(f);
  double ff = inner_m(f, f, k.m);
  out.e_inner = ff - inner_m(f, pf, k.m);
  out.e_star = ff - inner_m(pf, pf, k.m);
  return out;
}

double grad_p_squared(const Kernel& k, const std::vector<double>& f, int x) {
  double acc = 0;
  for (int t = k.row_ptr[x]; t < k.row_ptr[x + 1]; ++t) {
    double d = f[k.col[t]] - f[x];
    acc += d * d * k.val[t] * k.m[k.col[t]];
  }
  return acc;
}

double integration_by_parts_check(const Kernel& k, const std::vector<double>& f,
                                  const std::vector<double>& g) {
  auto pf = k.apply(f);
  int n = k.size();
  std::vector<double> lap(n);
  for (int i = 0; i < n; ++i) lap[i] = f[i] - pf[i];
  double lhs = inner_m(lap, g, k.m);
  double rhs = 0;
  for (int i = 0; i < n; ++i)
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) {
      int j = k.col[t];
      rhs += (f[j] - f[i]) * (g[j] - g[i]) * k.val[t] * k.m[i] * k.m[j];
    }
  rhs *= 0.5;
  return std::abs(lhs - rhs);
}

double inner_m(const std::vector<double>& f, const std::vector<double>& g,
               const std::vector<double>& m) {
  double acc = 0;
  for (size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i] * m[i];
  return acc;
}

double norm_m(const std::vector<double>& f, const std::vector<double>& m, double p) {
  if (std::isinf(p)) {
    double mx = 0;
    for (double v : f) mx = std::max(mx, std::abs(v));
    return mx;
  }
  double acc = 0;
  for (size_t i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p) * m[i];
  return std::pow(acc, 1.0 / p);
}

}  // namespace heatlab
