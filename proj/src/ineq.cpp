#include "heatlab/ineq.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "heatlab/rng.hpp"

namespace heatlab {

namespace {

// h-proximity components of a point subset
std::vector<int> proximity_components(const Space& s, const std::vector<int>& pts, double h) {
  std::vector<int> comp(pts.size(), -1);
  std::vector<int> loc(s.size(), -1);
  for (size_t i = 0; i < pts.size(); ++i) loc[pts[i]] = static_cast<int>(i);
  int nc = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (comp[i] >= 0) continue;
    std::deque<int> q{static_cast<int>(i)};
    comp[i] = nc;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      s.for_each_in_ball(pts[v], h, [&](int p, double) {
        int w = loc[p];
        if (w >= 0 && comp[w] < 0) {
          comp[w] = nc;
          q.push_back(w);
        }
      });
    }
    ++nc;
  }
  return comp;
}

struct Neumaier {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

PoincareResult poincare_constant(const Space& s, double h, int center, double r,
                                 double kappa) {
  if (kappa < 1.0) throw IneqError("poincare_constant: kappa must be >= 1");
  PoincareResult res;
  res.center = center;
  res.r = r;
  res.h = h;
  res.kappa = kappa;
  std::vector<int> bpts = s.ball(center, r);
  res.domain = s.ball(center, kappa * r);
  if (bpts.empty()) throw IneqError("poincare_constant: empty ball");
  if (bpts.size() < 2) {
    res.c_p = 0.0;  // variance of a single point vanishes
    return res;
  }
  const auto& dom = res.domain;
  int nd = static_cast<int>(dom.size());
  std::vector<int> loc(s.size(), -1);
  for (int i = 0; i < nd; ++i) loc[dom[i]] = i;
  std::vector<char> in_b(nd, 0);
  for (int p : bpts) in_b[loc[p]] = 1;

  auto comp = proximity_components(s, dom, h);
  int nc = 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<int> comp_meets_b(nc, 0);
  for (int i = 0; i < nd; ++i)
    if (in_b[i]) comp_meets_b[comp[i]] = 1;
  int meets = std::accumulate(comp_meets_b.begin(), comp_meets_b.end(), 0);
  if (meets >= 2) {
    res.degenerate = true;
    res.c_p = std::numeric_limits<double>::infinity();
    res.witness.assign(nd, 0.0);
    int first = -1;
    for (int i = 0; i < nd; ++i) {
      if (!comp_meets_b[comp[i]]) continue;
      if (first < 0) first = comp[i];
      res.witness[i] = comp[i] == first ? 1.0 : -1.0;
    }
    return res;
  }

  // Variance form on B and gradient form on the kappa-ball, both over `dom`.
  // V(x,h) denominators are taken within the domain.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nd, nd);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nd, nd);
  double mass_b = 0;
  std::vector<double> mm(nd);
  for (int i = 0; i < nd; ++i) {
    mm[i] = s.mass(dom[i]);
    if (in_b[i]) mass_b += mm[i];
  }
  for (int i = 0; i < nd; ++i)
    if (in_b[i]) A(i, i) += mm[i];
  for (int i = 0; i < nd; ++i)
    if (in_b[i])
      for (int j = 0; j < nd; ++j)
        if (in_b[j]) A(i, j) -= mm[i] * mm[j] / mass_b;
  for (int i = 0; i < nd; ++i) {
    // local volume within dom
    double vh = 0;
    std::vector<std::pair<int, double>> nb;
    s.for_each_in_ball(dom[i], h, [&](int p, double) {
      int j = loc[p];
      if (j >= 0) nb.emplace_back(j, 0.0);
    });
    for (auto& [j, w] : nb) {
      w = mm[j];
      vh += w;
    }
    if (vh <= 0) continue;
    double scale = mm[i] / vh;
    // |grad f|_h^2(x_i) * m_i = scale * sum_j (f_j - f_i)^2 m_j
    for (auto& [j, w] : nb) {
      G(i, i) += scale * w;
      G(j, j) += scale * w;
      G(i, j) -= scale * w;
      G(j, i) -= scale * w;
    }
  }
  // remove components missed by B entirely (optimal f vanishes there) and
  // project out the per-component constants
  std::vector<int> keep;
  for (int i = 0; i < nd; ++i)
    if (comp_meets_b[comp[i]]) keep.push_back(i);
  // basis: e_{q} - e_{q0} within the surviving component
  std::vector<int> anchor(nc, -1);
  std::vector<std::pair<int, int>> basis;  // (i, anchor)
  for (int i : keep) {
    if (anchor[comp[i]] < 0)
      anchor[comp[i]] = i;
    else
      basis.emplace_back(i, anchor[comp[i]]);
  }
  int nb2 = static_cast<int>(basis.size());
  if (nb2 == 0) {
    res.c_p = 0.0;
    return res;
  }
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nd, nb2);
  for (int c = 0; c < nb2; ++c) {
    B(basis[c].first, c) = 1.0;
    B(basis[c].second, c) = -1.0;
  }
  Eigen::MatrixXd Ar = B.transpose() * A * B;
  Eigen::MatrixXd Gr = B.transpose() * G * B;
  // small diagonal regularization guards round-off in Gr
  Gr.diagonal().array() += 1e-14 * Gr.diagonal().maxCoeff();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar, Gr);
  if (es.info() != Eigen::Success)
    throw IneqError("poincare_constant: generalized eigensolver failed");
  int top = nb2 - 1;
  double lambda = es.eigenvalues()(top);
  res.c_p = std::max(0.0, lambda) / (r * r);
  Eigen::VectorXd w = B * es.eigenvectors().col(top);
  res.witness.assign(nd, 0.0);
  for (int i = 0; i < nd; ++i) res.witness[i] = w(i);
  return res;
}

// --- trial family ----------------------------------------------------------------

std::vector<double> trial_function(const Space& s, const std::vector<char>& support,
                                   int index, uint64_t seed) {
  int n = s.size();
  std::vector<int> sup_pts;
  for (int i = 0; i < n; ++i)
    if (support[i]) sup_pts.push_back(i);
  if (sup_pts.empty()) throw IneqError("trial_function: empty support");
  std::vector<double> f(n, 0.0);
  if (index < 8) {
    // spread point indicators
    int p = sup_pts[(index * sup_pts.size()) / 8];
    f[p] = 1.0;
    return f;
  }
  if (index < 11) {
    // tents at three widths around the support centroid
    int c = sup_pts[sup_pts.size() / 2];
    double width = (index - 7) * 0.25;  // fraction of support extent
    double extent = 0;
    for (int p : sup_pts) extent = std::max(extent, s.metric(c, p));
    double wr = std::max(width * extent, 1e-9);
    for (int p : sup_pts) f[p] = std::max(0.0, 1.0 - s.metric(c, p) / wr);
    return f;
  }
  Rng rng = Rng::substream(seed, static_cast<uint64_t>(index));
  for (int p : sup_pts) f[p] = rng.gaussian();
  return f;
}

ProbeResult pseudo_poincare_check(const Kernel& k, double s, int trials, uint64_t seed) {
  if (k.space->grid_backed() && s < k.space->rho())
    throw IneqError("pseudo_poincare: averaging scale below resolution");
  const Space& sp = *k.space;
  int n = k.size();
  std::vector<char> support(n, 0);
  for (int i = 0; i < n; ++i)
    if (sp.margin(i) >= k.hp + s) support[i] = 1;
  // indicators of the kernel's support-graph components catch the degenerate
  // directions of block-diagonal kernels
  std::vector<int> comp(n, -1);
  {
    int nc = 0;
    for (int i = 0; i < n; ++i) {
      if (comp[i] >= 0) continue;
      std::deque<int> q{i};
      comp[i] = nc;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int t = k.row_ptr[v]; t < k.row_ptr[v + 1]; ++t)
          if (k.val[t] > 0 && comp[k.col[t]] < 0) {
            comp[k.col[t]] = nc;
            q.push_back(k.col[t]);
          }
      }
      ++nc;
    }
  }
  int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
  ProbeResult res;
  res.name = "pseudo-poincare";
  for (int t = 0; t < trials + ncomp; ++t) {
    std::vector<double> f;
    if (t >= trials) {
      f.assign(n, 0.0);
      for (int i = 0; i < n; ++i)
        if (support[i] && comp[i] == t - trials) f[i] = 1.0;
      if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) continue;
    } else {
      f = trial_function(sp, support, t, seed);
    }
    // f_s averaging in the kernel's reference measure
    std::vector<double> fs(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double num = 0, den = 0;
      sp.for_each_in_ball(i, s, [&](int j, double) {
        num += f[j] * k.m[j];
        den += k.m[j];
      });
      fs[i] = den > 0 ? num / den : 0.0;
    }
    double num = 0;
    for (int i = 0; i < n; ++i) {
      double d = f[i] - fs[i];
      num += d * d * k.m[i];
    }
    double e = dirichlet_forms(k, f).e_inner;
    if (e <= 1e-14) {
      if (num <= 1e-14 * inner_m(f, f, k.m)) continue;  // 0/0: constants
      res.unbounded = true;
      res.observed = std::numeric_limits<double>::infinity();
      res.witness_id = t;
      res.witness = f;
      return res;
    }
    double ratio = num / (s * s * e);
    if (ratio > res.observed) {
      res.observed = ratio;
      res.witness_id = t;
      res.witness = f;
    }
  }
  return res;
}

std::vector<std::vector<double>> top_eigenfunctions(const DirichletKernel& dk, int count) {
  int n = dk.size();
  count = std::min(count, n);
  std::vector<std::vector<double>> out;
  if (n <= 2000) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int t = dk.row_ptr[i]; t < dk.row_ptr[i + 1]; ++t)
        S(i, dk.col[t]) = dk.val[t] * std::sqrt(dk.m[i] * dk.m[dk.col[t]]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    for (int c = 0; c < count; ++c) {
      Eigen::VectorXd v = es.eigenvectors().col(n - 1 - c);
      std::vector<double> f(n);
      for (int i = 0; i < n; ++i) f[i] = v(i) / std::sqrt(dk.m[i]);
      out.push_back(std::move(f));
    }
    return out;
  }
  // orthogonal iteration, fixed schedule for determinism
  Eigen::MatrixXd V(n, count);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < count; ++c)
      V(i, c) = std::sin(0.37 * (i + 1) * (c + 1));
  auto matvec = [&](const Eigen::MatrixXd& in, Eigen::MatrixXd& outM) {
    budget().charge(static_cast<long long>(dk.val.size()) * count);
    outM.setZero(n, count);
    for (int i = 0; i < n; ++i)
      for (int t = dk.row_ptr[i]; t < dk.row_ptr[i + 1]; ++t) {
        int j = dk.col[t];
        double w = dk.val[t] * std::sqrt(dk.m[i] * dk.m[j]);
        for (int c = 0; c < count; ++c) outM(i, c) += w * in(j, c);
      }
  };
  Eigen::MatrixXd W(n, count);
  for (int it = 0; it < 200; ++it) {
    matvec(V, W);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
    V = qr.householderQ() * Eigen::MatrixXd::Identity(n, count);
  }
  for (int c = 0; c < count; ++c) {
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = V(i, c) / std::sqrt(dk.m[i]);
    out.push_back(std::move(f));
  }
  return out;
}

ProbeResult sobolev_probe(const DirichletKernel& dk, double delta, int trials,
                          uint64_t seed) {
  if (delta <= 2.0) throw IneqError("sobolev_probe: need delta > 2");
  int n = dk.size();
  double r = dk.radius;
  double vol = std::accumulate(dk.m.begin(), dk.m.end(), 0.0);
  auto eigs = top_eigenfunctions(dk, std::min(5, n));
  ProbeResult res;
  res.name = "sobolev";
  double q = 2.0 * delta / (delta - 2.0);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> f;
    if (t < static_cast<int>(eigs.size())) {
      f = eigs[t];
    } else {
      // reuse the shared family on the local index set
      Rng rng = Rng::substream(seed, static_cast<uint64_t>(t));
      f.assign(n, 0.0);
      if (t % 3 == 0) {
        f[static_cast<int>(rng.below(n))] = 1.0;
      } else {
        for (int i = 0; i < n; ++i) f[i] = rng.gaussian();
      }
    }
    auto pf = dk.apply(f);
    double lhs = std::pow(norm_m(pf, dk.m, q), 2.0);
    double ff = inner_m(f, f, dk.m);
    double eb = ff - inner_m(f, pf, dk.m);
    double rhs = (r * r / std::pow(vol, 2.0 / delta)) * (eb + ff / (r * r));
    if (rhs <= 0) continue;
    double ratio = lhs / rhs;
    if (ratio > res.observed) {
      res.observed = ratio;
      res.witness_id = t;
    }
  }
  return res;
}

ProbeResult nash_probe(const Kernel& k, int center, double r, double delta, int trials,
                       uint64_t seed) {
  if (delta <= 2.0) throw IneqError("nash_probe: need delta > 2");
  const Space& sp = *k.space;
  int n = k.size();
  std::vector<char> support(n, 0);
  sp.for_each_in_ball(center, r, [&](int j, double) { support[j] = 1; });
  if (!sp.boundary_free())
    for (int i = 0; i < n; ++i)
      if (sp.margin(i) < k.hp) support[i] = 0;
  double vol = k.vol_m(center, r);
  ProbeResult res;
  res.name = "nash";
  for (int t = 0; t < trials; ++t) {
    auto f = trial_function(sp, support, t, seed);
    auto pf = k.apply(f);
    double l2 = norm_m(pf, k.m, 2.0);
    double lhs = std::pow(l2, 2.0 + 4.0 / delta);
    double ff = inner_m(f, f, k.m);
    double e = ff - inner_m(f, pf, k.m);
    double l1 = norm_m(f, k.m, 1.0);
    double rhs = (r * r / std::pow(vol, 2.0 / delta)) * (e + ff / (r * r)) *
                 std::pow(l1, 4.0 / delta);
    if (rhs <= 0) continue;
    double ratio = lhs / rhs;
    if (ratio > res.observed) {
      res.observed = ratio;
      res.witness_id = t;
    }
  }
  return res;
}

UltracontractivityProfile ultracontractivityprofile_impl(const DirichletKernel& dk, int kmax,
                                                         double delta) {
  if (kmax < 2) throw IneqError("ultracontractivity_profile: kmax must be >= 2");
  int n = dk.size();
  UltracontractivityProfile prof;
  // dense evolution of all rows
  std::vector<std::vector<double>> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = dk.row_density(i);
  double r = dk.radius;
  double vol = std::accumulate(dk.m.begin(), dk.m.end(), 0.0);
  for (int k = 1; k <= kmax; ++k) {
    double mx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mx = std::max(mx, rows[i][j]);
    prof.ks.push_back(k);
    prof.norms.push_back(mx);
    double shape = std::pow(1.0 + r * r, delta / 2.0) / vol *
                   std::pow(1.0 + 1.0 / (r * r), k - 1.0) / std::pow(k, delta / 2.0);
    prof.c_u_hat = std::max(prof.c_u_hat, mx / shape);
    if (k < kmax) {
      for (int i = 0; i < n; ++i) {
        auto next = dk.apply(rows[i]);
        rows[i].swap(next);
      }
    }
  }
  // log-log decay over even k <= min(kmax, r^2)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  int klim = static_cast<int>(std::min<double>(kmax, r * r));
  for (int k = 2; k <= klim; k += 2) {
    double v = prof.norms[k - 1];
    if (v <= 0) continue;
    double lx = std::log(k), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt >= 2 && cnt * sxx - sx * sx > 1e-15)
    prof.decay_exponent = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return prof;
}

UltracontractivityProfile ultracontractivity_profile(const DirichletKernel& dk, int kmax,
                                                     double delta) {
  return ultracontractivityprofile_impl(dk, kmax, delta);
}

SpectralGapResult spectral_gap(const DirichletKernel& dk) {
  if (dk.covers_whole_conservative_space())
    throw IneqError("spectral_gap: ball must be proper (conservative whole space)");
  SpectralGapResult res;
  int n = dk.size();
  if (n <= 2000) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int t = dk.row_ptr[i]; t < dk.row_ptr[i + 1]; ++t)
        S(i, dk.col[t]) = dk.val[t] * std::sqrt(dk.m[i] * dk.m[dk.col[t]]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw IneqError("spectral_gap: eigensolver failed");
    double lo = es.eigenvalues()(0), hi = es.eigenvalues()(n - 1);
    res.norm = std::max(std::abs(lo), std::abs(hi));
  } else {
    res.norm = dirichlet_l2_norm(dk);
  }
  res.gap = 1.0 - res.norm;
  res.a_hat = dk.radius * dk.radius * res.gap;
  return res;
}

CaccioppoliResult caccioppoli_check(const Kernel& k, const std::vector<double>& v0,
                                    const std::vector<double>& psi, int steps,
                                    bool lazy_evolution) {
  CaccioppoliResult out;
  Kernel kl = lazy(k);
  int n = k.size();
  std::vector<double> v = v0;
  auto absvec = [&](const std::vector<double>& w) {
    std::vector<double> u(w.size());
    for (size_t i = 0; i < w.size(); ++i) u[i] = std::abs(w[i]);
    return u;
  };
  std::vector<double> u = absvec(v);
  out.min_residual = std::numeric_limits<double>::infinity();
  for (int step = 0; step < steps; ++step) {
    std::vector<double> vn = lazy_evolution ? kl.apply(v) : k.apply(v);
    std::vector<double> un = absvec(vn);
    // LHS: sum d_k(u^2) psi^2 m + (1/8) E(u psi, u psi)
    Neumaier term1;
    for (int i = 0; i < n; ++i)
      term1.add((un[i] * un[i] - u[i] * u[i]) * psi[i] * psi[i] * k.m[i]);
    std::vector<double> upsi(n);
    for (int i = 0; i < n; ++i) upsi[i] = u[i] * psi[i];
    // quadratic-form route avoids the support guard of dirichlet_forms
    Neumaier eform;
    for (int i = 0; i < n; ++i)
      for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) {
        double d = upsi[i] - upsi[k.col[t]];
        eform.add(0.5 * d * d * k.val[t] * k.m[i] * k.m[k.col[t]]);
      }
    double lhs = term1.value() + eform.value() / 8.0;
    // RHS: (17/8) sum sum |grad psi|^2 u_k^2(y) p1(y,z) m m
    Neumaier rhs;
    for (int y = 0; y < n; ++y)
      for (int t = k.row_ptr[y]; t < k.row_ptr[y + 1]; ++t) {
        int z = k.col[t];
        double d = psi[z] - psi[y];
        rhs.add(d * d * u[y] * u[y] * k.val[t] * k.m[y] * k.m[z]);
      }
    double residual = (17.0 / 8.0) * rhs.value() - lhs;
    out.residuals.push_back(residual);
    out.min_residual = std::min(out.min_residual, residual);
    v.swap(vn);
    u.swap(un);
  }
  out.pass = out.min_residual >= -1e-10;
  return out;
}

namespace {

// weight f_k and the pointwise condition on it
struct ImpWeight {
  const std::vector<double>& sigma;
  double D;
  int n;
  double at(int kstep, int x) const {
    return std::exp(-sigma[x] * sigma[x] / (D * (n + 1.0 - kstep)));
  }
};

}  // namespace

ImpResult imp_check(const Kernel& k, const std::vector<double>& u0,
                    const std::vector<double>& sigma, double D, int n) {
  const Space& sp = *k.space;
  int N = k.size();
  // sigma must be 1-Lipschitz on the h'-proximity graph with inf sigma >= h'
  for (int i = 0; i < N; ++i) {
    if (sigma[i] < k.hp - 1e-12) throw IneqError("imp_check: inf sigma < h'");
  }
  for (int i = 0; i < N; ++i) {
    bool bad = false;
    sp.for_each_in_ball(i, k.hp, [&](int j, double d) {
      if (std::abs(sigma[i] - sigma[j]) > d + 1e-12) bad = true;
    });
    if (bad) throw IneqError("imp_check: sigma violates the 1-Lipschitz condition");
  }
  ImpResult res;
  ImpWeight w{sigma, D, n};
  Kernel kl = lazy(k);
  // pointwise weight condition e-condn-f
  res.condition_ok = true;
  for (int kk = 0; kk < n && res.condition_ok; ++kk) {
    for (int x = 0; x < N; ++x) {
      double fk = w.at(kk, x), fk1 = w.at(kk + 1, x);
      if (fk1 <= 0.0) {  // underflown weight: exponential blow-up regime
        res.condition_ok = false;
        break;
      }
      double grad2 = 0;
      for (int t = k.row_ptr[x]; t < k.row_ptr[x + 1]; ++t) {
        int y = k.col[t];
        double d = w.at(kk + 1, y) - fk1;
        grad2 += d * d * k.val[t] * k.m[y];
      }
      // scale-invariant form of the condition
      if ((fk1 - fk) + grad2 / (4.0 * fk1) > 1e-14 * fk1) {
        res.condition_ok = false;
        break;
      }
    }
  }
  std::vector<double> u = u0;
  for (int kk = 0; kk <= n; ++kk) {
    Neumaier J;
    for (int x = 0; x < N; ++x) J.add(u[x] * u[x] * w.at(kk, x) * k.m[x]);
    res.J.push_back(J.value());
    if (kk < n) u = kl.apply(u);
  }
  res.non_increasing = true;
  for (size_t i = 1; i < res.J.size(); ++i)
    if (res.J[i] > res.J[i - 1] + 1e-12 * res.J[0]) res.non_increasing = false;
  if (!res.condition_ok)
    res.label = ImpLabel::CONDITION_VIOLATED;
  else
    res.label = res.non_increasing ? ImpLabel::PASS : ImpLabel::FAIL;
  return res;
}

double find_min_d(const Kernel& k, const std::vector<double>& u0,
                  const std::vector<double>& sigma, int n) {
  double d = 0.25;
  auto pass = [&](double D) { return imp_check(k, u0, sigma, D, n).label == ImpLabel::PASS; };
  int guard = 0;
  while (!pass(d)) {
    d *= 2;
    if (++guard > 80) throw IneqError("find_min_d: no passing D found");
  }
  double lo = d / 2, hi = d;
  if (guard == 0) return d;  // passed at the smallest probe
  for (int it = 0; it < 12; ++it) {
    double mid = 0.5 * (lo + hi);
    (pass(mid) ? hi : lo) = mid;
  }
  return hi;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double poly_identity1_rhs(int n, double beta, double z) {
  Neumaier acc;
  for (int k = 1; k <= n; k += 2)
    acc.add(binom(n, k) * std::pow(beta, n - k) * std::pow(z - beta, k - 1) * z);
  for (int k = 1; k <= n - 1; k += 2)
    acc.add(binom(n - 1, k) * std::pow(beta, n - 1 - k) * std::pow(z - beta, k - 1) *
            (z * z - 2 * beta * z));
  return acc.value();
}

double poly_identity2_rhs(int n, double beta, double z) {
  Neumaier acc;
  acc.add(std::pow(0.5, n));
  for (int k = 1; k <= n; k += 2)
    acc.add(binom(n, k) * std::pow((1 + beta) / 2, n - k) * std::pow(0.5, k) *
            std::pow(z - beta, k - 1) * z);
  for (int k = 1; k <= n - 1; k += 2) {
    Neumaier snk;
    for (int i = k + 1; i <= n; ++i)
      snk.add(binom(n, i) * binom(i - 1, k) * std::pow(beta, i - 1 - k));
    double s = snk.value() * std::pow(1 + beta, -(n - 1 - k));
    acc.add(s * std::pow((1 + beta) / 2, n - 1 - k) * std::pow(0.5, k + 1) *
            std::pow(z - beta, k - 1) * (z * z - 2 * beta * z));
  }
  return acc.value();
}

PolyCheckResult verify_poly_identities(int n_max, int trials, uint64_t seed) {
  if (n_max > 25) throw IneqError("verify_poly_identities: n > 25 overflows the binomials");
  PolyCheckResult out;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    int n = 1 + static_cast<int>(rng.below(n_max));
    // beta plays the role of alpha/2 <= 1; larger values inflate the
    // cancellation in the alternating sums beyond double precision
    double beta = 0.05 + rng.uniform() * 0.95;
    double z = rng.uniform(-2.0, 2.0);
    double lhs1 = std::pow(z, n);
    double rhs1 = poly_identity1_rhs(n, beta, z);
    double lhs2 = std::pow((1 + z) / 2, n);
    double rhs2 = poly_identity2_rhs(n, beta, z);
    double den1 = std::max({std::abs(lhs1), std::abs(rhs1), 1.0});
    double den2 = std::max({std::abs(lhs2), std::abs(rhs2), 1.0});
    out.max_rel_residual = std::max(out.max_rel_residual, std::abs(lhs1 - rhs1) / den1);
    out.max_rel_residual = std::max(out.max_rel_residual, std::abs(lhs2 - rhs2) / den2);
    // s_{n,k} >= binom(n-1,k)
    for (int k = 1; k <= n - 1; k += 2) {
      Neumaier snk;
      for (int i = k + 1; i <= n; ++i)
        snk.add(binom(n, i) * binom(i - 1, k) * std::pow(beta, i - 1 - k));
      double s = snk.value() * std::pow(1 + beta, -(n - 1 - k));
      if (s < binom(n - 1, k) * (1.0 - 1e-12)) out.snk_bound_ok = false;
    }
  }
  out.pass = out.max_rel_residual <= 1e-8 && out.snk_bound_ok;
  return out;
}

}  // namespace heatlab
