#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "heatlab/graph_io.hpp"
#include "heatlab/harnack.hpp"
#include "heatlab/ineq.hpp"
#include "heatlab/net.hpp"
#include "heatlab/rng.hpp"
#include "heatlab/runner.hpp"

namespace heatlab::battery {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::shared_ptr<Space> random_weighted_graph(Rng& rng, int max_v) {
  SpaceSpec spec;
  spec.kind = SpaceKind::custom_graph;
  int nv = 10 + static_cast<int>(rng.below(max_v - 9));
  spec.n_vertices = nv;
  spec.vertex_weights.resize(nv);
  for (auto& w : spec.vertex_weights) w = 0.5 + 1.5 * rng.uniform();
  // random spanning tree, then extra edges
  for (int v = 1; v < nv; ++v)
    spec.edge_list.emplace_back(static_cast<int>(rng.below(v)), v);
  int extra = static_cast<int>(rng.below(nv));
  for (int e = 0; e < extra; ++e) {
    int a = static_cast<int>(rng.below(nv));
    int b = static_cast<int>(rng.below(nv));
    if (a == b) continue;
    auto p = std::minmax(a, b);
    if (std::find(spec.edge_list.begin(), spec.edge_list.end(),
                  std::make_pair(p.first, p.second)) == spec.edge_list.end())
      spec.edge_list.emplace_back(p.first, p.second);
  }
  return std::make_shared<Space>(Space::build(spec));
}

// dense operator model: D = diag(m), row densities iterate as A_{k+1} = A_k D A
struct DenseModel {
  Eigen::MatrixXd A;  // p(x,y) densities
  Eigen::VectorXd m;
  explicit DenseModel(const Kernel& k) {
    int n = k.size();
    A = Eigen::MatrixXd::Zero(n, n);
    m = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
      m(i) = k.m[i];
      for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) A(i, k.col[t]) = k.val[t];
    }
  }
  Eigen::MatrixXd power(int steps) const {
    Eigen::MatrixXd P = A;
    for (int s = 1; s < steps; ++s) P = P * m.asDiagonal() * A;
    return P;
  }
};

}  // namespace

std::vector<Outcome> identities(uint64_t seed) {
  double t0 = now_seconds();
  std::vector<Outcome> out;
  long long checks = 0, violations = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++violations;
  };

  for (int g = 0; g < 25; ++g) {
    Rng rng = Rng::substream(seed, 100 + g);
    auto sp = random_weighted_graph(rng, 30);
    Kernel k = srw(sp);
    int n = k.size();
    // stored symmetry, exact
    for (int i = 0; i < n; ++i)
      for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
        expect(k.entry(k.col[t], i) == k.val[t]);
    // Chapman-Kolmogorov: p_{a+b} row equals b more applications of p_a row
    int x = static_cast<int>(rng.below(n));
    auto p2 = iterate(k, 2, x).density;
    auto p5 = iterate(k, 5, x).density;
    auto p2to5 = p2;
    std::vector<double> tmp(n);
    for (int s = 0; s < 3; ++s) {
      k.apply(p2to5.data(), tmp.data());
      p2to5.swap(tmp);
    }
    for (int i = 0; i < n; ++i) expect(std::abs(p5[i] - p2to5[i]) <= 1e-11);
    // p_{2n}(x,x) non-increasing; after `step` applications the row holds p_{step+1}
    std::vector<double> row = k.row_density(x);
    double prev = std::numeric_limits<double>::infinity();
    for (int step = 1; step <= 16; ++step) {
      k.apply(row.data(), tmp.data());
      row.swap(tmp);
      if ((step + 1) % 2 == 0) {
        expect(row[x] <= prev + 1e-12);
        prev = row[x];
      }
    }
    // e-kcauchy on all pairs at n = 6
    auto p6 = DenseModel(k).power(6);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        expect(p6(i, j) <= std::sqrt(p6(i, i) * p6(j, j)) + 1e-12);
    // contraction on random f
    std::vector<double> f(n);
    for (auto& v : f) v = rng.gaussian();
    auto pf = k.apply(f);
    for (double p : {1.0, 2.0}) expect(norm_m(pf, k.m, p) <= norm_m(f, k.m, p) + 1e-12);
    expect(norm_m(pf, k.m, std::numeric_limits<double>::infinity()) <=
           norm_m(f, k.m, std::numeric_limits<double>::infinity()) + 1e-12);
    // forms: two routes agree; E* <= 2E; E <= 2||f||^2
    auto forms = dirichlet_forms(k, f);
    expect(std::abs(forms.e_quad - forms.e_inner) <= 1e-11 * std::max(1.0, forms.e_quad));
    expect(forms.e_star <= 2 * forms.e_inner + 1e-11);
    expect(forms.e_inner <= 2 * inner_m(f, f, k.m) + 1e-11);
    // E*(f,f) = ||f||^2 - ||Pf||^2 route
    double e_star2 = inner_m(f, f, k.m) - inner_m(pf, pf, k.m);
    expect(std::abs(forms.e_star - e_star2) <= 1e-11 * std::max(1.0, std::abs(e_star2)));
    // integration by parts
    std::vector<double> g2(n);
    for (auto& v : g2) v = rng.gaussian();
    expect(integration_by_parts_check(k, f, g2) <= 1e-10);
    // dense matrix-power cross-check at n = 5
    auto dm = DenseModel(k).power(5);
    auto p5b = iterate(k, 5, x).density;
    for (int i = 0; i < n; ++i) expect(std::abs(dm(x, i) - p5b[i]) <= 1e-12);
  }

  // bipartite counterexample, exact
  {
    SpaceSpec bs;
    bs.kind = SpaceKind::bipartite;
    bs.part_a = 1;
    bs.part_b = 1;
    auto sp = std::make_shared<Space>(Space::build(bs));
    Kernel k = srw(sp);
    std::vector<double> f{1.0, -1.0};
    auto forms = dirichlet_forms(k, f);
    expect(forms.e_inner == 4.0);
    expect(forms.e_star == 0.0);
    Outcome o;
    o.name = "bipartite-counterexample";
    o.pass = forms.e_inner == 4.0 && forms.e_star == 0.0;
    o.stats["E"] = forms.e_inner;
    o.stats["E_star"] = forms.e_star;
    out.push_back(o);
  }

  // positivity of (P - alpha/2)^2 and the h_k binomial identity on a lattice ball walk
  {
    SpaceSpec ls;
    ls.kind = SpaceKind::lattice;
    ls.side = 31;
    ls.lattice_dim = 1;
    auto sp = std::make_shared<Space>(Space::build(ls));
    Kernel k = ball_walk(sp, 1.0);
    auto audit = audit_compat(k, 1.0, 1.0);
    expect(audit.pass());
    double beta = audit.alpha_hat / 2.0;
    Rng rng = Rng::substream(seed, 7);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> f(k.size());
      for (auto& v : f) v = std::abs(rng.gaussian());
      auto pf = k.apply(f);
      auto ppf = k.apply(pf);
      for (int i = 0; i < k.size(); ++i) {
        double val = ppf[i] - 2 * beta * pf[i] + beta * beta * f[i];
        expect(val >= -1e-12);
      }
    }
    // h_n row vs binomial sum, n <= 12
    int x = k.size() / 2;
    for (int nsteps : {0, 3, 8, 12}) {
      auto h = hk_row(k, nsteps, x).density;
      std::vector<double> acc(k.size(), 0.0);
      auto prow = iterate(k, 2, x).density;
      std::vector<double> tmp(k.size());
      for (int i = 0; i <= nsteps; ++i) {
        double coef = binom(nsteps, i) * std::pow(0.5, nsteps);
        for (int j = 0; j < k.size(); ++j) acc[j] += coef * prow[j];
        if (i < nsteps) {
          k.apply(prow.data(), tmp.data());
          prow.swap(tmp);
        }
      }
      for (int j = 0; j < k.size(); ++j) expect(std::abs(h[j] - acc[j]) <= 1e-10);
    }
    // h_{2n} >= c3 p_{n+1} with a positive constant (e-gu8 shape)
    double worst = std::numeric_limits<double>::infinity();
    for (int nn : {4, 8, 15}) {
      auto h2n = hk_row(k, 2 * nn, x).density;
      auto pn1 = iterate(k, nn + 1, x).density;
      for (int j = 0; j < k.size(); ++j)
        if (pn1[j] > 1e-14) worst = std::min(worst, h2n[j] / pn1[j]);
    }
    expect(worst > 0);
    Outcome o;
    o.name = "hk-comparison";
    o.pass = worst > 0;
    o.stats["worst_ratio"] = worst;
    out.push_back(o);
  }

  // polynomial identities, floating route
  {
    auto pc = verify_poly_identities(20, 500, seed + 3);
    Outcome o;
    o.name = "polynomial-identities";
    o.pass = pc.pass;
    o.stats["max_rel_residual"] = pc.max_rel_residual;
    out.push_back(o);
    expect(pc.pass);
  }

  Outcome lemma;
  lemma.name = "kernel-lemma-suite";
  lemma.pass = violations == 0 && checks >= 10000;
  lemma.stats["checks"] = static_cast<double>(checks);
  lemma.stats["violations"] = static_cast<double>(violations);
  lemma.stats["seconds"] = now_seconds() - t0;
  out.push_back(lemma);
  return out;
}

std::vector<Outcome> paper_examples(uint64_t seed) {
  std::vector<Outcome> out;

  // broken line Poincare threshold
  {
    double t0 = now_seconds();
    SpaceSpec bs;
    bs.kind = SpaceKind::broken_line;
    bs.window = 5.25;
    bs.rho = 0.05;
    auto sp = std::make_shared<Space>(Space::build(bs));
    int center = sp->nearest_point({0.0});
    bool ok = true;
    Outcome o;
    o.name = "broken-line-poincare-threshold";
    for (double h : {0.3, 0.4, 0.5}) {
      auto res = poincare_constant(*sp, h, center, 2.5, 2.0);
      ok = ok && res.degenerate && std::isinf(res.c_p);
      o.stats["h" + std::to_string(h).substr(0, 4)] =
          std::isinf(res.c_p) ? -1.0 : res.c_p;
    }
    for (double h : {0.6, 0.75, 1.0}) {
      auto res = poincare_constant(*sp, h, center, 2.5, 2.0);
      ok = ok && !res.degenerate && std::isfinite(res.c_p);
      o.stats["h" + std::to_string(h).substr(0, 4)] = res.c_p;
    }
    o.stats["seconds"] = now_seconds() - t0;
    o.pass = ok && (now_seconds() - t0) < 60.0;
    out.push_back(o);
  }

  // ball walk on the broken line never crosses gaps at h <= 1/2
  {
    SpaceSpec bs;
    bs.kind = SpaceKind::broken_line;
    bs.window = 3.25;
    bs.rho = 0.05;
    auto sp = std::make_shared<Space>(Space::build(bs));
    Kernel k = ball_walk(sp, 0.4);
    int x = sp->nearest_point({0.0});
    auto row = iterate(k, 60, x).density;
    double leak = 0;
    for (int i = 0; i < sp->size(); ++i)
      if (std::abs(sp->coord(i, 0)) > 0.3) leak += std::abs(row[i]);
    Outcome o;
    o.name = "broken-line-component-confinement";
    o.pass = leak == 0.0;
    o.stats["leak"] = leak;
    out.push_back(o);
  }

  // radial-weight recurrence thresholds (n = 1)
  {
    double t0 = now_seconds();
    Outcome o;
    o.name = "radial-recurrence-thresholds";
    bool ok = true;
    struct Case {
      double alpha;
      RecurrenceVerdict want;
    } cases[] = {{0.8, RecurrenceVerdict::Transient},
                 {0.0, RecurrenceVerdict::Recurrent},
                 {-0.8, RecurrenceVerdict::Recurrent}};
    for (auto& c : cases) {
      SpaceSpec rs;
      rs.kind = SpaceKind::euclidean_radial;
      rs.dim = 1;
      rs.alpha = c.alpha;
      rs.window = 30;
      rs.rho = 0.25;
      auto sp = std::make_shared<Space>(Space::build(rs));
      Kernel k = ball_walk(sp, 1.0);
      auto rep = classify_recurrence(k, sp->nearest_point({0.0}), 1e4);
      ok = ok && rep.verdict == c.want;
      o.stats["beta(alpha=" + std::to_string(c.alpha).substr(0, 4) + ")"] = rep.beta_hat;
    }
    o.stats["seconds"] = now_seconds() - t0;
    o.pass = ok && (now_seconds() - t0) < 10.0;
    out.push_back(o);
  }

  // annulus walk: p_1 fails compatibility, p_2 is weakly compatible near the diagonal
  {
    SpaceSpec rs;
    rs.kind = SpaceKind::euclidean_radial;
    rs.dim = 1;
    rs.alpha = 0.0;
    rs.window = 20;
    rs.rho = 0.2;
    auto sp = std::make_shared<Space>(Space::build(rs));
    Kernel k = annulus_walk(sp, 1.0, 1.0, 2.0);
    auto audit = audit_compat(k, 1.0, 2.0);
    bool p1_fails = audit.c1_hat == 0.0 && !audit.pass();
    // p2 near-diagonal positivity on an interior point
    int x = sp->nearest_point({0.0});
    auto p2row = iterate(k, 2, x).density;
    bool p2_near_diag = p2row[x] > 0;
    sp->for_each_in_ball(x, 0.2, [&](int j, double) { p2_near_diag &= p2row[j] > 0; });
    bool p1_diag_zero = k.entry(x, x) == 0.0;
    Outcome o;
    o.name = "annulus-walk-compatibility";
    o.pass = p1_fails && p2_near_diag && p1_diag_zero;
    o.stats["c1_hat"] = audit.c1_hat;
    o.stats["p2_diag"] = p2row[x];
    out.push_back(o);
  }

  (void)seed;
  return out;
}

std::vector<Outcome> lattice2d_gaussian(uint64_t seed) {
  double t0 = now_seconds();
  SpaceSpec ls;
  ls.kind = SpaceKind::lattice;
  ls.side = 101;
  ls.lattice_dim = 2;
  auto sp = std::make_shared<Space>(Space::build(ls));
  Kernel k = lazy(ball_walk(sp, 1.0));
  int c = sp->nearest_point({50, 50});
  std::vector<int> centers{c, sp->nearest_point({42, 50}), sp->nearest_point({58, 50}),
                           sp->nearest_point({50, 42}), sp->nearest_point({50, 58})};
  auto fit = gaussian_fit(k, centers, 64, 256, 2.0, 40000);
  Outcome o;
  o.name = "lattice2d-gaussian-two-sided";
  o.stats["rho_min"] = fit.rho_min;
  o.stats["rho_max"] = fit.rho_max;
  o.stats["spread"] = fit.residual_spread;
  o.stats["C2_upper"] = fit.c2_upper;
  o.stats["c2_lower"] = fit.c2_lower;
  o.stats["seconds"] = now_seconds() - t0;
  o.pass = fit.rho_min >= 0.05 && fit.rho_max <= 20.0 && fit.residual_spread <= 2.0 &&
           (now_seconds() - t0) < 300.0;
  (void)seed;
  return {o};
}

std::vector<Outcome> harnack_battery(uint64_t seed) {
  std::vector<Outcome> out;
  SpaceSpec ls;
  ls.kind = SpaceKind::lattice;
  ls.side = 101;
  ls.lattice_dim = 2;
  auto sp = std::make_shared<Space>(Space::build(ls));
  Kernel k = lazy(ball_walk(sp, 1.0));
  int c = sp->nearest_point({50, 50});
  {
    auto e16 = elliptic_harnack(k, c, 16, 0.25, 20, seed);
    auto e32 = elliptic_harnack(k, c, 32, 0.25, 20, seed);
    Outcome o;
    o.name = "elliptic-harnack-stability";
    o.stats["c16"] = e16.c_hat;
    o.stats["c32"] = e32.c_hat;
    double ratio = std::max(e16.c_hat / e32.c_hat, e32.c_hat / e16.c_hat);
    o.stats["ratio"] = ratio;
    o.pass = std::isfinite(e16.c_hat) && std::isfinite(e32.c_hat) && ratio <= 2.0 &&
             !e16.phi_fail && !e32.phi_fail;
    out.push_back(o);
  }
  {
    auto h16 = parabolic_harnack(k, c, 16, 0.25, 20, seed);
    auto h32 = parabolic_harnack(k, c, 32, 0.25, 20, seed);
    Outcome o;
    o.name = "parabolic-harnack-stability";
    o.stats["c16"] = h16.c_hat;
    o.stats["c32"] = h32.c_hat;
    double ratio = std::max(h16.c_hat / h32.c_hat, h32.c_hat / h16.c_hat);
    o.stats["ratio"] = ratio;
    o.pass = std::isfinite(h16.c_hat) && std::isfinite(h32.c_hat) && ratio <= 2.0 &&
             !h16.phi_fail && !h32.phi_fail;
    out.push_back(o);
  }
  {
    // parity witness: non-lazy nearest-neighbour walk on the 1-D lattice
    SpaceSpec ps;
    ps.kind = SpaceKind::lattice;
    ps.side = 201;
    ps.lattice_dim = 1;
    auto psp = std::make_shared<Space>(Space::build(ps));
    Kernel ksrw = srw(psp);
    auto rep = parabolic_harnack(ksrw, psp->nearest_point({100}), 16, 0.25, 5, seed);
    Outcome o;
    o.name = "parity-phi-fail-witness";
    o.pass = rep.phi_fail;
    out.push_back(o);
  }
  return out;
}

std::vector<Outcome> tree_negative_control(uint64_t seed) {
  std::vector<Outcome> out;
  SpaceSpec ts;
  ts.kind = SpaceKind::tree;
  ts.degree = 3;
  ts.depth = 12;
  auto sp = std::make_shared<Space>(Space::build(ts));
  {
    auto prof = doubling_profile(*sp, {0}, {2, 4, 6});
    auto rd = reverse_doubling(*sp, {0}, {2, 4, 6}, 1.0);
    auto verdict = vd_inf_verdict(prof, rd);
    Outcome o;
    o.name = "tree-doubling-fails";
    o.pass = verdict.verdict == Verdict::FAIL;
    o.stats["cd_max"] = prof.rows.back().cd;
    o.stats["cd_slope"] = prof.cd_loglog_slope;
    o.note = verdict.reason;
    out.push_back(o);
  }
  {
    Kernel k = srw(sp);
    auto prof = on_diagonal_profile(k, {0}, 4, 36, 2.0);
    double first = 0, last = 0;
    for (size_t i = 0; i < prof.ns.size(); ++i) {
      if (prof.ns[i] % 2 != 0) continue;  // bipartite parity
      if (first == 0) first = prof.rho[i];
      last = prof.rho[i];
    }
    Outcome o;
    o.name = "tree-on-diagonal-decay";
    o.stats["rho_first"] = first;
    o.stats["rho_last"] = last;
    o.stats["decay_factor"] = first > 0 ? first / last : 0.0;
    o.pass = first > 0 && last < first / 10.0;
    out.push_back(o);
  }
  (void)seed;
  return out;
}

std::vector<Outcome> net_certification(uint64_t seed) {
  std::vector<Outcome> out;
  SpaceSpec ls;
  ls.kind = SpaceKind::lattice;
  ls.side = 101;
  ls.lattice_dim = 2;
  auto sp = std::make_shared<Space>(Space::build(ls));
  Net net = build_net(sp, 2.0);
  auto audit = audit_net(net, 2000, 4.0, seed);
  Outcome o;
  o.name = "net-certification";
  o.stats["vertices"] = net.size();
  o.stats["max_degree"] = audit.max_degree;
  o.stats["a_hat"] = audit.a_hat;
  bool metric_lower_ok = true;
  // d <= 3 eps d_G on all pairs
  for (int i = 0; i < net.size() && metric_lower_ok; ++i) {
    auto dg = net.dg_from(i);
    for (int j = 0; j < net.size(); ++j) {
      if (i == j) continue;
      double d = sp->metric(net.vertices[i], net.vertices[j]);
      if (std::isfinite(dg[j]) && d > 3 * net.eps * dg[j] + 1e-12) {
        metric_lower_ok = false;
        break;
      }
    }
  }
  // partition of unity, exact
  std::vector<double> ones(net.size(), 1.0);
  auto lifted = from_net(net, ones);
  bool pu_ok = std::all_of(lifted.begin(), lifted.end(), [](double v) { return v == 1.0; });
  o.pass = net.size() >= 500 && audit.structural_pass() && audit.connected &&
           metric_lower_ok && pu_ok;
  o.stats["structural"] = audit.structural_pass() ? 1.0 : 0.0;
  out.push_back(o);
  return out;
}

std::vector<Outcome> balayage_battery(uint64_t seed) {
  SpaceSpec ls;
  ls.kind = SpaceKind::lattice;
  ls.side = 201;
  ls.lattice_dim = 1;
  auto sp = std::make_shared<Space>(Space::build(ls));
  Kernel k = ball_walk(sp, 1.0);
  int c = sp->nearest_point({100});
  Outcome o;
  o.name = "balayage-reconstruction";
  double worst_res = 0, worst_v = 0;
  bool ok = true;
  for (int t = 0; t < 20; ++t) {
    Rng rng = Rng::substream(seed, 400 + t);
    std::vector<double> u0(k.size(), 0.0);
    std::vector<int> allowed = sp->ball(c, 8);
    for (int s = 0; s < 3; ++s) u0[allowed[rng.below(allowed.size())]] += rng.uniform();
    auto u = evolve_caloric(k, u0, 81);
    auto res = balayage(k, c, 30, 10, u, 0, 80);
    worst_res = std::max(worst_res, res.reconstruction_residual);
    worst_v = std::min(worst_v, res.min_v);
    ok = ok && res.reconstruction_residual <= 1e-10 && res.min_v >= -1e-14;
  }
  o.pass = ok;
  o.stats["worst_residual"] = worst_res;
  o.stats["worst_min_v"] = worst_v;
  return {o};
}

std::vector<Outcome> caccioppoli_imp_battery(uint64_t seed) {
  std::vector<Outcome> out;
  SpaceSpec ls;
  ls.kind = SpaceKind::lattice;
  ls.side = 101;
  ls.lattice_dim = 1;
  auto sp = std::make_shared<Space>(Space::build(ls));
  Kernel k = ball_walk(sp, 1.0);
  int c = sp->nearest_point({50});
  {
    Outcome o;
    o.name = "caccioppoli-lazy-subcaloric";
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::vector<double> psi(k.size(), 0.0);
    sp->for_each_in_ball(c, 20, [&](int j, double d) { psi[j] = 1.0 - d / 20.0; });
    for (int t = 0; t < 20; ++t) {
      Rng rng = Rng::substream(seed, 500 + t);
      std::vector<double> v0(k.size(), 0.0);
      sp->for_each_in_ball(c, 30, [&](int j, double) { v0[j] = rng.gaussian(); });
      auto res = caccioppoli_check(k, v0, psi, 50, true);
      worst = std::min(worst, res.min_residual);
      ok = ok && res.pass;
    }
    o.pass = ok;
    o.stats["worst_residual"] = worst;
    out.push_back(o);
  }
  {
    Outcome o;
    o.name = "imp-sigma-r-weight";
    std::vector<double> u0(k.size(), 0.0);
    u0[c] = 1.0;
    auto dist = sp->distances_from(c);
    std::vector<double> sigma(k.size());
    for (int i = 0; i < k.size(); ++i) sigma[i] = std::max(20.0 - dist[i], 0.0) + k.hp;
    double D = find_min_d(k, u0, sigma, 30);
    auto res = imp_check(k, u0, sigma, D, 30);
    auto tiny = imp_check(k, u0, sigma, 0.01, 30);
    o.pass = res.label == ImpLabel::PASS && tiny.label == ImpLabel::CONDITION_VIOLATED;
    o.stats["D"] = D;
    out.push_back(o);
  }
  {
    // the deliberate non-lazy run must violate the Caccioppoli inequality
    SpaceSpec bs;
    bs.kind = SpaceKind::bipartite;
    bs.part_a = 1;
    bs.part_b = 1;
    auto bsp = std::make_shared<Space>(Space::build(bs));
    Kernel k2 = srw(bsp);
    Outcome o;
    o.name = "caccioppoli-nonlazy-violation";
    bool found = false;
    double neg = 0;
    for (int t = 0; t < 200 && !found; ++t) {
      Rng rng = Rng::substream(seed, 600 + t);
      std::vector<double> v0{rng.uniform(), rng.uniform()};
      std::vector<double> psi{0.5 + rng.uniform(), 0.5 + rng.uniform()};
      auto res = caccioppoli_check(k2, v0, psi, 2, false);
      if (res.min_residual < -1e-10) {
        found = true;
        neg = res.min_residual;
      }
    }
    o.pass = found;
    o.stats["violation"] = neg;
    out.push_back(o);
  }
  return out;
}

std::vector<Outcome> consistency_checks(uint64_t seed) {
  std::vector<Outcome> out;
  SpaceSpec ls;
  ls.kind = SpaceKind::lattice;
  ls.side = 41;
  ls.lattice_dim = 2;
  auto sp = std::make_shared<Space>(Space::build(ls));
  Kernel k = lazy(ball_walk(sp, 1.0));
  int c = sp->nearest_point({20, 20});
  auto phi = parabolic_harnack(k, c, 12, 0.25, 10, seed);
  auto dp = doubling_profile(*sp, {c}, {2, 4, 8});
  auto rd = reverse_doubling(*sp, {c}, {2, 4, 8}, 1.0);
  auto vd = vd_inf_verdict(dp, rd);
  auto poin = poincare_constant(*sp, 1.0, c, 6, 2.0);
  {
    Outcome o;
    o.name = "phi-implies-doubling-poincare";
    o.pass = !phi.phi_fail && std::isfinite(phi.c_hat) && vd.verdict == Verdict::PASS &&
             !poin.degenerate && std::isfinite(poin.c_p);
    o.stats["phi_c"] = phi.c_hat;
    o.stats["poincare_c"] = poin.c_p;
    out.push_back(o);
  }
  {
    auto dk6 = restrict_to_ball(k, c, 6);
    auto dk12 = restrict_to_ball(k, c, 12);
    auto s6 = sobolev_probe(dk6, 2.1, 120, seed);
    auto s12 = sobolev_probe(dk12, 2.1, 120, seed);
    double ratio = std::max(s6.observed / s12.observed, s12.observed / s6.observed);
    Outcome o;
    o.name = "sobolev-scale-stability-implies-doubling";
    o.pass = ratio <= 3.0 && vd.verdict == Verdict::PASS;
    o.stats["cs6"] = s6.observed;
    o.stats["cs12"] = s12.observed;
    o.stats["ratio"] = ratio;
    out.push_back(o);
  }
  {
    // contrapositive probe on the tree: Sobolev constant grows with r
    SpaceSpec ts;
    ts.kind = SpaceKind::tree;
    ts.degree = 3;
    ts.depth = 10;
    auto tsp = std::make_shared<Space>(Space::build(ts));
    Kernel tk = lazy(srw(tsp));
    auto d3 = restrict_to_ball(tk, 0, 3);
    auto d6 = restrict_to_ball(tk, 0, 6);
    auto s3 = sobolev_probe(d3, 2.1, 120, seed);
    auto s6 = sobolev_probe(d6, 2.1, 120, seed);
    Outcome o;
    o.name = "tree-sobolev-grows";
    o.pass = s6.observed > 1.2 * s3.observed;
    o.stats["cs3"] = s3.observed;
    o.stats["cs6"] = s6.observed;
    out.push_back(o);
  }
  return out;
}

}  // namespace heatlab::battery
