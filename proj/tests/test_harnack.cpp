#include <doctest.h>

#include <cmath>

#include "heatlab/harnack.hpp"
#include "heatlab/rng.hpp"

using namespace heatlab;

namespace {

std::shared_ptr<Space> lattice(int side, int dim) {
  SpaceSpec s;
  s.kind = SpaceKind::lattice;
  s.side = side;
  s.lattice_dim = dim;
  return std::make_shared<Space>(Space::build(s));
}

std::shared_ptr<Space> cycle(int n) {
  SpaceSpec s;
  s.kind = SpaceKind::custom_graph;
  s.n_vertices = n;
  for (int i = 0; i < n; ++i) s.edge_list.emplace_back(i, (i + 1) % n);
  return std::make_shared<Space>(Space::build(s));
}

}  // namespace

TEST_CASE("harmonic solver") {
  SUBCASE("constants are harmonic, residual zero") {
    auto sp = lattice(41, 1);
    Kernel k = ball_walk(sp, 1.0);
    std::vector<double> g(k.size(), 1.0);
    auto sol = solve_harmonic(k, 20, 8.0, g);
    for (int p : sol.interior) CHECK(sol.u[p] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.residual <= 1e-10);
  }
  SUBCASE("gambler's ruin on the path") {
    auto sp = lattice(11, 1);
    Kernel k = srw(sp);
    std::vector<double> g(k.size(), 0.0);
    g[10] = 1.0;
    auto sol = solve_harmonic(k, 5, 4.0, g);  // interior {1..9}, layer {0,10}
    for (int i = 1; i <= 9; ++i) CHECK(sol.u[i] == doctest::Approx(i / 10.0).epsilon(1e-10));
    CHECK(sol.residual <= 1e-10);
  }
  SUBCASE("maximum principle and spike positivity") {
    auto sp = lattice(41, 1);
    Kernel k = ball_walk(sp, 1.0);
    std::vector<double> g(k.size(), 0.0);
    auto probe = solve_harmonic(k, 20, 10.0, g);
    REQUIRE(!probe.layer.empty());
    g[probe.layer.front()] = 2.5;
    auto sol = solve_harmonic(k, 20, 10.0, g);
    for (int p : sol.interior) {
      CHECK(sol.u[p] > 0.0);
      CHECK(sol.u[p] <= 2.5 + 1e-12);
    }
  }
  SUBCASE("local Harnack comparability on nearby points") {
    auto sp = lattice(81, 1);
    Kernel k = ball_walk(sp, 1.0);
    std::vector<double> g(k.size(), 0.0);
    auto probe = solve_harmonic(k, 40, 20.0, g);
    g[probe.layer.front()] = 1.0;
    auto sol = solve_harmonic(k, 40, 20.0, g);
    double worst = 0;
    for (int y = 30; y <= 50; ++y)
      worst = std::max(worst, sol.u[y] / sol.u[y + 1]);
    CHECK(worst > 0);
    CHECK(worst < 1e3);
  }
}

TEST_CASE("elliptic Harnack report") {
  auto sp = lattice(81, 1);
  Kernel k = ball_walk(sp, 1.0);
  auto rep = elliptic_harnack(k, 40, 16.0, 0.25, 10, 21);
  CHECK(!rep.phi_fail);
  CHECK(rep.c_hat >= 1.0);
  CHECK(std::isfinite(rep.c_hat));
  SUBCASE("ratio is exactly scale invariant") {
    std::vector<double> g(k.size(), 0.0);
    auto probe = solve_harmonic(k, 40, 16.0, g);
    g[probe.layer.front()] = 1.0;
    g[probe.layer.back()] = 0.25;
    auto sol1 = solve_harmonic(k, 40, 16.0, g);
    for (auto& v : g) v *= 4.0;
    auto sol2 = solve_harmonic(k, 40, 16.0, g);
    double s1 = -1e300, i1 = 1e300, s2 = -1e300, i2 = 1e300;
    sp->for_each_in_ball(40, 4.0, [&](int j, double) {
      s1 = std::max(s1, sol1.u[j]);
      i1 = std::min(i1, sol1.u[j]);
      s2 = std::max(s2, sol2.u[j]);
      i2 = std::min(i2, sol2.u[j]);
    });
    CHECK(s1 / i1 == s2 / i2);
  }
}

TEST_CASE("caloric evolution conserves mass on boundary-free graphs") {
  auto sp = cycle(30);
  Kernel k = srw(sp);
  Rng rng(4);
  std::vector<double> u0(k.size());
  for (auto& v : u0) v = std::abs(rng.gaussian());
  auto u = evolve_caloric(k, u0, 50);
  double m0 = 0;
  for (int i = 0; i < k.size(); ++i) m0 += u0[i] * k.m[i];
  for (int kk = 1; kk <= 50; ++kk) {
    double mk = 0;
    for (int i = 0; i < k.size(); ++i) mk += u[kk][i] * k.m[i];
    CHECK(std::abs(mk - m0) <= kk * 1e-12 * std::max(1.0, m0));
  }
}

TEST_CASE("parabolic Harnack") {
  SUBCASE("finite and stable on the 1-D lazy ball walk") {
    auto sp = lattice(301, 1);
    Kernel k = lazy(ball_walk(sp, 1.0));
    int c = 150;
    auto r24 = parabolic_harnack(k, c, 24, 0.25, 10, 31);
    auto r48 = parabolic_harnack(k, c, 48, 0.25, 10, 31);
    CHECK(!r24.phi_fail);
    CHECK(!r48.phi_fail);
    double ratio = std::max(r24.c_hat / r48.c_hat, r48.c_hat / r24.c_hat);
    CHECK(ratio <= 2.0);
  }
  SUBCASE("constant data gives ratio 1") {
    auto sp = lattice(101, 1);
    Kernel k = lazy(ball_walk(sp, 1.0));
    std::vector<double> u0(k.size(), 1.0);
    auto u = evolve_caloric(k, u0, 40);
    for (auto& slice : u)
      for (int i = 30; i <= 70; ++i) CHECK(slice[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("non-lazy parity gives a PHI-FAIL witness") {
    auto sp = lattice(201, 1);
    Kernel k = srw(sp);
    auto rep = parabolic_harnack(k, 100, 16, 0.25, 5, 32);
    CHECK(rep.phi_fail);
  }
}

TEST_CASE("Holder oscillation decay") {
  SUBCASE("constant solution has zero oscillation") {
    auto sp = lattice(41, 1);
    Kernel k = ball_walk(sp, 1.0);
    std::vector<double> u(k.size(), 5.0);
    auto res = holder_oscillation(k, u, 20, {8, 4, 2}, 3.0);
    for (double o : res.osc) CHECK(o == 0.0);
  }
  SUBCASE("linear profile halves its oscillation with the radius") {
    auto sp = lattice(41, 1);
    Kernel k = srw(sp);
    std::vector<double> u(k.size());
    for (int i = 0; i < k.size(); ++i) u[i] = i / 40.0;
    auto res = holder_oscillation(k, u, 20, {16, 8, 4, 2}, 3.0);
    CHECK(res.rho_hat == doctest::Approx(0.5).epsilon(0.01));
    CHECK(res.pass);  // 0.5 <= (3-1)/(3+1) + 0.1
  }
}

TEST_CASE("reverse Poincare for harmonic functions") {
  auto sp = lattice(81, 1);
  Kernel k = srw(sp);
  SUBCASE("constants give zero") {
    std::vector<double> u(k.size(), 1.0);
    CHECK(reverse_poincare_check(k, u, 40, 8.0, 2.0) == 0.0);
  }
  SUBCASE("gambler's ruin ratio matches the closed-form sums") {
    std::vector<double> u(k.size());
    for (int i = 0; i < k.size(); ++i) u[i] = static_cast<double>(i);
    double r10 = reverse_poincare_check(k, u, 40, 10.0, 2.0);
    // srw on the path: |grad_P u|^2 m = 2 at interior points, den = r^-2 sum i^2 m
    double num = 0;
    for (int i = 30; i <= 50; ++i) num += grad_p_squared(k, u, i) * k.m[i];
    double den = 0;
    for (int i = 20; i <= 60; ++i) den += double(i) * i * k.m[i];
    den /= 100.0;
    CHECK(r10 == doctest::Approx(num / den).epsilon(1e-12));
    CHECK(std::isfinite(r10));
    CHECK(r10 > 0);
  }
  SUBCASE("trial maxima are stable across radii on the 2-D window") {
    SpaceSpec ls2;
    ls2.kind = SpaceKind::lattice;
    ls2.side = 61;
    ls2.lattice_dim = 2;
    auto sp2 = std::make_shared<Space>(Space::build(ls2));
    Kernel k2 = ball_walk(sp2, 1.0);
    int c2 = sp2->nearest_point({30, 30});
    double max10 = 0, max20 = 0;
    for (int t = 0; t < 12; ++t) {
      Rng rng = Rng::substream(99, t);
      std::vector<double> g(k2.size(), 0.0);
      auto probe = solve_harmonic(k2, c2, 21.0, g);
      for (int s = 0; s < 3; ++s)
        g[probe.layer[rng.below(probe.layer.size())]] += std::exp(rng.gaussian());
      auto sol = solve_harmonic(k2, c2, 21.0, g);
      max10 = std::max(max10, reverse_poincare_check(k2, sol.u, c2, 5.0, 2.0));
      max20 = std::max(max20, reverse_poincare_check(k2, sol.u, c2, 10.0, 2.0));
    }
    double ratio = std::max(max10 / max20, max20 / max10);
    CHECK(ratio <= 2.0);
  }
  SUBCASE("precondition r > 3h'/(Omega-1)") {
    std::vector<double> u(k.size(), 1.0);
    CHECK_THROWS_AS(reverse_poincare_check(k, u, 40, 1.0, 1.5), HarnackError);
  }
}

TEST_CASE("balayage") {
  auto sp = lattice(201, 1);
  Kernel k = ball_walk(sp, 1.0);
  int c = 100;
  SUBCASE("no sweep when mass stays inside") {
    std::vector<double> u0(k.size(), 0.0);
    u0[c] = 1.0;
    auto u = evolve_caloric(k, u0, 6);  // support radius 5 < r1 = 10
    auto res = balayage(k, c, 30, 10, u, 0, 5);
    CHECK(res.min_v == 0.0);
    for (auto& slice : res.v)
      for (double v : slice) CHECK(v == 0.0);
    CHECK(res.reconstruction_residual <= 1e-12);
  }
  SUBCASE("point mass over a long horizon reconstructs") {
    std::vector<double> u0(k.size(), 0.0);
    u0[c] = 1.0 / k.m[c];
    auto u = evolve_caloric(k, u0, 81);
    auto res = balayage(k, c, 30, 10, u, 0, 80);
    CHECK(res.reconstruction_residual <= 1e-10);
    CHECK(res.min_v >= -1e-14);
  }
  SUBCASE("geometry violations are rejected") {
    std::vector<double> u0(k.size(), 0.0);
    u0[c] = 1.0;
    auto u = evolve_caloric(k, u0, 10);
    CHECK_THROWS_AS(balayage(k, c, 10, 10, u, 0, 9), HarnackError);
  }
}

TEST_CASE("gaussian fit admissibility and profile") {
  auto sp = lattice(41, 2);
  Kernel k = lazy(ball_walk(sp, 1.0));
  int c = sp->nearest_point({20, 20});
  auto fit = gaussian_fit(k, {c}, 16, 36, 2.0, 5000);
  SUBCASE("no admitted sample touches the boundary guard") {
    for (auto& s : fit.samples) {
      CHECK(sp->margin(s.x) >= s.d + 2.0 * std::sqrt(static_cast<double>(s.n)) - 1e-9);
      CHECK(s.p > 0.0);  // zero-support pairs are excluded
    }
  }
  SUBCASE("on-diagonal ratio is order one") {
    CHECK(fit.rho_min >= 0.05);
    CHECK(fit.rho_max <= 20.0);
  }
  SUBCASE("finite speed: p_n vanishes beyond n h'") {
    auto row = iterate(k, 5, c).density;
    for (int y = 0; y < k.size(); ++y)
      if (sp->metric(c, y) > 5.0) CHECK(row[y] == 0.0);
  }
}

TEST_CASE("E_D profile") {
  auto sp = lattice(101, 1);
  Kernel k = lazy(ball_walk(sp, 1.0));
  int c = 50;
  SUBCASE("huge D reduces to the squared L2 norm of h_k") {
    auto prof = ed_profile(k, c, 1e9, 6, 2.0);
    for (size_t i = 0; i < prof.ks.size(); ++i) {
      auto h = hk_row(k, prof.ks[i], c).density;
      double l2 = 0;
      for (int z = 0; z < k.size(); ++z) l2 += h[z] * h[z] * k.m[z];
      CHECK(prof.ed[i] == doctest::Approx(l2).epsilon(1e-6));
    }
  }
  SUBCASE("moderate D stays bounded, tiny D blows up") {
    auto good = ed_profile(k, c, 8.0, 24, 2.0);
    CHECK(good.pass);
    auto bad = ed_profile(k, c, 0.05, 24, 2.0);
    CHECK(!bad.pass);
  }
}

TEST_CASE("recurrence classification on radial weights") {
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
    CHECK(rep.verdict == c.want);
    CHECK(rep.analytic_volume);
  }
}
