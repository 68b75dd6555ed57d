#include <doctest.h>

#include <cmath>

#include "heatlab/space.hpp"

using namespace heatlab;

namespace {

std::shared_ptr<Space> broken_line(double W, double rho) {
  SpaceSpec s;
  s.kind = SpaceKind::broken_line;
  s.window = W;
  s.rho = rho;
  return std::make_shared<Space>(Space::build(s));
}

std::shared_ptr<Space> lattice(int side, int dim) {
  SpaceSpec s;
  s.kind = SpaceKind::lattice;
  s.side = side;
  s.lattice_dim = dim;
  return std::make_shared<Space>(Space::build(s));
}

std::shared_ptr<Space> radial(double alpha, double W, double rho) {
  SpaceSpec s;
  s.kind = SpaceKind::euclidean_radial;
  s.dim = 1;
  s.alpha = alpha;
  s.window = W;
  s.rho = rho;
  return std::make_shared<Space>(Space::build(s));
}

}  // namespace

TEST_CASE("broken line grid covers the components") {
  auto sp = broken_line(5.25, 0.05);
  // every point sits in some [n-1/4, n+1/4], components n = -5..5
  int seen_components = 0;
  double prev = -100;
  for (int i = 0; i < sp->size(); ++i) {
    double x = sp->coord(i, 0);
    double n = std::round(x);
    CHECK(std::abs(x - n) <= 0.25);
    CHECK(std::abs(n) <= 5);
    if (x - prev > 0.4) ++seen_components;
    prev = x;
  }
  CHECK(seen_components == 11);
  // components are separated by gaps of about 1/2 (0.55 between cell centers)
  double min_gap = 100;
  for (int i = 1; i < sp->size(); ++i) {
    double g = sp->coord(i, 0) - sp->coord(i - 1, 0);
    if (g > 0.4) min_gap = std::min(min_gap, g);
  }
  CHECK(min_gap == doctest::Approx(0.55).epsilon(1e-9));
}

TEST_CASE("lattice path basics") {
  auto sp = lattice(3, 1);
  CHECK(sp->size() == 3);
  CHECK(sp->mass(0) == 1.0);
  CHECK(sp->metric(0, 2) == 2.0);
  CHECK(ball_volume(*sp, 1, 1.0) == 3.0);
}

TEST_CASE("radial grid masses at alpha=0 equal rho") {
  auto sp = radial(0.0, 10.0, 0.1);
  for (int i = 0; i < sp->size(); ++i) CHECK(sp->mass(i) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("broken line ball volume near 0.55") {
  auto sp = broken_line(5.25, 0.05);
  int c = sp->nearest_point({0.0});
  double v = ball_volume(*sp, c, 0.25);
  CHECK(v >= 0.55 - 0.05 - 1e-12);
  CHECK(v <= 0.55 + 0.05 + 1e-12);
}

TEST_CASE("radial exact-integral mode agrees with the grid sum") {
  double rho = 0.05;
  auto sp = radial(2.0, 10.0, rho);
  int c = sp->nearest_point({0.0});
  for (double r : {0.5, 1.0, 2.0}) {
    double exact = ball_volume_exact(*sp, 0.0, r);
    CHECK(exact == doctest::Approx(2 * (r + r * r * r / 3)).epsilon(1e-9));
    double grid = ball_volume(*sp, c, r);
    double max_dens = std::pow(1 + r * r, 1.0);
    CHECK(std::abs(exact - grid) <= 2 * rho * max_dens);
  }
}

TEST_CASE("volume monotone in r, exactly") {
  auto sp = radial(1.0, 5.0, 0.05);
  int c = sp->nearest_point({1.0});
  double prev = 0;
  for (double r = 0.1; r < 3.0; r += 0.13) {
    double v = ball_volume(*sp, c, r);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("grid refinement changes volumes by at most (1 +- 4rho/r)") {
  for (double rho : {0.05, 0.025}) {
    auto coarse = broken_line(5.25, rho);
    auto fine = broken_line(5.25, rho / 2);
    for (double r : {1.0, 2.2}) {
      double vc = ball_volume(*coarse, coarse->nearest_point({0.0}), r);
      double vf = ball_volume(*fine, fine->nearest_point({0.0}), r);
      CHECK(vc <= vf * (1 + 4 * rho / r) + 1e-12);
      CHECK(vc >= vf * (1 - 4 * rho / r) - 1e-12);
    }
  }
}

TEST_CASE("doubling profile on the 101-path") {
  auto sp = lattice(101, 1);
  auto prof = doubling_profile(*sp, {50}, {5, 10, 20});
  for (auto& row : prof.rows) {
    CHECK(row.cd >= 1.8);
    CHECK(row.cd <= 2.2);
    CHECK(!row.truncated);
  }
  CHECK(prof.evd1_max_violation <= 1e-9);
}

TEST_CASE("alpha=-2 fails large scale doubling via reverse doubling") {
  auto sp = radial(-2.0, 100.0, 1.0);
  int c = sp->nearest_point({0.0});
  auto prof = doubling_profile(*sp, {c}, {8, 16, 32});
  // volume is bounded: the plain doubling ratio tends to 1
  CHECK(prof.rows.back().cd <= 1.2);
  auto rd = reverse_doubling(*sp, {c}, {8, 16, 32}, 2.0);
  CHECK(rd.gamma_hat <= 0.1);
  auto verdict = vd_inf_verdict(prof, rd);
  CHECK(verdict.verdict == Verdict::FAIL);
}

TEST_CASE("degree-3 tree fails doubling with growing ratio") {
  SpaceSpec ts;
  ts.kind = SpaceKind::tree;
  ts.degree = 3;
  ts.depth = 8;
  auto sp = std::make_shared<Space>(Space::build(ts));
  CHECK(sp->size() == 1 + 3 * (static_cast<int>(std::pow(2, 8)) - 1));
  auto prof = doubling_profile(*sp, {0}, {2, 4});
  CHECK(prof.rows[0].cd >= 3.5);
  CHECK(prof.rows[1].cd > prof.rows[0].cd);
  auto rd = reverse_doubling(*sp, {0}, {1, 2, 3}, 1.0);
  auto verdict = vd_inf_verdict(prof, rd);
  CHECK(verdict.verdict == Verdict::FAIL);
}

TEST_CASE("reverse doubling exponents") {
  SUBCASE("2-D lattice is quadratic") {
    auto sp = lattice(51, 2);
    int c = sp->nearest_point({25, 25});
    auto rd = reverse_doubling(*sp, {c}, {4, 8, 16}, 1.0);
    CHECK(rd.gamma_hat == doctest::Approx(2.0).epsilon(0.075));
  }
  SUBCASE("path is linear") {
    auto sp = lattice(101, 1);
    auto rd = reverse_doubling(*sp, {50}, {4, 8, 16}, 1.0);
    CHECK(rd.gamma_hat == doctest::Approx(1.0).epsilon(0.1));
  }
  SUBCASE("alpha=1 radial weight grows like r^2") {
    auto sp = radial(1.0, 60.0, 0.5);
    int c = sp->nearest_point({0.0});
    auto rd = reverse_doubling(*sp, {c}, {3, 6, 12}, 1.0);
    CHECK(rd.gamma_hat == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("metric axioms hold on random triples") {
  auto g = lattice(31, 2);
  CHECK(metric_axiom_violation(*g, 1000, 11) <= 0.0);
  SpaceSpec ts;
  ts.kind = SpaceKind::tree;
  ts.degree = 3;
  ts.depth = 6;
  auto tree = Space::build(ts);
  CHECK(metric_axiom_violation(tree, 1000, 12) == 0.0);
  auto bl = broken_line(5.25, 0.05);
  CHECK(metric_axiom_violation(*bl, 1000, 13) <= 1e-12);
}

TEST_CASE("build errors") {
  CHECK_THROWS_AS(space_kind_from_string("nope"), SpaceError);
  SpaceSpec s;
  s.kind = SpaceKind::broken_line;
  s.window = 5.0;
  s.rho = -1;
  CHECK_THROWS_AS(Space::build(s), SpaceError);
  s.rho = 1.0;  // coarser than window/10
  CHECK_THROWS_AS(Space::build(s), SpaceError);
}

TEST_CASE("margins and diameter") {
  auto sp = lattice(11, 2);
  CHECK(sp->margin(sp->nearest_point({5, 5})) == 5.0);
  CHECK(sp->margin(0) == 0.0);
  CHECK(sp->diameter() == 20.0);
  auto bl = broken_line(5.25, 0.05);
  CHECK(bl->diameter() == doctest::Approx(10.5));
}
