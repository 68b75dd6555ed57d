#include <doctest.h>

#include <cmath>
#include <sstream>

#include "heatlab/graph_io.hpp"
#include "heatlab/net.hpp"

using namespace heatlab;

namespace {

std::shared_ptr<Space> path(int n) {
  SpaceSpec s;
  s.kind = SpaceKind::lattice;
  s.side = n;
  s.lattice_dim = 1;
  return std::make_shared<Space>(Space::build(s));
}

std::shared_ptr<Space> broken_line(double W, double rho) {
  SpaceSpec s;
  s.kind = SpaceKind::broken_line;
  s.window = W;
  s.rho = rho;
  return std::make_shared<Space>(Space::build(s));
}

}  // namespace

TEST_CASE("greedy net of the 10-path at eps=1") {
  auto sp = path(10);
  Net net = build_net(sp, 1.0);
  CHECK(net.vertices == std::vector<int>{0, 2, 4, 6, 8});
  // consecutive evens at distance 2 <= 3 are edges; distance-4 pairs are not
  CHECK(net.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(net.m[0] == 2.0);  // V(0,1) on the path
  CHECK(net.m[1] == 3.0);
  CHECK(net.m[2] == 3.0);
  auto audit = audit_net(net, 100, 2.0, 1);
  CHECK(audit.structural_pass());
  CHECK(audit.max_degree == 2);
  // closed-ball overlap count: parent point 2 sees net vertices {0,2,4}
  CHECK(audit.overlap == 3);
  CHECK(audit.a_hat <= 2.0);
  CHECK(audit.lower_const >= 1.0);
  CHECK(audit.connected);
}

TEST_CASE("net determinism is byte-for-byte") {
  auto sp = broken_line(3.25, 0.05);
  Net a = build_net(sp, 0.6);
  Net b = build_net(sp, 0.6);
  std::ostringstream sa, sb;
  write_net_file(sa, a);
  write_net_file(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("broken line net at eps=0.6 is connected with moderate distortion") {
  auto sp = broken_line(5.25, 0.01);
  Net net = build_net(sp, 0.6);
  auto audit = audit_net(net, 4000, 1.2, 2);
  CHECK(audit.structural_pass());
  CHECK(audit.connected);
  CHECK(audit.a_hat <= 6.0);
}

TEST_CASE("single-vertex net when eps exceeds the diameter") {
  auto sp = path(5);
  Net net = build_net(sp, 10.0);
  CHECK(net.size() == 1);
  CHECK(net.edges.empty());
  auto audit = audit_net(net, 10, 1.0, 3);
  CHECK(audit.max_degree == 0);
  CHECK(audit.connected);
  CHECK(audit.structural_pass());
}

TEST_CASE("2-D lattice net degree stays under the covering bound") {
  SpaceSpec s;
  s.kind = SpaceKind::lattice;
  s.side = 51;
  s.lattice_dim = 2;
  auto sp = std::make_shared<Space>(Space::build(s));
  Net net = build_net(sp, 2.0);
  auto audit = audit_net(net, 2000, 4.0, 4);
  CHECK(audit.structural_pass());
  CHECK(audit.max_degree <= 48);
  CHECK(audit.connected);
}

TEST_CASE("find_chain on the broken line") {
  auto sp = broken_line(3.25, 0.05);
  int x0 = sp->nearest_point({0.0});
  int x1 = sp->nearest_point({1.0});
  int x2 = sp->nearest_point({2.0});
  SUBCASE("b below the gap gives NoChain") {
    auto res = find_chain(*sp, 0.4, x0, x1);
    CHECK(!res.found);
  }
  SUBCASE("b above the gap crosses with few hops") {
    auto res = find_chain(*sp, 0.6, x0, x2);
    CHECK(res.found);
    CHECK(res.hops <= 8);
    CHECK(res.length >= sp->metric(x0, x2) - 1e-9);
  }
  SUBCASE("trivial chain") {
    auto res = find_chain(*sp, 0.5, x0, x0);
    CHECK(res.found);
    CHECK(res.points == std::vector<int>{x0});
    CHECK(res.length == 0.0);
  }
}

TEST_CASE("to_net averages, from_net extends") {
  auto sp = path(10);
  Net net = build_net(sp, 1.0);
  SUBCASE("constants are preserved both ways") {
    std::vector<double> g(sp->size(), 3.25);
    auto gt = to_net(net, g);
    for (double v : gt) CHECK(v == doctest::Approx(3.25).epsilon(1e-14));
    std::vector<double> f(net.size(), -1.5);
    auto fh = from_net(net, f);
    for (double v : fh) CHECK(v == -1.5);
  }
  SUBCASE("linear function averages to itself at interior net vertices") {
    std::vector<double> g(sp->size());
    for (int i = 0; i < sp->size(); ++i) g[i] = i;
    auto gt = to_net(net, g);
    for (int i = 1; i + 1 < net.size(); ++i)
      CHECK(gt[i] == doctest::Approx(net.vertices[i]).epsilon(1e-12));
  }
  SUBCASE("indicator of one cell spreads by the local volume") {
    std::vector<double> g(sp->size(), 0.0);
    g[4] = 1.0;
    auto gt = to_net(net, g);
    // vertices 4 (V=3) sees mass 1/3; vertices at distance > 1 see none
    CHECK(gt[2] == doctest::Approx(1.0 / 3));
    CHECK(gt[0] == 0.0);
  }
  SUBCASE("partition of unity is exact") {
    std::vector<double> ones(net.size(), 1.0);
    auto lifted = from_net(net, ones);
    for (double v : lifted) CHECK(v == 1.0);
  }
  SUBCASE("round trip error bounded by the 2eps oscillation") {
    std::vector<double> f(net.size());
    for (int i = 0; i < net.size(); ++i) f[i] = std::sin(0.7 * net.vertices[i]);
    auto fh = from_net(net, f);
    auto back = to_net(net, fh);
    // oscillation of f over 2eps balls in the net
    double osc = 0;
    for (int i = 0; i < net.size(); ++i)
      for (int j = 0; j < net.size(); ++j)
        if (std::abs(net.vertices[i] - net.vertices[j]) <= 2.0)
          osc = std::max(osc, std::abs(f[i] - f[j]));
    for (int i = 0; i < net.size(); ++i) CHECK(std::abs(back[i] - f[i]) <= 2 * osc + 1e-12);
  }
}

TEST_CASE("quasi-isometry audits") {
  SUBCASE("identity map") {
    auto sp = path(30);
    std::vector<int> id(sp->size());
    for (int i = 0; i < sp->size(); ++i) id[i] = i;
    auto audit = audit_quasi_isometry(id, *sp, *sp, 0.5, 2000, 5);
    CHECK(audit.a_hat == doctest::Approx(1.0));
    CHECK(audit.b_hat == doctest::Approx(0.0));
    CHECK(audit.surjective);
    CHECK(audit.c_hat == doctest::Approx(1.0));
  }
  SUBCASE("net inclusion into its parent") {
    auto sp = path(40);
    Net net = build_net(sp, 1.0);
    auto netsp = net.as_space();
    std::vector<int> incl = net.vertices;
    auto auditn = audit_net(net, 2000, 2.0, 6);
    auto audit = audit_quasi_isometry(incl, *netsp, *sp, 1.0, 5000, 7);
    CHECK(audit.a_hat <= std::max(3 * net.eps, auditn.a_hat) + 1e-9);
    CHECK(audit.surjective);
  }
  SUBCASE("Z-path into broken line components") {
    auto z = path(7);   // 0..6 -> components -3..3
    auto bl = broken_line(3.25, 0.05);
    std::vector<int> map(z->size());
    for (int i = 0; i < z->size(); ++i)
      map[i] = bl->nearest_point({static_cast<double>(i - 3)});
    auto audit = audit_quasi_isometry(map, *z, *bl, 0.3, 5000, 8);
    CHECK(audit.a_hat <= 1.5);
    CHECK(audit.b_hat <= 0.5 + 1e-9);
    CHECK(audit.surjective);
  }
}

TEST_CASE("net export carries the eps comment") {
  auto sp = path(10);
  Net net = build_net(sp, 1.0);
  std::ostringstream out;
  write_net_file(out, net);
  CHECK(out.str().substr(0, 6) == "# eps ");
  // and the payload parses back as a graph
  std::istringstream in(out.str());
  SpaceSpec spec = read_graph_file(in);
  CHECK(spec.n_vertices == net.size());
  CHECK(static_cast<int>(spec.edge_list.size()) == static_cast<int>(net.edges.size()));
}
