#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heatlab/config.hpp"
#include "heatlab/graph_io.hpp"
#include "heatlab/report.hpp"
#include "heatlab/runner.hpp"

using namespace heatlab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
}

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = parse_config(
      "# comment\n[space]\nkind = lattice\nside = 11\ndim = 1\n\n"
      "[experiment]\nop = doubling\nradii = 2 4\n[experiment]\nop = chain\n");
  CHECK(cfg.first("space") != nullptr);
  CHECK(cfg.first("space")->get("kind") == "lattice");
  CHECK(cfg.first("space")->integer("side") == 11);
  CHECK(cfg.all("experiment").size() == 2);
  CHECK_THROWS_AS(parse_config("key = 1\n"), ConfigError);       // key outside section
  CHECK_THROWS_AS(parse_config("[space\nk = v\n"), ConfigError);  // bad header
  CHECK_THROWS_AS(parse_config("[s]\nnovalue\n"), ConfigError);
  CHECK_THROWS_AS(cfg.first("space")->num("kind"), ConfigError);
}

TEST_CASE("graph file parse errors carry line numbers") {
  std::istringstream bad1("graph 2 1\nv 0 1.0\nv 1 1.0\ne 0 5\n");
  try {
    read_graph_file(bad1);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  std::istringstream bad2("v 0 1.0\n");
  CHECK_THROWS_AS(read_graph_file(bad2), IoError);
  std::istringstream good("# comment\ngraph 3 2\nv 0 2.0\ne 0 1\ne 1 2\n");
  auto spec = read_graph_file(good);
  CHECK(spec.n_vertices == 3);
  CHECK(spec.vertex_weights[0] == 2.0);
  CHECK(spec.vertex_weights[1] == 1.0);  // default
  CHECK(spec.edge_list.size() == 2);
}

TEST_CASE("kernel dump round trip preserves entries exactly") {
  SpaceSpec ls;
  ls.kind = SpaceKind::lattice;
  ls.side = 9;
  ls.lattice_dim = 1;
  auto sp = std::make_shared<Space>(Space::build(ls));
  Kernel k = ball_walk(sp, 1.0);
  std::ostringstream out;
  write_kernel_file(out, k);
  std::istringstream in(out.str());
  auto dump = read_kernel_file(in);
  Kernel k2 = kernel_from_dump(dump, sp, k.h, k.hp);
  REQUIRE(k2.size() == k.size());
  for (int i = 0; i < k.size(); ++i) {
    CHECK(k2.m[i] == k.m[i]);
    for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t)
      CHECK(k2.entry(i, k.col[t]) == k.val[t]);
  }
  k2.validate();
  // support-graph fallback also loads
  Kernel k3 = kernel_from_dump(dump, 1.0, 1.0);
  CHECK(k3.size() == k.size());
}

TEST_CASE("run_config emits byte-identical CSVs across runs") {
  std::string cfgtext =
      "[space]\nkind = lattice\nside = 41\ndim = 1\n"
      "[kernel]\nkind = ball_walk\nh = 1\n"
      "[experiment]\nop = spectral_gap\nr = 8\n"
      "[experiment]\nop = compat_audit\n"
      "[experiment]\nop = doubling\nradii = 4 8 16\n";
  auto cfg = parse_config(cfgtext);
  auto r1 = run_config(cfg, "/tmp/heatlab_t1", 7);
  auto r2 = run_config(cfg, "/tmp/heatlab_t2", 7);
  REQUIRE(r1.manifest.size() == r2.manifest.size());
  // CSV/JSON/SVG artifacts are byte-identical; the summary carries wall-clock
  for (size_t i = 0; i < r1.manifest.size(); ++i) {
    CHECK(r1.manifest[i].first == r2.manifest[i].first);
    if (r1.manifest[i].first != "summary.txt")
      CHECK(r1.manifest[i].second == r2.manifest[i].second);
  }
  CHECK(r1.structural_pass);
  // every emitted file is listed in the manifest with its digest
  for (auto& [name, digest] : r1.manifest)
    CHECK(fnv1a64(slurp("/tmp/heatlab_t1/" + name)) == digest);
}

TEST_CASE("empty experiment list yields a valid empty report") {
  auto cfg = parse_config("[space]\nkind = lattice\nside = 5\ndim = 1\n");
  auto rep = run_config(cfg, "/tmp/heatlab_empty", 1);
  CHECK(rep.outcomes.empty());
  CHECK(rep.structural_pass);
}

TEST_CASE("unknown op is a structural error") {
  auto cfg = parse_config(
      "[space]\nkind = lattice\nside = 5\ndim = 1\n[experiment]\nop = nonsense\n");
  auto rep = run_config(cfg, "/tmp/heatlab_bad", 1);
  CHECK(!rep.structural_pass);
  CHECK(rep.outcomes.size() == 1);
  CHECK(rep.outcomes[0].verdict == "ERROR");
}

TEST_CASE("svg plot is self-contained") {
  SvgSeries s{"series", {1, 2, 4, 8}, {1, 0.5, 0.25, 0.125}};
  auto svg = svg_line_plot("test", {s}, true, true);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("800") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

#ifdef HEATLAB_BIN
TEST_CASE("CLI binary end to end") {
  namespace fs = std::filesystem;
  fs::create_directories("/tmp/heatlab_cli");
  spit("/tmp/heatlab_cli/space.cfg", "[space]\nkind = lattice\nside = 21\ndim = 1\n");
  spit("/tmp/heatlab_cli/run.cfg",
       "[space]\nkind = lattice\nside = 21\ndim = 1\n"
       "[kernel]\nkind = ball_walk\nh = 1\n"
       "[experiment]\nop = spectral_gap\nr = 5\n");
  std::string bin = HEATLAB_BIN;
  SUBCASE("run") {
    int rc = std::system((bin + " --out /tmp/heatlab_cli/out run /tmp/heatlab_cli/run.cfg "
                                ">/tmp/heatlab_cli/run.log 2>&1")
                             .c_str());
    CHECK(rc == 0);
    CHECK(fs::exists("/tmp/heatlab_cli/out/summary.txt"));
  }
  SUBCASE("net-build") {
    int rc = std::system((bin + " net-build /tmp/heatlab_cli/space.cfg --eps 1 -o "
                                "/tmp/heatlab_cli/net.graph >/dev/null 2>&1")
                             .c_str());
    CHECK(rc == 0);
    auto text = slurp("/tmp/heatlab_cli/net.graph");
    CHECK(text.substr(0, 6) == "# eps ");
  }
  SUBCASE("audit-kernel") {
    // dump a kernel, then audit it with the metric supplied by the space config
    SpaceSpec ls;
    ls.kind = SpaceKind::lattice;
    ls.side = 21;
    ls.lattice_dim = 1;
    auto sp = std::make_shared<Space>(Space::build(ls));
    Kernel k = ball_walk(sp, 1.0);
    std::ofstream f("/tmp/heatlab_cli/k.dump");
    write_kernel_file(f, k);
    f.close();
    int rc = std::system((bin + " audit-kernel /tmp/heatlab_cli/k.dump --h 1 --hp 1 "
                                "--space /tmp/heatlab_cli/space.cfg "
                                ">/tmp/heatlab_cli/audit.log 2>&1")
                             .c_str());
    CHECK(rc == 0);
    auto log = slurp("/tmp/heatlab_cli/audit.log");
    CHECK(log.find("PASS") != std::string::npos);
  }
}
#endif
