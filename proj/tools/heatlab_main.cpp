#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "heatlab/config.hpp"
#include "heatlab/graph_io.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/runner.hpp"

using namespace heatlab;

int main(int argc, char** argv) {
  CLI::App app{"heatlab: random-walk heat-kernel experiments on finite metric measure models"};
  app.set_help_flag("--help", "print help");  // frees -h for audit-kernel's --h
  app.require_subcommand(1);

  int threads = 1;
  long long seed = 1;
  std::string outdir = "out";
  app.add_option("--threads", threads, "worker threads (1 = bit-reproducible)");
  app.add_option("--seed", seed, "global seed");
  app.add_option("--out", outdir, "output directory");

  auto* run_cmd = app.add_subcommand("run", "run an experiment config");
  std::string config_path;
  bool dump_witness = false;
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_flag("--dump-witness", dump_witness, "dump witness vectors");

  auto* suite_cmd = app.add_subcommand("suite", "run a bundled suite");
  std::string suite_name;
  suite_cmd->add_option("name", suite_name, "identities | paper-examples | full")->required();

  auto* net_cmd = app.add_subcommand("net-build", "build an eps-net and export it");
  std::string net_config, net_out;
  double net_eps = 1.0;
  net_cmd->add_option("space-config", net_config, "space config file")->required();
  net_cmd->add_option("--eps", net_eps, "net scale")->required();
  net_cmd->add_option("-o", net_out, "output graph file")->required();

  auto* audit_cmd = app.add_subcommand("audit-kernel", "compatibility audit of a kernel dump");
  std::string kernel_path, audit_space;
  double audit_h = 1.0, audit_hp = 1.0;
  audit_cmd->add_option("kernel-file", kernel_path, "kernel dump")->required();
  audit_cmd->add_option("--h", audit_h, "inner scale h")->required();
  audit_cmd->add_option("--hp", audit_hp, "outer scale h'")->required();
  audit_cmd->add_option("--space", audit_space,
                        "space config supplying the metric (default: support-graph hops)");

  CLI11_PARSE(app, argc, argv);
  thread_count() = threads;
  if (const char* env = std::getenv("HEATLAB_BUDGET")) budget().limit = std::atoll(env);

  try {
    if (*run_cmd) {
      Config cfg = parse_config_file(config_path);
      RunReport rep = run_config(cfg, outdir, static_cast<uint64_t>(seed), dump_witness);
      std::cout << rep.summary();
      return rep.structural_pass && !rep.asserted_fail ? 0 : 1;
    }
    if (*suite_cmd) {
      RunReport rep = run_suite(suite_name, outdir, static_cast<uint64_t>(seed));
      std::cout << rep.summary();
      return rep.structural_pass ? 0 : 1;
    }
    if (*net_cmd) {
      Config cfg = parse_config_file(net_config);
      const ConfigSection* sec = cfg.first("space");
      if (!sec) throw RunnerError("net-build: config needs a [space] section");
      auto sp = space_from_config(*sec);
      Net net = build_net(sp, net_eps);
      std::ofstream f(net_out);
      if (!f) throw IoError("cannot write " + net_out);
      write_net_file(f, net);
      std::cout << "net: " << net.size() << " vertices, " << net.edges.size()
                << " edges -> " << net_out << "\n";
      return 0;
    }
    if (*audit_cmd) {
      KernelDump dump = read_kernel_file_path(kernel_path);
      Kernel k;
      if (!audit_space.empty()) {
        Config cfg = parse_config_file(audit_space);
        const ConfigSection* sec = cfg.first("space");
        if (!sec) throw RunnerError("audit-kernel: space config needs a [space] section");
        k = kernel_from_dump(dump, space_from_config(*sec), audit_h, audit_hp);
      } else {
        k = kernel_from_dump(dump, audit_h, audit_hp);
      }
      k.validate();
      auto audit = audit_compat(k, audit_h, audit_hp);
      std::cout << "compat: " << (audit.pass() ? "PASS" : "FAIL") << " c1=" << audit.c1_hat
                << " C1=" << audit.C1_hat << " alpha=" << audit.alpha_hat
                << " support_ok=" << (audit.support_ok ? 1 : 0) << "\n";
      return 0;
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
