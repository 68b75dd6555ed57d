#pragma once

#include <iosfwd>
#include <string>

#include "heatlab/kernel.hpp"
#include "heatlab/net.hpp"
#include "heatlab/space.hpp"

namespace heatlab {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented graph format:
//   graph <num_vertices> <num_edges>
//   v <id> <weight>
//   e <id1> <id2>
// Parse errors carry the 1-based line number.
SpaceSpec read_graph_file(std::istream& in);
SpaceSpec read_graph_file_path(const std::string& path);
void write_graph_file(std::ostream& out, const Space& s);
// Net export adds a `# eps <value>` comment line.
void write_net_file(std::ostream& out, const Net& net);

// Kernel dump:
//   kernel <n_points> <nnz>
//   m <id> <value>
//   p <id1> <id2> <value>      (id1 <= id2; symmetric completion implied)
void write_kernel_file(std::ostream& out, const Kernel& k);

struct KernelDump {
  int n = 0;
  std::vector<double> m;
  std::vector<std::tuple<int, int, double>> entries;  // i <= j
};

KernelDump read_kernel_file(std::istream& in);
KernelDump read_kernel_file_path(const std::string& path);

// Rebuild a Kernel over an explicit space (geometry supplied separately),
// or over the dump's own support graph with hop metric when no space is given.
Kernel kernel_from_dump(const KernelDump& dump, std::shared_ptr<const Space> space,
                        double h, double hp);
Kernel kernel_from_dump(const KernelDump& dump, double h, double hp);

}  // namespace heatlab
