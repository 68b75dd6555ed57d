#pragma once

#include <memory>
#include <vector>

#include "heatlab/space.hpp"

namespace heatlab {

// eps-net of a space: maximal eps-separated vertex set, edges at 0 < d <= 3 eps,
// vertex weight m(x) = V(x, eps) in the parent.
struct Net {
  std::shared_ptr<const Space> parent;
  double eps = 0.0;
  std::vector<int> vertices;                 // parent ids in admit order
  std::vector<std::pair<int, int>> edges;    // local ids, a < b
  std::vector<std::vector<int>> adj;         // local adjacency
  std::vector<double> m;

  int size() const { return static_cast<int>(vertices.size()); }
  std::vector<double> dg_from(int local) const;  // hop distances
  // custom_graph view carrying the net weights; metric is the hop metric
  std::shared_ptr<Space> as_space() const;
};

Net build_net(std::shared_ptr<const Space> parent, double eps);

struct NetAudit {
  int max_degree = 0;
  int overlap = 0;           // N(delta) = max_p #{x in X : d(x,p) <= delta}
  double lower_const = 0.0;  // min over pairs of 3 eps d_G / d  (>= 1 when sound)
  double a_hat = 0.0;        // min A with d_G <= A d + A over sampled pairs
  bool connected = false;
  bool separated = true;     // pairwise separation > eps (exact)
  bool covering = true;      // every parent point within eps of a vertex (exact)
  bool edge_rule = true;     // edges exactly the pairs 0 < d <= 3 eps (exact)
  bool structural_pass() const { return separated && covering && edge_rule; }
};

NetAudit audit_net(const Net& net, int probe_pairs, double delta, uint64_t seed = 1);

struct ChainResult {
  bool found = false;
  std::vector<int> points;  // parent ids, x..y
  double length = 0.0;      // sum of step distances
  int hops = 0;
  double ratio = 0.0;       // hops * b / d(x,y)
};

// Shortest-hop chain in the b-proximity graph (points adjacent iff d <= b).
ChainResult find_chain(const Space& s, double b, int x, int y);

// g on parent points -> averaged function on net vertices.
std::vector<double> to_net(const Net& net, const std::vector<double>& g);

// f on net vertices -> partition-of-unity extension on parent points.
std::vector<double> from_net(const Net& net, const std::vector<double>& f);

struct QiAudit {
  double a_hat = 1.0;
  double b_hat = 0.0;
  bool surjective = true;
  int witness = -1;    // s2 point violating eps-surjectivity
  double c_hat = 1.0;  // max two-sided ratio of unit-ball volumes
};

// Audit phi : s1 -> s2 given as a point map (phi[i] = index in s2).
QiAudit audit_quasi_isometry(const std::vector<int>& map, const Space& s1, const Space& s2,
                             double epsilon_surj, int sample_pairs = 10000, uint64_t seed = 1);

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heatlab
