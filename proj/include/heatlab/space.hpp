#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlab {

enum class SpaceKind {
  euclidean_radial,
  broken_line,
  lattice,
  tree,
  bipartite,
  custom_graph,
};

std::string to_string(SpaceKind k);
SpaceKind space_kind_from_string(const std::string& s);

struct SpaceSpec {
  SpaceKind kind = SpaceKind::lattice;

  // continuous kinds
  int dim = 1;         // euclidean_radial dimension n >= 1
  double alpha = 0.0;  // radial weight exponent: density (1+|x|^2)^(alpha/2)
  double window = 0.0; // window radius W > 0
  double rho = 0.0;    // grid step

  // lattice
  int side = 0;
  int lattice_dim = 1;

  // tree
  int degree = 3;
  int depth = 1;

  // bipartite K_{a,b}
  int part_a = 1;
  int part_b = 1;

  // custom_graph
  int n_vertices = 0;
  std::vector<double> vertex_weights;          // empty -> all 1
  std::vector<std::pair<int, int>> edge_list;
};

// Finite model of a metric measure space: point set, metric oracle, masses,
// and a window with an interior-margin function. Immutable after build; all
// queries are const and thread-safe.
class Space {
 public:
  static Space build(const SpaceSpec& spec);

  SpaceKind kind() const { return spec_.kind; }
  const SpaceSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(mass_.size()); }
  int dim() const { return dim_; }
  bool grid_backed() const;
  double rho() const { return spec_.rho; }

  double mass(int i) const { return mass_[i]; }
  const std::vector<double>& masses() const { return mass_; }
  double total_mass() const { return total_mass_; }

  double coord(int i, int k) const { return coords_[static_cast<size_t>(i) * dim_ + k]; }
  const std::vector<double>& coords() const { return coords_; }

  double metric(int i, int j) const;
  // Single-source distances; BFS layers for graph kinds.
  std::vector<double> distances_from(int i) const;

  // Distance from point i to the truncation boundary; +inf when the model is
  // the whole space (bipartite, custom_graph).
  double margin(int i) const;
  bool boundary_free() const;
  // Window diameter; carries the truncation caveat for windowed spaces.
  double diameter() const;

  // Enumerate all j with d(i,j) <= r. fn(j, d).
  void for_each_in_ball(int i, double r, const std::function<void(int, double)>& fn) const;
  std::vector<int> ball(int i, double r) const;

  int nearest_point(const std::vector<double>& x) const;

  // graph kinds only
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

 private:
  SpaceSpec spec_;
  int dim_ = 1;
  std::vector<double> coords_;  // flat, stride dim_
  std::vector<double> mass_;
  double total_mass_ = 0.0;
  std::vector<std::vector<int>> adj_;  // graph kinds
  std::vector<int> tree_level_;        // tree kind
  // bucket index for euclidean dim >= 2
  std::vector<std::vector<int>> buckets_;
  std::vector<int> bucket_dims_;
  double bucket_cell_ = 0.0;
  double bucket_lo_ = 0.0;

  void build_bucket_index();
};

// --- ball volumes -----------------------------------------------------------

// Grid / vertex-sum volume V(x,r) = sum of masses in the closed ball. Sets
// *truncated when the ball reaches past the window.
double ball_volume(const Space& s, int x, double r, bool* truncated = nullptr);

// Untruncated integral volume for 1-D continuous kinds (euclidean_radial via
// adaptive quadrature of the density, broken_line via interval lengths).
double ball_volume_exact(const Space& s, double center, double r);

struct VolumeProfile {
  int center = -1;
  std::vector<double> radii;
  std::vector<double> volumes;
  std::vector<bool> truncated;
};

VolumeProfile volume_profile(const Space& s, int center, const std::vector<double>& radii);

// --- doubling estimators -----------------------------------------------------

struct DoublingRow {
  double r = 0.0;
  double cd = 0.0;      // max_x V(x,2r)/V(x,r)
  int argmax = -1;
  bool truncated = false;
};

struct DoublingProfile {
  std::vector<DoublingRow> rows;
  double delta_hat = 0.0;           // log2(max_r C_D(r))
  double evd1_max_violation = 0.0;  // max over sampled (r,s) of ratio - C_b (r/s)^delta
  double cd_loglog_slope = 0.0;     // growth of C_D(r) on log-log axes
};

DoublingProfile doubling_profile(const Space& s, const std::vector<int>& centers,
                                 const std::vector<double>& radii);

struct ReverseDoublingFit {
  double gamma_hat = 0.0;  // min over centers of LS slope of log V against log r
  double c_hat = 0.0;      // worst-case constant for V(r)/V(s) >= c (r/s)^gamma
};

ReverseDoublingFit reverse_doubling(const Space& s, const std::vector<int>& centers,
                                    const std::vector<double>& radii, double b);

enum class Verdict { PASS, FAIL };
inline const char* to_string(Verdict v) { return v == Verdict::PASS ? "PASS" : "FAIL"; }

struct VdInfVerdict {
  Verdict verdict = Verdict::PASS;
  std::string reason;
};

// Large-scale doubling classifier. FAIL when the doubling ratio grows with r
// (exponential volume) or when the reverse-doubling exponent degenerates
// (bounded volume, so no uniform-in-x doubling constant exists).
VdInfVerdict vd_inf_verdict(const DoublingProfile& dp, const ReverseDoublingFit& rd);

// Max violation of the metric axioms over `trials` random triples (exact 0 is
// expected for graph kinds).
double metric_axiom_violation(const Space& s, int trials, uint64_t seed);

struct SpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heatlab
