#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatlab/space.hpp"

namespace heatlab {

struct KernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Global compute budget in kernel-entry applications (one sparse entry used in
// one matvec = one unit). Guards runaway experiment configs.
struct Budget {
  std::atomic<long long> used{0};
  long long limit = 500000000;  // 5e8 default
  void charge(long long n) {
    if (used.fetch_add(n, std::memory_order_relaxed) + n > limit)
      throw BudgetError("compute budget exceeded");
  }
  void reset() { used.store(0); }
};
Budget& budget();

// Symmetric Markov kernel p(x,y) with respect to a reference measure m,
// stored sparse (full symmetric CSR). Immutable after construction.
class Kernel {
 public:
  std::shared_ptr<const Space> space;
  std::vector<double> m;  // reference measure per point
  std::vector<int> row_ptr, col;
  std::vector<double> val;  // densities p(x,y)
  double h = 0.0, hp = 0.0;
  double support_radius = 0.0;
  std::vector<uint8_t> boundary_row;

  int size() const { return static_cast<int>(m.size()); }
  long long nnz() const { return static_cast<long long>(val.size()); }

  // (Pf)(x) = sum_y p(x,y) f(y) m(y); deterministic accumulation order.
  void apply(const double* f, double* out) const;
  std::vector<double> apply(const std::vector<double>& f) const;

  double entry(int i, int j) const;          // p(i,j), 0 when absent
  std::vector<double> row_density(int x) const;

  double vol_m(int x, double r) const;  // ball volume in the reference measure

  void validate() const;  // symmetry/stochasticity/support invariants
};

// --- constructors ------------------------------------------------------------

// Ball walk at scale h: p(x,y) = 1_{d<=h} / (V(x,h) V(y,h)), m = V(.,h) mu.
Kernel ball_walk(std::shared_ptr<const Space> s, double h);

// Nearest-neighbour walk on a graph kind: p(x,y) = 1_{x~y} / (deg x deg y),
// m = deg * mu.
Kernel srw(std::shared_ptr<const Space> s);

// Jumps supported in an annulus h1 < d <= h2 around each point.
Kernel annulus_walk(std::shared_ptr<const Space> s, double h, double h1, double h2);

// (I+P)/2; the diagonal atom becomes an explicit point mass 1/(2 m(x)).
Kernel lazy(const Kernel& k);

// --- iteration ---------------------------------------------------------------

struct RowResult {
  std::vector<double> density;  // p_n(x, .)
  bool truncated = false;       // support met a boundary-flagged row
  double mass_deficit = 0.0;    // 1 - sum p_n(x,y) m(y)
};

RowResult iterate(const Kernel& k, int steps, int x);

// h_n(x,.) = P_L^n p_2(x,.)
RowResult hk_row(const Kernel& k, int steps, int x);

// --- killed (Dirichlet) chains ------------------------------------------------

class DirichletKernel {
 public:
  const Kernel* base = nullptr;
  int center = -1;
  double radius = 0.0;
  std::vector<int> points;      // global ids, ascending
  std::vector<int> global2loc;  // -1 outside
  std::vector<double> m;        // local masses
  std::vector<int> row_ptr, col;
  std::vector<double> val;

  int size() const { return static_cast<int>(points.size()); }
  void apply(const double* f, double* out) const;
  std::vector<double> apply(const std::vector<double>& f) const;
  double entry(int i, int j) const;
  std::vector<double> row_density(int x_local) const;
  bool covers_whole_conservative_space() const;
};

DirichletKernel restrict_to_ball(const Kernel& k, int center, double r);

std::vector<double> iterate_dirichlet(const DirichletKernel& dk, int steps, int x_local);

// L2(m)->L2(m) operator norm of P_B by power iteration on the symmetrized
// matrix, tolerance `tol`, hard error on non-convergence.
double dirichlet_l2_norm(const DirichletKernel& dk, double tol = 1e-10, int maxit = 10000);

// --- Green's function ---------------------------------------------------------

enum class GreenStatus { Converged, NoConvergence };

struct GreenResult {
  GreenStatus status = GreenStatus::Converged;
  std::vector<double> sum;  // G_N(x,.) partial sums of densities
  int terms = 0;
  double last_increment = 0.0;  // sup-norm of the last added term
  double tail_bound = 0.0;      // Dirichlet case: geometric certificate
};

GreenResult green(const Kernel& k, int x, double tol, int kmax);
GreenResult green(const DirichletKernel& dk, int x_local, double tol, int kmax);

// --- compatibility audit -------------------------------------------------------

struct CompatAudit {
  double c1_hat = 0.0;     // min p1(x,y) V_m(x,h) over d <= h, interior x
  double C1_hat = 0.0;     // max p1(x,y) V_m(x,h')
  bool support_ok = true;  // no entry beyond h'
  double alpha_hat = 0.0;  // min p2/p1 over the support of p1
  double pcomp_min = 0.0;  // spot check: min over k in {2,3,4} of min p_{k+1}/p_k
  bool pass() const { return c1_hat > 0 && support_ok && alpha_hat > 0; }
};

CompatAudit audit_compat(const Kernel& k, double h, double hp);

// --- Dirichlet forms and discrete calculus -------------------------------------

struct DirichletForms {
  double e_quad = 0.0;   // (1/2) sum (f(x)-f(y))^2 p(x,y) m(x) m(y)
  double e_inner = 0.0;  // <f, (I-P) f>_m
  double e_star = 0.0;   // ||f||^2 - ||Pf||^2
};

DirichletForms dirichlet_forms(const Kernel& k, const std::vector<double>& f);

// |grad_P f|^2(x) = sum_y (f(y)-f(x))^2 p(x,y) m(y)
double grad_p_squared(const Kernel& k, const std::vector<double>& f, int x);

// residual of <Delta f, g> = (1/2) sum sum (grad f)(grad g) p m m
double integration_by_parts_check(const Kernel& k, const std::vector<double>& f,
                                  const std::vector<double>& g);

double inner_m(const std::vector<double>& f, const std::vector<double>& g,
               const std::vector<double>& m);
double norm_m(const std::vector<double>& f, const std::vector<double>& m, double p);

}  // namespace heatlab
