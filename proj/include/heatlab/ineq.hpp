#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatlab/kernel.hpp"

namespace heatlab {

struct IneqError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- Poincare inequality at scale h -------------------------------------------

struct PoincareResult {
  int center = -1;
  double r = 0.0, h = 0.0, kappa = 1.0;
  double c_p = 0.0;          // sup_f variance_B / (r^2 gradient_{kappa B}); inf if degenerate
  bool degenerate = false;   // >= 2 h-components of kappa B meet B
  std::vector<int> domain;   // kappa-ball point ids
  std::vector<double> witness;  // extremal f on `domain`
};

// Variational Poincare constant on a weighted graph-with-metric (a Space).
// Solved as a generalized eigenproblem after removing the gradient form's
// kernel by component detection.
PoincareResult poincare_constant(const Space& s, double h, int center, double r,
                                 double kappa);

// --- probes --------------------------------------------------------------------

struct ProbeResult {
  std::string name;
  double observed = 0.0;  // lower bound on the best constant
  bool unbounded = false;
  int witness_id = -1;
  std::vector<double> witness;
};

// worst ratio ||f - f_s||_2^2 / (s^2 E(f,f)) over seeded trials
ProbeResult pseudo_poincare_check(const Kernel& k, double s, int trials, uint64_t seed);

ProbeResult sobolev_probe(const DirichletKernel& dk, double delta, int trials, uint64_t seed);

ProbeResult nash_probe(const Kernel& k, int center, double r, double delta, int trials,
                       uint64_t seed);

struct UltracontractivityProfile {
  std::vector<int> ks;
  std::vector<double> norms;  // ||P_B^k||_{1->infty} = max_{y,z} p_k^B(y,z)
  double c_u_hat = 0.0;       // max over k of observed / envelope shape
  double decay_exponent = 0.0;  // log-log slope magnitude over k <= r^2
};

UltracontractivityProfile ultracontractivity_profile(const DirichletKernel& dk, int kmax,
                                                     double delta);

struct SpectralGapResult {
  double norm = 0.0;   // ||P_B||_{2->2}
  double gap = 0.0;    // 1 - norm
  double a_hat = 0.0;  // r^2 * gap
};

SpectralGapResult spectral_gap(const DirichletKernel& dk);

// top eigenfunctions of P_B in the m inner product, largest eigenvalue first
std::vector<std::vector<double>> top_eigenfunctions(const DirichletKernel& dk, int count);

// --- parabolic inequalities ------------------------------------------------------

struct CaccioppoliResult {
  std::vector<double> residuals;  // RHS - LHS per step
  double min_residual = 0.0;
  bool pass = false;  // min residual >= -1e-10
};

// u_k = |v_k| with v evolved from v0 by the lazy operator (or by P itself when
// lazy_evolution is false, the deliberate counterexample mode).
CaccioppoliResult caccioppoli_check(const Kernel& k, const std::vector<double>& v0,
                                    const std::vector<double>& psi, int steps,
                                    bool lazy_evolution = true);

enum class ImpLabel { PASS, FAIL, CONDITION_VIOLATED };

struct ImpResult {
  std::vector<double> J;
  bool non_increasing = false;
  bool condition_ok = false;  // weight condition holds pointwise
  ImpLabel label = ImpLabel::FAIL;
};

// Discrete integral maximum principle: J_k = sum u_k^2 f_k m with the weight
// f_k(x) = exp(-sigma(x)^2 / (D (n+1-k))); u evolves by the lazy operator.
ImpResult imp_check(const Kernel& k, const std::vector<double>& u0,
                    const std::vector<double>& sigma, double D, int n);

// smallest D passing imp_check, found by doubling then bisection
double find_min_d(const Kernel& k, const std::vector<double>& u0,
                  const std::vector<double>& sigma, int n);

// --- polynomial identities -------------------------------------------------------

struct PolyCheckResult {
  double max_rel_residual = 0.0;
  bool snk_bound_ok = true;  // s_{n,k} >= binom(n-1,k)
  bool pass = false;         // residual <= 1e-8
};

PolyCheckResult verify_poly_identities(int n_max, int trials, uint64_t seed);

// single evaluation helpers (also used by the exact oracle in tests)
double poly_identity1_rhs(int n, double beta, double z);
double poly_identity2_rhs(int n, double beta, double z);
double binom(int n, int k);

// Shared seeded trial family: point indicators, tents at three widths, then
// Gaussian vectors; all masked to `support` (1 = allowed).
std::vector<double> trial_function(const Space& s, const std::vector<char>& support,
                                   int index, uint64_t seed);

}  // namespace heatlab
