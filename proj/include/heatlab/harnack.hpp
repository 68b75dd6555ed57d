#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatlab/kernel.hpp"

namespace heatlab {

struct HarnackError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- harmonic functions -----------------------------------------------------

struct HarmonicSolution {
  int center = -1;
  double r = 0.0;
  std::vector<int> interior;  // global ids of B(x,r)
  std::vector<int> layer;     // global ids of B(x,r+h') \ B(x,r)
  std::vector<double> u;      // full-length; boundary data on layer, solved inside
  double residual = 0.0;      // ||u - Pu||_inf over the interior
  int cg_iterations = 0;
};

// Solve u = Pu on B(x,r) with data g on the boundary layer (g read at layer
// indices of the full-length vector).
HarmonicSolution solve_harmonic(const Kernel& k, int center, double r,
                                const std::vector<double>& g);

struct TrialRecord {
  int trial = 0;
  double sup = 0.0;
  double inf = 0.0;
  double ratio = 0.0;
};

struct HarnackReport {
  std::string kind;  // "elliptic" | "parabolic"
  int center = -1;
  double r = 0.0;
  double c_or_eta = 0.0;
  std::vector<TrialRecord> trials;
  double c_hat = 0.0;  // max observed ratio
  int witness_id = -1;
  bool phi_fail = false;  // some trial had inf == 0 (parity/disconnection witness)
};

HarnackReport elliptic_harnack(const Kernel& k, int center, double r, double c, int trials,
                               uint64_t seed);

// --- caloric functions ------------------------------------------------------

// u_{k+1} = P u_k; returns all time slices 0..steps
std::vector<std::vector<double>> evolve_caloric(const Kernel& k,
                                                const std::vector<double>& u0, int steps);

HarnackReport parabolic_harnack(const Kernel& k, int center, double r, double eta,
                                int trials, uint64_t seed);

struct OscillationResult {
  std::vector<double> radii;
  std::vector<double> osc;
  double rho_hat = 0.0;  // fitted per-step geometric decay of osc along the chain
  bool pass = false;     // rho_hat <= (C_E-1)/(C_E+1) + 0.1
};

OscillationResult holder_oscillation(const Kernel& k, const std::vector<double>& u, int x,
                                     const std::vector<double>& radii_desc, double c_e);

// ratio sum_{B(x,r)} |grad_P u|^2 m / (r^-2 sum_{B(x,Omega r)} u^2 m)
double reverse_poincare_check(const Kernel& k, const std::vector<double>& u, int x, double r,
                              double omega);

// --- balayage ----------------------------------------------------------------

struct BalayageResult {
  std::vector<std::vector<double>> v;  // time slices a+1..b, full length, annulus support
  double reconstruction_residual = 0.0;
  double min_v = 0.0;
};

// Decompose a caloric u on [a,b] x B(x,r) into the Dirichlet evolution of
// u(a,.) plus a nonnegative charge swept onto B(x,r1+h') \ B(x,r1).
BalayageResult balayage(const Kernel& k, int center, double r, double r1,
                        const std::vector<std::vector<double>>& u, int a, int b);

// --- Gaussian estimates --------------------------------------------------------

struct GaussianSample {
  int n = 0, x = -1, y = -1;
  double d = 0.0, p = 0.0, vol = 0.0;  // vol = V_m(x, sqrt n)
};

struct GaussianFit {
  int n_min = 0, n_max = 0;
  double margin_factor = 6.0;  // admissibility guard A
  // the upper-envelope regression uses samples with d/sqrt(n) inside this band;
  // beyond it the discrete large-deviation rate departs from the d^2/n model
  double band_lo = 1.0, band_hi = 1.3;
  std::vector<GaussianSample> samples;
  double c1_upper = 0.0, c2_upper = 0.0;  // upper envelope constants
  double c1_lower = 0.0, c2_lower = 0.0, c3 = 0.0;
  double residual_spread = 0.0;  // log-units spread around the upper fit
  double rho_min = 0.0, rho_max = 0.0;  // on-diagonal ratio range over admitted samples
  bool ge_pass = false;  // rho within [0.05, 20] over the admitted samples
};

GaussianFit gaussian_fit(const Kernel& k, const std::vector<int>& centers, int n_min,
                         int n_max, double margin_factor, int pair_budget,
                         double band_lo = 1.0, double band_hi = 1.3);

struct DiagonalProfile {
  std::vector<int> ns;
  std::vector<int> xs;
  std::vector<double> rho;  // V_m(x, sqrt n) p_n(x,x)
};

DiagonalProfile on_diagonal_profile(const Kernel& k, const std::vector<int>& centers,
                                    int n_min, int n_max, double margin_factor);

struct EdProfile {
  std::vector<int> ks;
  std::vector<double> ed;        // E_D(k,x)
  std::vector<double> scaled;    // E_D(k,x) * V_m(x, sqrt k)
  bool pass = false;             // max/min of scaled <= 50
};

EdProfile ed_profile(const Kernel& k, int x, double D, int kmax, double margin_factor);

// --- recurrence --------------------------------------------------------------

enum class RecurrenceVerdict { Transient, Recurrent, Inconclusive };
inline const char* to_string(RecurrenceVerdict v) {
  switch (v) {
    case RecurrenceVerdict::Transient: return "transient";
    case RecurrenceVerdict::Recurrent: return "recurrent";
    default: return "inconclusive";
  }
}

struct RecurrenceReport {
  RecurrenceVerdict verdict = RecurrenceVerdict::Inconclusive;
  double beta_hat = 0.0;  // volume growth exponent on the top decade
  double s_n = 0.0;       // partial sum of n / V_m(x,n)
  double tail_exponent = 0.0;
  bool analytic_volume = false;
  GreenStatus green_status = GreenStatus::NoConvergence;
};

RecurrenceReport classify_recurrence(const Kernel& k, int x, double n_max);

}  // namespace heatlab
