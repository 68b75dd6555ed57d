#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "heatlab/config.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

struct RunnerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::shared_ptr<Space> space_from_config(const ConfigSection& sec);
Kernel kernel_from_config(const ConfigSection& sec, std::shared_ptr<const Space> space);

// Execute the experiments of a parsed config in order; emit CSV/SVG artifacts
// and a summary into `outdir`.
RunReport run_config(const Config& cfg, const std::string& outdir, uint64_t seed,
                     bool dump_witness = false);

// Bundled experiment batteries; `identities`, `paper-examples` or `full`.
RunReport run_suite(const std::string& name, const std::string& outdir, uint64_t seed);

namespace battery {

struct Outcome {
  std::string name;
  bool pass = false;
  std::map<std::string, double> stats;
  std::string note;
};

// exact small-graph checks: kernel lemmas, forms, discrete calculus, polynomials
std::vector<Outcome> identities(uint64_t seed);
// broken line Poincare threshold, bipartite counterexample, radial-weight
// recurrence sweep, annulus compatibility audit
std::vector<Outcome> paper_examples(uint64_t seed);
// two-sided Gaussian check on the 2-D lattice lazy ball walk
std::vector<Outcome> lattice2d_gaussian(uint64_t seed);
// elliptic + parabolic Harnack batteries and the non-lazy parity witness
std::vector<Outcome> harnack_battery(uint64_t seed);
// degree-3 tree fails doubling and the on-diagonal Gaussian sandwich
std::vector<Outcome> tree_negative_control(uint64_t seed);
// net structural certification on a 500+ vertex net
std::vector<Outcome> net_certification(uint64_t seed);
// balayage reconstruction battery on the 1-D lattice window
std::vector<Outcome> balayage_battery(uint64_t seed);
// Caccioppoli + integral maximum principle batteries incl. the non-lazy violation
std::vector<Outcome> caccioppoli_imp_battery(uint64_t seed);
// cross-checks: spaces passing the Harnack battery must also pass the
// doubling and Poincare estimators; Sobolev-stable implies doubling
std::vector<Outcome> consistency_checks(uint64_t seed);

}  // namespace battery

}  // namespace heatlab
