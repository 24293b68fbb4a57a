#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srsp/casimir.hpp"
#include "srsp/evolution.hpp"
#include "srsp/solver.hpp"

namespace srsp {

// One full experiment: a stationary solve followed by a perturb-and-evolve
// cell for every (epsilon, seed) pair.
struct ExperimentPlan {
  DomainSpec domain;
  SolverConfig solver;
  EvolutionConfig evolution;
  std::vector<double> perturbation_sizes;
  std::vector<std::uint64_t> seeds;
  double tolerance = 1e-6;  // slack allowed in the stability inequality
  int threads = 0;          // worker count, 0 = hardware concurrency

  void validate() const;
};

struct StabilityCell {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double casimir_gap = 0.0;       // H_C(perturbed) - H_C(stationary)
  double max_lhs = 0.0;           // max over records of (1/2) dist^2
  double violation_margin = 0.0;  // max_lhs - casimir_gap
  bool pass = false;
  std::string note;  // failure annotation; empty on success
};

struct StabilityReport {
  // Plan order: perturbation sizes outer, seeds inner.  Failed cells stay in
  // place with NaN numbers and a note; no row is dropped.
  std::vector<StabilityCell> cells;
  // Least-squares slope of log(casimir_gap) against log(epsilon) over the
  // clean cells with positive gap; NaN when fewer than two points remain.
  double fitted_slope = 0.0;
  bool all_pass = false;
};

// Solves the stationary problem once, then for every cell perturbs with the
// cell's seed, evolves against the stationary reference density, and tests
//   max_t (1/2) |n(t) - n0|^2  <=  H_C(t=0) - H_C(stationary) + tolerance
// together with casimir_gap >= -1e-9.  Cells run on a worker pool but land
// in preassigned slots, so equal plans produce identical reports.
StabilityReport run_stability(const ExperimentPlan& plan, const CasimirDistribution& dist);

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  // Smallest slack seen across the suite's inequalities; negative means some
  // bound was violated by that amount.
  double worst_margin = 0.0;
  std::vector<std::string> notes;
};

struct LemmaSuiteReport {
  std::vector<SuiteResult> suites;
  bool all_pass() const;
};

// Deterministic property sweep at the plan's scale.  Suites:
//   "casimir"   transform consistency, conjugacy, class validation
//   "state"     density bookkeeping, trace inequalities, screening identity
//   "solver"    ascent, optimality, uniqueness, constraint, membership
//   "evolution" conservation, isospectrality, order, stability inequality
// An empty selection runs all four; unknown names throw
// std::invalid_argument.
LemmaSuiteReport run_lemma_suite(const ExperimentPlan& plan, const CasimirDistribution& dist,
                                 const std::vector<std::string>& suites = {});

}  // namespace srsp
