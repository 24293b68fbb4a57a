#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "srsp/stability.hpp"

namespace srsp {

// Raised for malformed or invalid configuration; the CLI maps it to its
// configuration exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DistributionSpec {
  std::string kind;   // boltzmann | power_cutoff | non_monotone_probe
  double beta = 1.0;  // boltzmann
  double s0 = 1.0;    // power_cutoff support endpoint
  double p = 1.0;     // power_cutoff exponent

  std::unique_ptr<CasimirDistribution> make() const;
};

// One declarative experiment document.  Parsing validates every invariant and
// rejects unknown keys, so a config that parses is runnable.
struct RunConfig {
  DomainSpec domain;
  DistributionSpec distribution;
  SolverConfig solver;
  EvolutionConfig evolution;
  bool has_evolution = false;
  std::vector<double> perturbation_sizes;
  std::vector<std::uint64_t> stability_seeds;
  double stability_tolerance = 1e-6;
  bool has_stability = false;
  double perturb_epsilon = 0.0;  // initial kick applied by the evolve command
  std::string initial_state;     // optional solution snapshot path
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  int threads = 0;

  // Requires the evolution and stability sections respectively.
  ExperimentPlan plan() const;
};

// Parses and validates a config document.  Throws ConfigError with a line and
// column on malformed JSON and with a key path on schema violations.
RunConfig parse_run_config(const std::string& json_text);

std::uint64_t fnv1a_hash(const std::string& text);

// Deterministic run provenance: command, code version, hash of the config
// text, and the seeds in play.  Contains nothing volatile, so identical runs
// produce identical manifests.
nlohmann::ordered_json manifest_json(const RunConfig& config, const std::string& command,
                                     const std::string& config_text);

}  // namespace srsp
