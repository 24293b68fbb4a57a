#include "srsp/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "srsp/version.hpp"

namespace srsp {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

void reject_unknown(const ordered_json& obj, const char* where,
                    std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(keys.begin(), keys.end(),
                     [&](const char* k) { return key == k; }) == keys.end()) {
      fail("unknown key \"" + key + "\" in " + where);
    }
  }
}

const ordered_json* find(const ordered_json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number_at(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) fail(path + " must be a number");
  return v.get<double>();
}

int integer_at(const ordered_json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path + " must be an integer");
  return v.get<int>();
}

DomainSpec parse_domain(const ordered_json& obj) {
  if (!obj.is_object()) fail("domain must be an object");
  reject_unknown(obj, "domain", {"lengths", "modes", "mass", "grid_oversample"});
  DomainSpec d;
  const ordered_json* lengths = find(obj, "lengths");
  if (!lengths || !lengths->is_array() || lengths->empty()) {
    fail("domain.lengths must be a nonempty array");
  }
  for (const auto& e : *lengths) d.lengths.push_back(number_at(e, "domain.lengths entries"));
  d.dim = static_cast<int>(d.lengths.size());
  const ordered_json* modes = find(obj, "modes");
  if (!modes || !modes->is_array()) fail("domain.modes must be an array");
  for (const auto& e : *modes) d.modes.push_back(integer_at(e, "domain.modes entries"));
  if (const ordered_json* mass = find(obj, "mass")) d.mass = number_at(*mass, "domain.mass");
  if (const ordered_json* over = find(obj, "grid_oversample")) {
    d.grid_oversample = integer_at(*over, "domain.grid_oversample");
  }
  return d;
}

DistributionSpec parse_distribution(const ordered_json& obj) {
  if (!obj.is_object()) fail("distribution must be an object");
  DistributionSpec spec;
  const ordered_json* kind = find(obj, "kind");
  if (!kind || !kind->is_string()) fail("distribution.kind must be a string");
  spec.kind = kind->get<std::string>();
  if (spec.kind == "boltzmann") {
    reject_unknown(obj, "distribution", {"kind", "beta"});
    if (const ordered_json* beta = find(obj, "beta")) {
      spec.beta = number_at(*beta, "distribution.beta");
    }
  } else if (spec.kind == "power_cutoff") {
    reject_unknown(obj, "distribution", {"kind", "s0", "p"});
    if (const ordered_json* s0 = find(obj, "s0")) spec.s0 = number_at(*s0, "distribution.s0");
    if (const ordered_json* p = find(obj, "p")) spec.p = number_at(*p, "distribution.p");
  } else if (spec.kind == "non_monotone_probe") {
    reject_unknown(obj, "distribution", {"kind"});
  } else {
    fail("distribution.kind \"" + spec.kind + "\" is not recognized");
  }
  return spec;
}

SolverConfig parse_solver(const ordered_json& obj) {
  if (!obj.is_object()) fail("solver must be an object");
  reject_unknown(obj, "solver",
                 {"lambda", "damping", "max_outer", "tol_poisson", "tol_constraint",
                  "sigma_bracket", "tail_tol"});
  SolverConfig cfg;
  if (const ordered_json* v = find(obj, "lambda")) cfg.lambda = number_at(*v, "solver.lambda");
  if (const ordered_json* v = find(obj, "damping")) cfg.damping = number_at(*v, "solver.damping");
  if (const ordered_json* v = find(obj, "max_outer")) {
    cfg.max_outer = integer_at(*v, "solver.max_outer");
  }
  if (const ordered_json* v = find(obj, "tol_poisson")) {
    cfg.tol_poisson = number_at(*v, "solver.tol_poisson");
  }
  if (const ordered_json* v = find(obj, "tol_constraint")) {
    cfg.tol_constraint = number_at(*v, "solver.tol_constraint");
  }
  if (const ordered_json* v = find(obj, "sigma_bracket")) {
    if (!v->is_array() || v->size() != 2) fail("solver.sigma_bracket must be [lo, hi]");
    cfg.sigma_lo = number_at((*v)[0], "solver.sigma_bracket[0]");
    cfg.sigma_hi = number_at((*v)[1], "solver.sigma_bracket[1]");
  }
  if (const ordered_json* v = find(obj, "tail_tol")) {
    cfg.tail_tol = number_at(*v, "solver.tail_tol");
  }
  return cfg;
}

EvolutionConfig parse_evolution(const ordered_json& obj) {
  if (!obj.is_object()) fail("evolution must be an object");
  reject_unknown(obj, "evolution", {"dt", "t_end", "record_every", "renormalize_every"});
  EvolutionConfig cfg;
  if (const ordered_json* v = find(obj, "dt")) cfg.dt = number_at(*v, "evolution.dt");
  if (const ordered_json* v = find(obj, "t_end")) cfg.t_end = number_at(*v, "evolution.t_end");
  if (const ordered_json* v = find(obj, "record_every")) {
    cfg.record_every = integer_at(*v, "evolution.record_every");
  }
  if (const ordered_json* v = find(obj, "renormalize_every")) {
    cfg.renormalize_every = integer_at(*v, "evolution.renormalize_every");
  }
  return cfg;
}

}  // namespace

std::unique_ptr<CasimirDistribution> DistributionSpec::make() const {
  if (kind == "boltzmann") return std::make_unique<BoltzmannDistribution>(beta);
  if (kind == "power_cutoff") return std::make_unique<PowerCutoffDistribution>(s0, p);
  if (kind == "non_monotone_probe") return std::make_unique<NonMonotoneProbe>();
  throw ConfigError("config: distribution.kind \"" + kind + "\" is not recognized");
}

ExperimentPlan RunConfig::plan() const {
  if (!has_evolution) throw ConfigError("config: missing \"evolution\" section");
  if (!has_stability) throw ConfigError("config: missing \"stability\" section");
  ExperimentPlan plan;
  plan.domain = domain;
  plan.solver = solver;
  plan.evolution = evolution;
  plan.perturbation_sizes = perturbation_sizes;
  plan.seeds = stability_seeds;
  plan.tolerance = stability_tolerance;
  plan.threads = threads;
  return plan;
}

RunConfig parse_run_config(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(e.what());
  }
  if (!root.is_object()) fail("top level must be an object");
  reject_unknown(root, "the top level",
                 {"domain", "distribution", "solver", "evolution", "stability", "perturbation",
                  "initial_state", "output_dir", "seed", "threads"});

  RunConfig cfg;
  const ordered_json* domain = find(root, "domain");
  if (!domain) fail("missing \"domain\" section");
  cfg.domain = parse_domain(*domain);
  const ordered_json* dist = find(root, "distribution");
  if (!dist) fail("missing \"distribution\" section");
  cfg.distribution = parse_distribution(*dist);
  if (const ordered_json* solver = find(root, "solver")) cfg.solver = parse_solver(*solver);
  if (const ordered_json* evolution = find(root, "evolution")) {
    cfg.evolution = parse_evolution(*evolution);
    cfg.has_evolution = true;
  }
  if (const ordered_json* stability = find(root, "stability")) {
    if (!stability->is_object()) fail("stability must be an object");
    reject_unknown(*stability, "stability", {"perturbation_sizes", "seeds", "tolerance"});
    const ordered_json* sizes = find(*stability, "perturbation_sizes");
    if (!sizes || !sizes->is_array() || sizes->empty()) {
      fail("stability.perturbation_sizes must be a nonempty array");
    }
    for (const auto& e : *sizes) {
      cfg.perturbation_sizes.push_back(number_at(e, "stability.perturbation_sizes entries"));
    }
    const ordered_json* seeds = find(*stability, "seeds");
    if (!seeds || !seeds->is_array() || seeds->empty()) {
      fail("stability.seeds must be a nonempty array");
    }
    for (const auto& e : *seeds) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
        fail("stability.seeds entries must be nonnegative integers");
      }
      cfg.stability_seeds.push_back(e.get<std::uint64_t>());
    }
    if (const ordered_json* tol = find(*stability, "tolerance")) {
      cfg.stability_tolerance = number_at(*tol, "stability.tolerance");
      if (!(cfg.stability_tolerance >= 0.0) || !std::isfinite(cfg.stability_tolerance)) {
        fail("stability.tolerance must be finite and >= 0");
      }
    }
    cfg.has_stability = true;
  }
  if (const ordered_json* perturbation = find(root, "perturbation")) {
    if (!perturbation->is_object()) fail("perturbation must be an object");
    reject_unknown(*perturbation, "perturbation", {"epsilon"});
    if (const ordered_json* eps = find(*perturbation, "epsilon")) {
      cfg.perturb_epsilon = number_at(*eps, "perturbation.epsilon");
      if (!(cfg.perturb_epsilon >= 0.0) || !std::isfinite(cfg.perturb_epsilon)) {
        fail("perturbation.epsilon must be finite and >= 0");
      }
    }
  }
  if (const ordered_json* path = find(root, "initial_state")) {
    if (!path->is_string()) fail("initial_state must be a string path");
    cfg.initial_state = path->get<std::string>();
  }
  if (const ordered_json* out = find(root, "output_dir")) {
    if (!out->is_string()) fail("output_dir must be a string path");
    cfg.output_dir = out->get<std::string>();
  }
  if (const ordered_json* seed = find(root, "seed")) {
    if (!seed->is_number_integer() || seed->get<std::int64_t>() < 0) {
      fail("seed must be a nonnegative integer");
    }
    cfg.seed = seed->get<std::uint64_t>();
  }
  if (const ordered_json* threads = find(root, "threads")) {
    cfg.threads = integer_at(*threads, "threads");
    if (cfg.threads < 0) fail("threads must be >= 0");
  }

  // Every invariant is enforced at parse time so a parsed config is runnable.
  try {
    cfg.domain.validate();
    cfg.solver.validate();
    if (cfg.has_evolution) cfg.evolution.validate();
    cfg.distribution.make();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return cfg;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

nlohmann::ordered_json manifest_json(const RunConfig& config, const std::string& command,
                                     const std::string& config_text) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(config_text)));
  nlohmann::ordered_json manifest{{"command", command},
                                  {"code_version", kVersion},
                                  {"config_hash", std::string("fnv1a64:") + hex},
                                  {"seed", config.seed}};
  if (config.has_stability) manifest["stability_seeds"] = config.stability_seeds;
  return manifest;
}

}  // namespace srsp
