#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srsp/run_config.hpp"
#include "srsp/snapshot.hpp"
#include "srsp/text_io.hpp"
#include "srsp/version.hpp"

namespace fs = std::filesystem;
using namespace srsp;

namespace {

constexpr int kOk = 0;
constexpr int kNumericalFailure = 1;
constexpr int kConfigFailure = 2;

struct CommonArgs {
  std::string config_path;
  std::string output_dir;  // empty: use the config's output_dir
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read \"" + path.string() + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write \"" + path.string() + "\"");
}

struct LoadedRun {
  RunConfig config;
  std::string config_text;
  std::unique_ptr<CasimirDistribution> dist;
  fs::path out;
};

LoadedRun load(const CommonArgs& args, const std::string& command) {
  LoadedRun run;
  run.config_text = read_file(args.config_path);
  run.config = parse_run_config(run.config_text);
  if (args.seed) run.config.seed = *args.seed;
  if (args.threads) {
    if (*args.threads < 0) throw ConfigError("config: threads must be >= 0");
    run.config.threads = *args.threads;
  }
  run.dist = run.config.distribution.make();
  run.out = args.output_dir.empty() ? fs::path(run.config.output_dir) : fs::path(args.output_dir);
  std::error_code ec;
  fs::create_directories(run.out, ec);
  if (ec) throw ConfigError("config: cannot create output directory \"" + run.out.string() + "\"");
  write_file(run.out / "manifest.json",
             manifest_json(run.config, command, run.config_text).dump(2) + "\n");
  return run;
}

int cmd_stationary(const CommonArgs& args) {
  LoadedRun run = load(args, "stationary");
  const ScfResult res = scf_solve(run.config.domain, *run.dist, run.config.solver);
  write_file(run.out / "convergence.csv", convergence_csv(res.history));
  if (!res.converged) {
    std::cerr << "stationary: " << res.message << "\n";
    return kNumericalFailure;
  }
  const StationarySolution& sol = *res.solution;
  write_file(run.out / "solution.json", solution_to_json(sol).dump(2) + "\n");
  write_file(run.out / "profiles.csv",
             profiles_csv(run.config.domain, sol.v0, density(sol.state)));
  const double gap = duality_check(sol, *run.dist, run.config.solver.lambda);
  std::cout << "stationary: converged in " << res.history.size() << " iterations\n"
            << "  phi=" << format_shortest(sol.phi_value)
            << " sigma0=" << format_shortest(sol.sigma0)
            << " orbitals=" << sol.state.num_orbitals() << "\n"
            << "  residual_poisson=" << format_shortest(sol.residual_poisson)
            << " residual_constraint=" << format_shortest(sol.residual_constraint)
            << " duality_gap=" << format_shortest(gap) << "\n";
  return kOk;
}

// The initial state comes from a snapshot when the config names one and from
// a fresh stationary solve otherwise.
StationarySolution initial_solution(const LoadedRun& run) {
  if (!run.config.initial_state.empty()) {
    try {
      return solution_from_json(parse_snapshot(read_file(run.config.initial_state)));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config: initial_state: " + std::string(e.what()));
    }
  }
  const ScfResult res = scf_solve(run.config.domain, *run.dist, run.config.solver);
  if (!res.converged) throw std::runtime_error("stationary solve failed: " + res.message);
  return *res.solution;
}

int cmd_evolve(const CommonArgs& args) {
  LoadedRun run = load(args, "evolve");
  if (!run.config.has_evolution) throw ConfigError("config: missing \"evolution\" section");
  const StationarySolution sol = initial_solution(run);
  const ModeField n0 = density(sol.state);
  const MixedState start = run.config.perturb_epsilon > 0.0
                               ? perturb(sol.state, run.config.perturb_epsilon, run.config.seed)
                               : sol.state;
  const auto [final_state, traj] = evolve(start, run.config.evolution, *run.dist, &n0);
  write_file(run.out / "trajectory.csv", trajectory_csv(traj));
  if (traj.aborted) {
    std::cerr << "evolve: aborted on a non-finite observable; last valid t="
              << format_shortest(traj.last_valid_time) << " (" << traj.rows()
              << " records kept)\n";
    return kNumericalFailure;
  }
  write_file(run.out / "final_state.json", state_to_json(final_state).dump(2) + "\n");
  std::cout << "evolve: " << traj.rows() << " records to t="
            << format_shortest(traj.times.back()) << "\n";
  return kOk;
}

int cmd_stability(const CommonArgs& args) {
  LoadedRun run = load(args, "stability");
  if (!run.config.has_evolution) throw ConfigError("config: missing \"evolution\" section");
  const ExperimentPlan plan = run.config.plan();
  const StabilityReport report = run_stability(plan, *run.dist);
  write_file(run.out / "stability.csv", stability_csv(report));

  nlohmann::ordered_json summary{{"all_pass", report.all_pass},
                                 {"fitted_slope", report.fitted_slope},
                                 {"cells", report.cells.size()}};
  auto notes = nlohmann::ordered_json::array();
  int failures = 0;
  for (const auto& cell : report.cells) {
    if (!cell.pass) ++failures;
    if (!cell.note.empty()) {
      notes.push_back({{"epsilon", cell.epsilon}, {"seed", cell.seed}, {"note", cell.note}});
    }
  }
  summary["failures"] = failures;
  summary["notes"] = std::move(notes);
  write_file(run.out / "summary.json", summary.dump(2) + "\n");

  std::cout << "stability: " << (report.cells.size() - failures) << "/" << report.cells.size()
            << " cells pass, fitted slope " << format_shortest(report.fitted_slope) << "\n";
  if (!report.all_pass) {
    std::cerr << "stability: " << failures << " cell(s) failed\n";
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_verify(const CommonArgs& args, const std::vector<std::string>& suites) {
  for (const auto& name : suites) {
    if (name != "casimir" && name != "state" && name != "solver" && name != "evolution") {
      throw ConfigError("config: unknown suite \"" + name + "\"");
    }
  }
  LoadedRun run = load(args, "verify");
  ExperimentPlan plan;
  plan.domain = run.config.domain;
  plan.solver = run.config.solver;
  if (run.config.has_evolution) plan.evolution = run.config.evolution;
  plan.perturbation_sizes =
      run.config.has_stability ? run.config.perturbation_sizes : std::vector<double>{1e-3};
  plan.seeds = run.config.has_stability ? run.config.stability_seeds
                                        : std::vector<std::uint64_t>{run.config.seed};
  plan.tolerance = run.config.stability_tolerance;
  plan.threads = run.config.threads;

  const LemmaSuiteReport report = run_lemma_suite(plan, *run.dist, suites);

  nlohmann::ordered_json verdict{{"pass", report.all_pass()}};
  auto list = nlohmann::ordered_json::array();
  for (const auto& suite : report.suites) {
    list.push_back({{"name", suite.name},
                    {"checks", suite.checks},
                    {"failures", suite.failures},
                    {"worst_margin", suite.worst_margin},
                    {"notes", suite.notes}});
    std::cout << "verify: " << suite.name << " " << (suite.checks - suite.failures) << "/"
              << suite.checks << " checks pass\n";
  }
  verdict["suites"] = std::move(list);
  write_file(run.out / "verdict.json", verdict.dump(2) + "\n");
  return report.all_pass() ? kOk : kNumericalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary states, orbital dynamics, and stability checks for the "
               "semi-relativistic Schroedinger-Poisson system on a box"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<std::string> suites;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON experiment description")
        ->required();
    sub->add_option("--output", args.output_dir, "output directory (default: from config)");
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--threads", args.threads, "worker count, 0 = machine parallelism");
  };
  CLI::App* stationary =
      app.add_subcommand("stationary", "solve the dual problem and write the solution");
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "propagate a state and record observables");
  CLI::App* stability =
      app.add_subcommand("stability", "perturb-and-evolve campaign for the energy bound");
  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  for (CLI::App* sub : {stationary, evolve_cmd, stability, verify}) add_common(sub);
  verify->add_option("--suites", suites, "comma-separated subset of suites")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*stationary) return cmd_stationary(args);
    if (*evolve_cmd) return cmd_evolve(args);
    if (*stability) return cmd_stability(args);
    return cmd_verify(args, suites);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}
