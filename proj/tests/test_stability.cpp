#include <doctest.h>

#include <cmath>

#include "srsp/stability.hpp"
#include "srsp/text_io.hpp"

using namespace srsp;

namespace {

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.domain.dim = 1;
  plan.domain.lengths = {3.141592653589793};
  plan.domain.modes = {16};
  plan.domain.mass = 0.0;
  plan.solver.lambda = 1.0;
  plan.solver.tol_poisson = 1e-10;
  plan.solver.tol_constraint = 1e-12;
  plan.evolution.dt = 2e-3;
  plan.evolution.t_end = 0.1;
  plan.evolution.record_every = 5;
  plan.perturbation_sizes = {0.0, 1e-3, 1e-2};
  plan.seeds = {7, 8};
  plan.tolerance = 1e-6;
  plan.threads = 2;
  return plan;
}

}  // namespace

TEST_CASE("stability campaign passes and orders cells by plan") {
  const ExperimentPlan plan = small_plan();
  const BoltzmannDistribution dist(1.0);
  const StabilityReport report = run_stability(plan, dist);

  REQUIRE(report.cells.size() == 6);
  CHECK(report.all_pass);
  CHECK(report.cells[0].epsilon == 0.0);
  CHECK(report.cells[0].seed == 7);
  CHECK(report.cells[1].seed == 8);
  CHECK(report.cells[2].epsilon == 1e-3);

  for (const auto& cell : report.cells) {
    CHECK(cell.pass);
    CHECK(cell.note.empty());
    CHECK(cell.casimir_gap >= -1e-9);
    CHECK(cell.violation_margin <= plan.tolerance);
  }
  // Unperturbed cells sit at the stationary point.
  CHECK(report.cells[0].casimir_gap <= 1e-9);
  CHECK(report.cells[0].max_lhs <= 1e-9);
  // The gap grows quadratically, so the fitted log-log slope is near 2.
  const double gap_small = report.cells[2].casimir_gap;
  const double gap_large = report.cells[4].casimir_gap;
  CHECK(gap_large > gap_small);
  CHECK(report.fitted_slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("stability reports are byte-identical across reruns and thread counts") {
  ExperimentPlan plan = small_plan();
  const BoltzmannDistribution dist(1.0);
  const std::string once = stability_csv(run_stability(plan, dist));
  const std::string twice = stability_csv(run_stability(plan, dist));
  CHECK(once == twice);
  plan.threads = 1;
  const std::string serial = stability_csv(run_stability(plan, dist));
  CHECK(serial == once);
  plan.threads = 4;
  CHECK(stability_csv(run_stability(plan, dist)) == once);
}

TEST_CASE("stability cells report failures in place instead of dropping rows") {
  ExperimentPlan plan = small_plan();
  plan.solver.max_outer = 1;
  const BoltzmannDistribution dist(1.0);
  const StabilityReport report = run_stability(plan, dist);
  REQUIRE(report.cells.size() == 6);
  CHECK(!report.all_pass);
  for (const auto& cell : report.cells) {
    CHECK(!cell.pass);
    CHECK(cell.note.find("stationary solve failed") == 0);
    CHECK(std::isnan(cell.casimir_gap));
  }
  CHECK(std::isnan(report.fitted_slope));
  // Six data rows survive in the rendered report.
  const std::string csv = stability_csv(report);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("plan validation rejects empty lists and bad tolerances") {
  ExperimentPlan plan = small_plan();
  plan.perturbation_sizes.clear();
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = small_plan();
  plan.seeds.clear();
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = small_plan();
  plan.tolerance = -1.0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = small_plan();
  plan.threads = -2;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}

TEST_CASE("lemma suite passes at small scale for both closed-form classes") {
  const ExperimentPlan plan = small_plan();
  SUBCASE("boltzmann") {
    const BoltzmannDistribution dist(1.0);
    const LemmaSuiteReport report = run_lemma_suite(plan, dist);
    REQUIRE(report.suites.size() == 4);
    for (const auto& suite : report.suites) {
      INFO(suite.name, ": ", suite.notes.empty() ? "" : suite.notes.front());
      CHECK(suite.failures == 0);
      CHECK(suite.checks > 0);
    }
    CHECK(report.all_pass());
  }
  SUBCASE("power cutoff exercises the compact-support branches") {
    const PowerCutoffDistribution dist(6.0, 2.0);
    ExperimentPlan cut = plan;
    cut.solver.lambda = 0.5;
    const LemmaSuiteReport report = run_lemma_suite(cut, dist, {"casimir", "state"});
    REQUIRE(report.suites.size() == 2);
    for (const auto& suite : report.suites) {
      INFO(suite.name, ": ", suite.notes.empty() ? "" : suite.notes.front());
      CHECK(suite.failures == 0);
    }
  }
}

TEST_CASE("lemma suite subset selection and unknown names") {
  const ExperimentPlan plan = small_plan();
  const BoltzmannDistribution dist(1.0);
  const LemmaSuiteReport casimir_only = run_lemma_suite(plan, dist, {"casimir"});
  REQUIRE(casimir_only.suites.size() == 1);
  CHECK(casimir_only.suites[0].name == "casimir");
  CHECK_THROWS_AS(run_lemma_suite(plan, dist, {"spectral"}), std::invalid_argument);
}

TEST_CASE("lemma suite rejects the non-monotone probe") {
  const ExperimentPlan plan = small_plan();
  const NonMonotoneProbe probe;
  const LemmaSuiteReport report = run_lemma_suite(plan, probe, {"casimir"});
  REQUIRE(report.suites.size() == 1);
  CHECK(report.suites[0].failures > 0);
  CHECK(!report.all_pass());
}
