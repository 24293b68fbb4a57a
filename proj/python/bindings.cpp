#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srsp/evolution.hpp"
#include "srsp/operators.hpp"
#include "srsp/snapshot.hpp"
#include "srsp/solver.hpp"
#include "srsp/stability.hpp"
#include "srsp/state.hpp"
#include "srsp/version.hpp"

namespace py = pybind11;
using namespace srsp;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stationary states, orbital dynamics, and stability checks for the "
            "semi-relativistic Schroedinger-Poisson system on a box";
  m.attr("__version__") = kVersion;

  py::class_<DomainSpec>(m, "DomainSpec",
                         "Rectangular box with Dirichlet walls and a per-axis mode budget")
      .def(py::init<>())
      .def_readwrite("dim", &DomainSpec::dim)
      .def_readwrite("lengths", &DomainSpec::lengths)
      .def_readwrite("modes", &DomainSpec::modes)
      .def_readwrite("mass", &DomainSpec::mass)
      .def_readwrite("grid_oversample", &DomainSpec::grid_oversample)
      .def("validate", &DomainSpec::validate)
      .def("mode_total", &DomainSpec::mode_total)
      .def("grid_counts", &DomainSpec::grid_counts)
      .def("grid_total", &DomainSpec::grid_total)
      .def(py::self == py::self);

  m.def("laplace_symbol", &laplace_symbol, py::arg("domain"), py::arg("counts"));
  m.def("kinetic_symbol", &kinetic_symbol, py::arg("domain"), py::arg("counts"));
  m.def("grid_coordinates", &grid_coordinates, py::arg("domain"), py::arg("axis"));
  m.def("grid_weight", &grid_weight, py::arg("domain"));

  py::class_<CasimirDistribution>(m, "CasimirDistribution",
                                  "Occupation profile together with its transforms")
      .def("f", &CasimirDistribution::f, py::arg("s"))
      .def("f_prime", &CasimirDistribution::f_prime, py::arg("s"))
      .def("f_inverse", &CasimirDistribution::f_inverse, py::arg("y"))
      .def("big_f", &CasimirDistribution::big_f, py::arg("s"))
      .def("f_star", &CasimirDistribution::f_star, py::arg("s"))
      .def("cutoff", &CasimirDistribution::cutoff)
      .def("kind", &CasimirDistribution::kind);

  py::class_<BoltzmannDistribution, CasimirDistribution>(m, "BoltzmannDistribution")
      .def(py::init<double>(), py::arg("beta"))
      .def_property_readonly("beta", &BoltzmannDistribution::beta);

  py::class_<PowerCutoffDistribution, CasimirDistribution>(m, "PowerCutoffDistribution")
      .def(py::init<double, double>(), py::arg("s0"), py::arg("p"))
      .def_property_readonly("s0", &PowerCutoffDistribution::s0)
      .def_property_readonly("p", &PowerCutoffDistribution::p);

  py::class_<NonMonotoneProbe, CasimirDistribution>(m, "NonMonotoneProbe").def(py::init<>());

  py::class_<CasimirValidationReport>(m, "CasimirValidationReport")
      .def_readonly("positive_on_support", &CasimirValidationReport::positive_on_support)
      .def_readonly("zero_beyond_cutoff", &CasimirValidationReport::zero_beyond_cutoff)
      .def_readonly("strictly_decreasing", &CasimirValidationReport::strictly_decreasing)
      .def_readonly("decay_bound", &CasimirValidationReport::decay_bound)
      .def_readonly("inverse_consistent", &CasimirValidationReport::inverse_consistent)
      .def_readonly("antiderivative_consistent",
                    &CasimirValidationReport::antiderivative_consistent)
      .def_readonly("decay_c", &CasimirValidationReport::decay_c)
      .def_readonly("decay_eps", &CasimirValidationReport::decay_eps)
      .def_readonly("failures", &CasimirValidationReport::failures)
      .def("ok", &CasimirValidationReport::ok);
  m.def("validate_casimir", &validate_casimir, py::arg("dist"), py::arg("s_max") = 40.0,
        py::arg("n_samples") = 2000);

  py::class_<ModeField>(m, "ModeField", "Real field as coefficients against the sine basis")
      .def(py::init<DomainSpec, std::vector<int>>(), py::arg("domain"), py::arg("counts"))
      .def(py::init<DomainSpec>(), py::arg("domain"))
      .def(py::init<DomainSpec, std::vector<int>, Eigen::VectorXd>(), py::arg("domain"),
           py::arg("counts"), py::arg("coeffs"))
      .def_property_readonly("domain", &ModeField::domain)
      .def_property_readonly("mode_counts", &ModeField::mode_counts)
      .def_property(
          "coeffs", [](const ModeField& f) { return f.coeffs(); },
          [](ModeField& f, const Eigen::VectorXd& c) {
            if (c.size() != f.coeffs().size()) throw std::invalid_argument("coeffs: wrong size");
            f.coeffs() = c;
          })
      .def("mode_total", &ModeField::mode_total)
      .def("l2_norm", &ModeField::l2_norm)
      .def("embedded", &ModeField::embedded, py::arg("counts"))
      .def("truncated", &ModeField::truncated, py::arg("counts"))
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__rmul__", [](const ModeField& f, double s) { return s * f; });

  m.def("to_grid", &to_grid, py::arg("field"));
  m.def("from_grid", &from_grid, py::arg("domain"), py::arg("grid_values"));
  m.def("inner_product_grid", &inner_product_grid, py::arg("a"), py::arg("b"));
  m.def("poisson_solve", &poisson_solve, py::arg("density"));
  m.def("hminus1_norm", &hminus1_norm, py::arg("field"));
  m.def(
      "hamiltonian_matrix",
      [](const ModeField& v) { return hamiltonian_matrix(v); }, py::arg("v"));
  m.def(
      "hamiltonian_matrix",
      [](const ModeField& v, const std::vector<int>& counts) {
        return hamiltonian_matrix(v, counts);
      },
      py::arg("v"), py::arg("counts"));

  py::class_<MixedState>(m, "MixedState",
                         "Orthonormal orbitals with positive occupation numbers")
      .def(py::init<DomainSpec, std::vector<int>, Eigen::MatrixXcd, Eigen::VectorXd>(),
           py::arg("domain"), py::arg("counts"), py::arg("orbitals"), py::arg("occupations"))
      .def_property_readonly("domain", &MixedState::domain)
      .def_property_readonly("mode_counts", &MixedState::mode_counts)
      .def_property_readonly("orbitals",
                             [](const MixedState& s) -> Eigen::MatrixXcd { return s.orbitals(); })
      .def_property_readonly("occupations", &MixedState::occupations)
      .def("num_orbitals", &MixedState::num_orbitals)
      .def("ortho_defect", &MixedState::ortho_defect)
      .def("mass", &MixedState::mass)
      .def("validate", &MixedState::validate, py::arg("tol") = 1e-8)
      .def("embedded", &MixedState::embedded, py::arg("counts"))
      .def("reorthonormalize", &MixedState::reorthonormalize);

  py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
      .def_readonly("kinetic", &EnergyBreakdown::kinetic)
      .def_readonly("field_gradient", &EnergyBreakdown::field_gradient)
      .def_readonly("field_overlap", &EnergyBreakdown::field_overlap)
      .def("total", &EnergyBreakdown::total);

  m.def("density", &density, py::arg("state"));
  m.def("energy", &energy, py::arg("state"));
  m.def("energy_breakdown", &energy_breakdown, py::arg("state"));
  m.def("casimir_energy", &casimir_energy, py::arg("state"), py::arg("dist"));
  m.def("g_functional", &g_functional, py::arg("state"), py::arg("v"), py::arg("sigma"),
        py::arg("dist"), py::arg("mass"));
  m.def("jensen_check", &jensen_check, py::arg("state"), py::arg("v"), py::arg("sigma"),
        py::arg("dist"));
  m.def("sobolev_hs_norm", py::overload_cast<const MixedState&, double>(&sobolev_hs_norm),
        py::arg("state"), py::arg("s"));
  m.def("sobolev_hs_norm", py::overload_cast<const ModeField&, double>(&sobolev_hs_norm),
        py::arg("field"), py::arg("s"));
  m.def("perturb", &perturb, py::arg("state"), py::arg("epsilon"), py::arg("seed"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &SolverConfig::lambda)
      .def_readwrite("damping", &SolverConfig::damping)
      .def_readwrite("max_outer", &SolverConfig::max_outer)
      .def_readwrite("tol_poisson", &SolverConfig::tol_poisson)
      .def_readwrite("tol_constraint", &SolverConfig::tol_constraint)
      .def_readwrite("sigma_lo", &SolverConfig::sigma_lo)
      .def_readwrite("sigma_hi", &SolverConfig::sigma_hi)
      .def_readwrite("tail_tol", &SolverConfig::tail_tol)
      .def("validate", &SolverConfig::validate);

  py::class_<StationarySolution>(m, "StationarySolution")
      .def_readonly("v0", &StationarySolution::v0)
      .def_readonly("sigma0", &StationarySolution::sigma0)
      .def_readonly("mu", &StationarySolution::mu)
      .def_readonly("state", &StationarySolution::state)
      .def_readonly("phi_value", &StationarySolution::phi_value)
      .def_readonly("residual_poisson", &StationarySolution::residual_poisson)
      .def_readonly("residual_constraint", &StationarySolution::residual_constraint)
      .def_readonly("occupation_tail", &StationarySolution::occupation_tail);

  py::class_<ScfIterationRecord>(m, "ScfIterationRecord")
      .def_readonly("iteration", &ScfIterationRecord::iteration)
      .def_readonly("phi", &ScfIterationRecord::phi)
      .def_readonly("residual_poisson", &ScfIterationRecord::residual_poisson)
      .def_readonly("residual_constraint", &ScfIterationRecord::residual_constraint)
      .def_readonly("sigma", &ScfIterationRecord::sigma)
      .def_readonly("damping", &ScfIterationRecord::damping);

  py::class_<ScfResult>(m, "ScfResult")
      .def_readonly("converged", &ScfResult::converged)
      .def_readonly("message", &ScfResult::message)
      .def_readonly("solution", &ScfResult::solution)
      .def_readonly("history", &ScfResult::history);

  m.def("phi_eval", &phi_eval, py::arg("v"), py::arg("sigma"), py::arg("dist"), py::arg("lambda_"));
  m.def("sigma_solve",
        py::overload_cast<const Eigen::VectorXd&, const CasimirDistribution&, double, double,
                          double>(&sigma_solve),
        py::arg("mu"), py::arg("dist"), py::arg("lambda_"), py::arg("sigma_lo") = -10.0,
        py::arg("sigma_hi") = 10.0);
  m.def("sigma_solve",
        py::overload_cast<const ModeField&, const CasimirDistribution&, double, double, double>(
            &sigma_solve),
        py::arg("v"), py::arg("dist"), py::arg("lambda_"), py::arg("sigma_lo") = -10.0,
        py::arg("sigma_hi") = 10.0);
  m.def("scf_solve", &scf_solve, py::arg("domain"), py::arg("dist"), py::arg("config"),
        py::arg("initial_v") = std::nullopt,
        py::call_guard<py::gil_scoped_release>());
  m.def("duality_check", &duality_check, py::arg("solution"), py::arg("dist"), py::arg("lambda_"));
  m.def("lemma10_bound", &lemma10_bound, py::arg("state"), py::arg("v"), py::arg("sigma"),
        py::arg("dist"), py::arg("lambda_"));

  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("dt", &EvolutionConfig::dt)
      .def_readwrite("t_end", &EvolutionConfig::t_end)
      .def_readwrite("record_every", &EvolutionConfig::record_every)
      .def_readwrite("renormalize_every", &EvolutionConfig::renormalize_every)
      .def("validate", &EvolutionConfig::validate);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("times", &TrajectoryRecord::times)
      .def_readonly("energy", &TrajectoryRecord::energy)
      .def_readonly("casimir", &TrajectoryRecord::casimir)
      .def_readonly("ortho_defect", &TrajectoryRecord::ortho_defect)
      .def_readonly("hminus1_dist", &TrajectoryRecord::hminus1_dist)
      .def_readonly("mass", &TrajectoryRecord::mass)
      .def_readonly("aborted", &TrajectoryRecord::aborted)
      .def_readonly("last_valid_time", &TrajectoryRecord::last_valid_time)
      .def("rows", &TrajectoryRecord::rows);

  m.def("strang_step", &strang_step, py::arg("state"), py::arg("dt"));
  m.def(
      "evolve",
      [](const MixedState& state, const EvolutionConfig& config, const CasimirDistribution& dist,
         const std::optional<ModeField>& reference_density) {
        py::gil_scoped_release release;
        return evolve(state, config, dist,
                      reference_density ? &*reference_density : nullptr);
      },
      py::arg("state"), py::arg("config"), py::arg("dist"),
      py::arg("reference_density") = std::nullopt);
  m.def("mild_residual", &mild_residual, py::arg("state0"), py::arg("state_dt"), py::arg("dt"));

  py::class_<ExperimentPlan>(m, "ExperimentPlan")
      .def(py::init<>())
      .def_readwrite("domain", &ExperimentPlan::domain)
      .def_readwrite("solver", &ExperimentPlan::solver)
      .def_readwrite("evolution", &ExperimentPlan::evolution)
      .def_readwrite("perturbation_sizes", &ExperimentPlan::perturbation_sizes)
      .def_readwrite("seeds", &ExperimentPlan::seeds)
      .def_readwrite("tolerance", &ExperimentPlan::tolerance)
      .def_readwrite("threads", &ExperimentPlan::threads)
      .def("validate", &ExperimentPlan::validate);

  py::class_<StabilityCell>(m, "StabilityCell")
      .def_readonly("epsilon", &StabilityCell::epsilon)
      .def_readonly("seed", &StabilityCell::seed)
      .def_readonly("casimir_gap", &StabilityCell::casimir_gap)
      .def_readonly("max_lhs", &StabilityCell::max_lhs)
      .def_readonly("violation_margin", &StabilityCell::violation_margin)
      .def_readonly("pass_", &StabilityCell::pass)
      .def_readonly("note", &StabilityCell::note);

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("cells", &StabilityReport::cells)
      .def_readonly("fitted_slope", &StabilityReport::fitted_slope)
      .def_readonly("all_pass", &StabilityReport::all_pass);

  m.def("run_stability", &run_stability, py::arg("plan"), py::arg("dist"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<SuiteResult>(m, "SuiteResult")
      .def_readonly("name", &SuiteResult::name)
      .def_readonly("checks", &SuiteResult::checks)
      .def_readonly("failures", &SuiteResult::failures)
      .def_readonly("worst_margin", &SuiteResult::worst_margin)
      .def_readonly("notes", &SuiteResult::notes);

  py::class_<LemmaSuiteReport>(m, "LemmaSuiteReport")
      .def_readonly("suites", &LemmaSuiteReport::suites)
      .def("all_pass", &LemmaSuiteReport::all_pass);

  m.def("run_lemma_suite", &run_lemma_suite, py::arg("plan"), py::arg("dist"),
        py::arg("suites") = std::vector<std::string>{},
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "state_to_json", [](const MixedState& s) { return state_to_json(s).dump(2); },
      py::arg("state"), "Serialize a state to a JSON document");
  m.def(
      "state_from_json",
      [](const std::string& text) { return state_from_json(parse_snapshot(text)); },
      py::arg("text"));
  m.def(
      "solution_to_json", [](const StationarySolution& s) { return solution_to_json(s).dump(2); },
      py::arg("solution"));
  m.def(
      "solution_from_json",
      [](const std::string& text) { return solution_from_json(parse_snapshot(text)); },
      py::arg("text"));
}
