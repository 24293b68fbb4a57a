import math

import numpy as np
import pytest

import srsp


def desk_domain(modes=24, mass=0.0):
    d = srsp.DomainSpec()
    d.dim = 1
    d.lengths = [math.pi]
    d.modes = [modes]
    d.mass = mass
    return d


@pytest.fixture(scope="module")
def solved():
    cfg = srsp.SolverConfig()
    cfg.lambda_ = 1.0
    res = srsp.scf_solve(desk_domain(), srsp.BoltzmannDistribution(1.0), cfg)
    assert res.converged, res.message
    return res


def test_version():
    assert srsp.__version__ == "0.1.0"


def test_kinetic_symbol_closed_form():
    d = desk_domain(modes=8)
    sym = srsp.kinetic_symbol(d, d.modes)
    assert sym.shape == (8,)
    # massless symbol on [0, pi] is just the mode number
    assert np.allclose(sym, np.arange(1, 9), rtol=0, atol=1e-12)


def test_stationary_solve_residuals(solved):
    sol = solved.solution
    assert sol.residual_poisson <= 1e-8
    assert sol.residual_constraint <= 1e-10
    assert srsp.to_grid(sol.v0).min() >= -1e-10
    gap = srsp.duality_check(sol, srsp.BoltzmannDistribution(1.0), 1.0)
    assert abs(gap) <= 1e-7


def test_multiplier_root_frozen_value():
    d = desk_domain(modes=64)
    zero = srsp.ModeField(d, d.grid_counts())
    sigma = srsp.sigma_solve(zero, srsp.BoltzmannDistribution(1.0), 1.0)
    assert sigma == pytest.approx(-math.log(math.e - 1.0), abs=1e-10)


def test_evolution_conserves(solved):
    dist = srsp.BoltzmannDistribution(1.0)
    state = srsp.perturb(solved.solution.state, 1e-3, 7)
    cfg = srsp.EvolutionConfig()
    cfg.dt = 2e-3
    cfg.t_end = 0.1
    cfg.record_every = 10
    final, traj = srsp.evolve(state, cfg, dist, srsp.density(solved.solution.state))
    assert not traj.aborted
    energy = np.asarray(traj.energy)
    assert np.max(np.abs(energy - energy[0])) <= 1e-8 * abs(energy[0])
    assert max(traj.ortho_defect) <= 1e-10
    assert np.array_equal(np.asarray(final.occupations), np.asarray(state.occupations))


def test_perturb_deterministic(solved):
    a = srsp.perturb(solved.solution.state, 1e-2, 3)
    b = srsp.perturb(solved.solution.state, 1e-2, 3)
    assert np.array_equal(a.orbitals, b.orbitals)


def test_snapshot_round_trip(solved):
    text = srsp.solution_to_json(solved.solution)
    back = srsp.solution_from_json(text)
    assert srsp.solution_to_json(back) == text
    assert np.array_equal(np.asarray(back.mu), np.asarray(solved.solution.mu))


def test_casimir_validation():
    assert srsp.validate_casimir(srsp.BoltzmannDistribution(1.0)).ok()
    report = srsp.validate_casimir(srsp.NonMonotoneProbe())
    assert not report.ok()
    assert report.failures


def test_stability_campaign():
    plan = srsp.ExperimentPlan()
    plan.domain = desk_domain(modes=16)
    plan.solver = srsp.SolverConfig()
    plan.evolution = srsp.EvolutionConfig()
    plan.evolution.dt = 2e-3
    plan.evolution.t_end = 0.05
    plan.evolution.record_every = 5
    plan.perturbation_sizes = [1e-3, 1e-2]
    plan.seeds = [1, 2]
    report = srsp.run_stability(plan, srsp.BoltzmannDistribution(1.0))
    assert report.all_pass
    assert len(report.cells) == 4
    assert all(cell.pass_ for cell in report.cells)
