#include "srsp/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include <Eigen/Dense>

#include "srsp/operators.hpp"

namespace srsp {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
// A perturbation may not push the Casimir energy below the stationary value.
constexpr double kGapFloor = -1e-9;

double uniform01(std::mt19937_64& rng) { return ((rng() >> 11) + 0.5) * 0x1p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return kNan;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return kNan;
  return sxy / sxx;
}

}  // namespace

void ExperimentPlan::validate() const {
  domain.validate();
  solver.validate();
  evolution.validate();
  if (perturbation_sizes.empty()) {
    throw std::invalid_argument("plan: perturbation_sizes must be nonempty");
  }
  for (double eps : perturbation_sizes) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
      throw std::invalid_argument("plan: perturbation sizes must be finite and >= 0");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("plan: seeds must be nonempty");
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    throw std::invalid_argument("plan: tolerance must be finite and >= 0");
  }
  if (threads < 0) throw std::invalid_argument("plan: threads must be >= 0");
}

StabilityReport run_stability(const ExperimentPlan& plan, const CasimirDistribution& dist) {
  plan.validate();
  StabilityReport report;
  report.cells.resize(plan.perturbation_sizes.size() * plan.seeds.size());
  std::size_t idx = 0;
  for (double eps : plan.perturbation_sizes) {
    for (std::uint64_t seed : plan.seeds) {
      report.cells[idx].epsilon = eps;
      report.cells[idx].seed = seed;
      ++idx;
    }
  }

  const ScfResult base = scf_solve(plan.domain, dist, plan.solver);
  if (!base.converged) {
    for (auto& cell : report.cells) {
      cell.casimir_gap = cell.max_lhs = cell.violation_margin = kNan;
      cell.note = "stationary solve failed: " + base.message;
    }
    report.fitted_slope = kNan;
    return report;
  }
  const StationarySolution& sol = *base.solution;
  const ModeField n0 = density(sol.state);
  const double casimir0 = casimir_energy(sol.state, dist);

  const auto run_cell = [&](StabilityCell& cell) {
    try {
      const MixedState kicked = perturb(sol.state, cell.epsilon, cell.seed);
      cell.casimir_gap = casimir_energy(kicked, dist) - casimir0;
      const auto [final_state, traj] = evolve(kicked, plan.evolution, dist, &n0);
      (void)final_state;
      double max_lhs = 0.0;
      for (double h : traj.hminus1_dist) max_lhs = std::max(max_lhs, 0.5 * h * h);
      cell.max_lhs = max_lhs;
      cell.violation_margin = max_lhs - cell.casimir_gap;
      if (traj.aborted) {
        cell.note = "evolution aborted at t=" + std::to_string(traj.last_valid_time);
        return;
      }
      cell.pass = cell.violation_margin <= plan.tolerance && cell.casimir_gap >= kGapFloor;
    } catch (const std::exception& e) {
      cell.casimir_gap = cell.max_lhs = cell.violation_margin = kNan;
      cell.note = e.what();
    }
  };

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  int workers = plan.threads > 0 ? plan.threads : std::max(hw, 1);
  workers = std::min<int>(workers, static_cast<int>(report.cells.size()));
  if (workers <= 1) {
    for (auto& cell : report.cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= report.cells.size()) return;
          run_cell(report.cells[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  report.all_pass = std::all_of(report.cells.begin(), report.cells.end(),
                                [](const StabilityCell& c) { return c.pass; });
  std::vector<double> log_eps, log_gap;
  for (const auto& cell : report.cells) {
    if (cell.note.empty() && cell.epsilon > 0.0 && cell.casimir_gap > 0.0) {
      log_eps.push_back(std::log(cell.epsilon));
      log_gap.push_back(std::log(cell.casimir_gap));
    }
  }
  report.fitted_slope = least_squares_slope(log_eps, log_gap);
  return report;
}

namespace {

// Accumulates one suite's outcomes.  `margin` is the raw slack of the bound
// being checked (negative = violated); tolerances already applied by `ok`.
struct SuiteRun {
  SuiteResult result;

  explicit SuiteRun(std::string name) {
    result.name = std::move(name);
    result.worst_margin = std::numeric_limits<double>::infinity();
  }

  void check(bool ok, double margin, const std::string& label) {
    result.checks += 1;
    result.worst_margin = std::min(result.worst_margin, margin);
    if (!ok) {
      result.failures += 1;
      if (result.notes.size() < 16) result.notes.push_back(label);
    }
  }

  void note(const std::string& text) {
    if (result.notes.size() < 16) result.notes.push_back(text);
  }

  SuiteResult finish() {
    if (result.checks == 0) result.worst_margin = 0.0;
    return std::move(result);
  }
};

// Nonnegative potential with band-limited structure: random coefficients on
// the orbital mode box, rectified on the grid.
ModeField random_potential(const DomainSpec& domain, double amplitude, std::mt19937_64& rng) {
  ModeField raw(domain, domain.modes);
  for (int a = 0; a < raw.mode_total(); ++a) raw[a] = uniform(rng, -1.0, 1.0);
  Eigen::VectorXd grid = to_grid(raw).cwiseAbs();
  const double top = grid.maxCoeff();
  if (top > 0.0) grid *= amplitude / top;
  return from_grid(domain, grid);
}

Eigen::MatrixXcd random_orthonormal(int rows, int cols, std::mt19937_64& rng) {
  Eigen::MatrixXcd a(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      a(i, j) = std::complex<double>(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

MixedState random_state(const DomainSpec& domain, const CasimirDistribution& dist, int orbitals,
                        std::mt19937_64& rng) {
  const int m = domain.mode_total();
  const int k = std::min(orbitals, m);
  Eigen::VectorXd occ(k);
  const double hi = std::min(dist.cutoff() - 0.1, 4.0);
  for (int i = 0; i < k; ++i) occ[i] = dist.f(uniform(rng, -1.0, hi));
  return MixedState(domain, domain.modes, random_orthonormal(m, k, rng), occ);
}

double dirichlet_energy(const ModeField& f) {
  const Eigen::VectorXd mu = laplace_symbol(f.domain(), f.mode_counts());
  return 0.5 * (mu.array() * f.coeffs().array().square()).sum();
}

// Occupation-weighted distance between two states on a shared mode box.
double state_distance(const MixedState& a, const MixedState& b) {
  double sum = 0.0;
  for (int k = 0; k < a.num_orbitals(); ++k) {
    sum += a.occupations()[k] * (a.orbitals().col(k) - b.orbitals().col(k)).squaredNorm();
  }
  return std::sqrt(sum);
}

SuiteResult casimir_suite(const CasimirDistribution& dist, std::mt19937_64& rng) {
  SuiteRun run("casimir");

  const CasimirValidationReport report = validate_casimir(dist);
  {
    std::string label = "class validation";
    for (const auto& f : report.failures) label += "; " + f;
    run.check(report.ok(), report.ok() ? 0.0 : -1.0, label);
  }

  // Conjugacy inequality s*tau <= big_f(tau) + f_star(s) over a sign grid.
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double s = -5.0 * i / 99.0;
    for (int j = 0; j < 100; ++j) {
      const double tau = 8.0 * j / 99.0;
      worst = std::min(worst, dist.big_f(tau) + dist.f_star(s) - s * tau);
    }
  }
  run.check(worst >= -1e-12, worst, "conjugacy inequality on 100x100 grid");

  // Equality on the graph: s = -f(tau) closes the inequality.
  const double support_hi = std::min(dist.cutoff() - 1e-3, 6.0);
  for (int i = 0; i < 50; ++i) {
    const double tau = uniform(rng, 0.0, support_hi);
    const double s = -dist.f(tau);
    const double gap = dist.big_f(tau) + dist.f_star(s) - s * tau;
    const double tol = 1e-9 * (1.0 + std::abs(dist.f_star(s)));
    run.check(std::abs(gap) <= tol, tol - std::abs(gap), "conjugacy equality on the graph");
  }

  run.check(std::abs(dist.f_star(0.0)) <= 1e-12, 1e-12 - std::abs(dist.f_star(0.0)),
            "conjugate vanishes at zero");

  // d big_f / ds = -f away from the cutoff.
  const double deriv_hi = std::min(dist.cutoff() - 0.05, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double s = deriv_hi * i / 19.0;
    const double h = 1e-5;
    const double slope = (dist.big_f(s - h) - dist.big_f(s + h)) / (2.0 * h);
    const double err = std::abs(slope - dist.f(s)) / (1.0 + std::abs(dist.f(s)));
    run.check(err <= 1e-6, 1e-6 - err, "antiderivative slope matches f");
  }

  return run.finish();
}

SuiteResult state_suite(const ExperimentPlan& plan, const CasimirDistribution& dist,
                        std::mt19937_64& rng) {
  SuiteRun run("state");
  const DomainSpec& domain = plan.domain;
  const double lambda = plan.solver.lambda;

  // Density bookkeeping: nonnegative on the grid, integral equals the mass.
  for (int t = 0; t < 20; ++t) {
    const MixedState state = random_state(domain, dist, 6, rng);
    const ModeField n = density(state);
    const Eigen::VectorXd grid = to_grid(n);
    const double scale = 1.0 + grid.cwiseAbs().maxCoeff();
    run.check(grid.minCoeff() >= -1e-10 * scale, grid.minCoeff(), "density nonnegative on grid");
    const double integral = grid_weight(domain) * grid.sum();
    const double defect = std::abs(integral - state.mass());
    const double tol = 1e-10 * (1.0 + state.mass());
    run.check(defect <= tol, tol - defect, "density integral equals occupation sum");
  }

  // Trace Jensen inequality for single orbitals against the full spectrum.
  {
    const ModeField v = random_potential(domain, 0.5, rng);
    const double sigma = 0.3;
    const int m = domain.mode_total();
    for (int t = 0; t < 1000; ++t) {
      Eigen::MatrixXcd psi = random_orthonormal(m, 1, rng);
      const MixedState one(domain, domain.modes, std::move(psi), Eigen::VectorXd::Ones(1));
      const auto [lhs, rhs] = jensen_check(one, v, sigma, dist);
      run.check(lhs <= rhs + 1e-10, rhs + 1e-10 - lhs, "orbital trace Jensen inequality");
    }
  }

  // Lagrangian dominance: the pairing never goes below the dual value.
  for (int t = 0; t < 100; ++t) {
    const MixedState state = random_state(domain, dist, 6, rng);
    const ModeField v = random_potential(domain, uniform(rng, 0.0, 1.0), rng);
    const double sigma = uniform(rng, -1.0, 1.0);
    const double g = g_functional(state, v, sigma, dist, lambda);
    const double phi = phi_eval(v, sigma, dist, lambda);
    const double tol = 1e-9 * (1.0 + std::abs(phi));
    run.check(g >= phi - tol, g - phi + tol, "pairing dominates dual value");
  }

  // Equality at the eigenbasis with occupations on the graph of f.
  for (int t = 0; t < 10; ++t) {
    const ModeField v = random_potential(domain, uniform(rng, 0.2, 1.0), rng);
    const EigenDecomposition eig = eigendecompose(hamiltonian_matrix(v));
    const double sigma = sigma_solve(eig.eigenvalues, dist, lambda);
    const int m = domain.mode_total();
    std::vector<int> kept;
    for (int j = 0; j < m; ++j) {
      if (dist.f(eig.eigenvalues[j] + sigma) > 0.0) kept.push_back(j);
    }
    Eigen::MatrixXcd psi(m, kept.size());
    Eigen::VectorXd occ(kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) {
      psi.col(j) = eig.eigenvectors.col(kept[j]).cast<std::complex<double>>();
      occ[j] = dist.f(eig.eigenvalues[kept[j]] + sigma);
    }
    const MixedState state(domain, domain.modes, std::move(psi), occ);
    const double g = g_functional(state, v, sigma, dist, lambda);
    const double phi = phi_eval(v, sigma, dist, lambda);
    const double tol = 1e-9 * (1.0 + std::abs(phi));
    run.check(std::abs(g - phi) <= tol, tol - std::abs(g - phi),
              "pairing equals dual value at the eigenbasis");
  }

  // Screening identity: the pairing's defect against the Casimir energy is
  // the Dirichlet energy of the potential mismatch plus the multiplier term.
  for (int t = 0; t < 30; ++t) {
    const MixedState state = random_state(domain, dist, 6, rng);
    const ModeField v = random_potential(domain, uniform(rng, 0.0, 1.0), rng);
    const double sigma = uniform(rng, -1.0, 1.0);
    const double g = g_functional(state, v, sigma, dist, lambda);
    const double hc = casimir_energy(state, dist);
    const ModeField self = poisson_solve(density(state));
    const ModeField diff = self - v.embedded(self.mode_counts());
    const double deficit = dirichlet_energy(diff);
    const double identity =
        hc - g - deficit + sigma * (state.mass() - lambda);
    const double tol = 1e-9 * (1.0 + std::abs(hc) + std::abs(g));
    run.check(std::abs(identity) <= tol, tol - std::abs(identity),
              "screening identity for the pairing deficit");
  }

  // Casimir-dual bound with the matching occupation mass.
  for (int t = 0; t < 30; ++t) {
    const MixedState state = random_state(domain, dist, 6, rng);
    const ModeField v = random_potential(domain, uniform(rng, 0.0, 1.0), rng);
    const double sigma = uniform(rng, -1.0, 1.0);
    const auto [gap, quad] = lemma10_bound(state, v, sigma, dist, state.mass());
    run.check(gap >= quad - 1e-9, gap - quad + 1e-9, "casimir gap dominates screening defect");
  }

  // The Casimir energy sees only the density: remixing equal occupations by
  // a unitary changes nothing.
  for (int t = 0; t < 5; ++t) {
    const int m = domain.mode_total();
    const int k = std::min(5, m);
    Eigen::MatrixXcd psi = random_orthonormal(m, k, rng);
    const Eigen::VectorXd occ = Eigen::VectorXd::Constant(k, 0.2);
    const MixedState state(domain, domain.modes, psi, occ);
    const Eigen::MatrixXcd remix = psi * random_orthonormal(k, k, rng);
    const MixedState mixed(domain, domain.modes, remix, occ);
    const double hc = casimir_energy(state, dist);
    const double hc_mixed = casimir_energy(mixed, dist);
    const double tol = 1e-10 * (1.0 + std::abs(hc));
    run.check(std::abs(hc - hc_mixed) <= tol, tol - std::abs(hc - hc_mixed),
              "casimir energy invariant under equal-occupation remix");
    const double dmax =
        (to_grid(density(state)) - to_grid(density(mixed))).cwiseAbs().maxCoeff();
    run.check(dmax <= 1e-10, 1e-10 - dmax, "density invariant under equal-occupation remix");
  }

  return run.finish();
}

SuiteResult solver_suite(const ExperimentPlan& plan, const CasimirDistribution& dist,
                         std::mt19937_64& rng) {
  SuiteRun run("solver");
  const DomainSpec& domain = plan.domain;
  const double lambda = plan.solver.lambda;

  const ScfResult res = scf_solve(domain, dist, plan.solver);
  run.check(res.converged, res.converged ? 0.0 : -1.0, "scf convergence: " + res.message);
  if (!res.converged) return run.finish();
  const StationarySolution& sol = *res.solution;

  run.check(sol.residual_poisson <= plan.solver.tol_poisson,
            plan.solver.tol_poisson - sol.residual_poisson, "poisson residual within tolerance");
  run.check(sol.residual_constraint <= plan.solver.tol_constraint,
            plan.solver.tol_constraint - sol.residual_constraint,
            "constraint residual within tolerance");

  // Ascent across accepted iterates.
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    const double slack = 1e-13 * (1.0 + std::abs(res.history[i - 1].phi));
    const double step = res.history[i].phi - res.history[i - 1].phi;
    run.check(step >= -slack, step + slack, "dual value non-decreasing across iterates");
  }

  const double vmin = to_grid(sol.v0).minCoeff();
  run.check(vmin >= -1e-10, vmin + 1e-10, "potential nonnegative on grid");

  // First-order optimality in the potential (cone directions) and in the
  // multiplier.
  const double phi0 = sol.phi_value;
  const Eigen::VectorXd v0_grid = to_grid(sol.v0);
  for (int t = 0; t < 50; ++t) {
    ModeField bump(domain, domain.modes);
    for (int a = 0; a < bump.mode_total(); ++a) bump[a] = uniform(rng, -1.0, 1.0);
    const double scale = std::pow(10.0, uniform(rng, -4.0, -2.0));
    const Eigen::VectorXd trial_grid = (v0_grid + scale * to_grid(bump)).cwiseMax(0.0);
    const ModeField trial = from_grid(domain, trial_grid);
    const double phi_trial = phi_eval(trial, sol.sigma0, dist, lambda);
    run.check(phi_trial <= phi0 + 1e-9, phi0 + 1e-9 - phi_trial,
              "maximizer optimal against potential perturbations");
  }
  for (const double h : {1e-3, 1e-2}) {
    for (const double sign : {-1.0, 1.0}) {
      const double phi_trial = phi_eval(sol.v0, sol.sigma0 + sign * h, dist, lambda);
      run.check(phi_trial <= phi0 + 1e-9, phi0 + 1e-9 - phi_trial,
                "maximizer optimal against multiplier shifts");
    }
  }

  // Second start from a random interior potential lands on the same point.
  const ScfResult res2 = scf_solve(domain, dist, plan.solver, random_potential(domain, 0.3, rng));
  run.check(res2.converged, res2.converged ? 0.0 : -1.0,
            "scf convergence from random start: " + res2.message);
  if (res2.converged) {
    const ModeField diff = sol.v0 - res2.solution->v0;
    const double dist_h1 = sobolev_hs_norm(diff, 1.0);
    run.check(dist_h1 <= 1e-6, 1e-6 - dist_h1, "maximizer independent of starting point");
  }

  const double constraint_defect = std::abs(sol.state.mass() + sol.occupation_tail - lambda);
  run.check(constraint_defect <= plan.solver.tol_constraint,
            plan.solver.tol_constraint - constraint_defect,
            "kept occupations plus tail meet the mass constraint");

  // Finite kinetic content, reported; and the per-orbital kinetic quadratic
  // form never exceeds its eigenvalue when the potential is nonnegative.
  const Eigen::VectorXd tsym = kinetic_symbol(domain, sol.state.mode_counts());
  const Eigen::VectorXd musym = laplace_symbol(domain, sol.state.mode_counts());
  double h1_content = 0.0;
  for (int k = 0; k < sol.state.num_orbitals(); ++k) {
    const auto& psi = sol.state.orbitals().col(k);
    h1_content += sol.state.occupations()[k] * (musym.array() * psi.cwiseAbs2().array()).sum();
    const double kinetic = (tsym.array() * psi.cwiseAbs2().array()).sum();
    const double bound = sol.mu[k] + 1e-12 * (1.0 + std::abs(sol.mu[k]));
    run.check(kinetic <= bound, bound - kinetic, "orbital kinetic form below its eigenvalue");
  }
  run.check(std::isfinite(h1_content), std::isfinite(h1_content) ? 0.0 : -1.0,
            "gradient content finite");
  run.note("occupation-weighted gradient content: " + std::to_string(h1_content));

  return run.finish();
}

SuiteResult evolution_suite(const ExperimentPlan& plan, const CasimirDistribution& dist,
                            std::mt19937_64& rng) {
  SuiteRun run("evolution");

  const ScfResult base = scf_solve(plan.domain, dist, plan.solver);
  run.check(base.converged, base.converged ? 0.0 : -1.0,
            "scf convergence for reference state: " + base.message);
  if (!base.converged) return run.finish();
  const StationarySolution& sol = *base.solution;
  const ModeField n0 = density(sol.state);
  const double casimir0 = casimir_energy(sol.state, dist);
  const std::uint64_t seed = rng();

  const MixedState kicked = perturb(sol.state, 1e-3, seed);
  const double gap = casimir_energy(kicked, dist) - casimir0;
  const auto [final_state, traj] = evolve(kicked, plan.evolution, dist, &n0);
  run.check(!traj.aborted, traj.aborted ? -1.0 : 0.0, "trajectory completes");
  if (traj.aborted) return run.finish();

  const double escale = 1.0 + std::abs(traj.energy.front());
  for (std::size_t i = 0; i < traj.rows(); ++i) {
    run.check(traj.ortho_defect[i] <= 1e-8, 1e-8 - traj.ortho_defect[i],
              "orbitals stay orthonormal");
    const double edrift = std::abs(traj.energy[i] - traj.energy.front()) / escale;
    run.check(edrift <= 1e-6, 1e-6 - edrift, "energy conserved");
    const double cdrift = std::abs(traj.casimir[i] - traj.casimir.front()) / escale;
    run.check(cdrift <= 1e-6, 1e-6 - cdrift, "casimir energy conserved");
    const double split = std::abs((traj.casimir[i] - traj.casimir.front()) -
                                  (traj.energy[i] - traj.energy.front()));
    run.check(split <= 1e-12 * escale, 1e-12 * escale - split,
              "casimir drift equals energy drift");
    const double lhs = 0.5 * traj.hminus1_dist[i] * traj.hminus1_dist[i];
    run.check(lhs <= gap + plan.tolerance, gap + plan.tolerance - lhs,
              "density distance bounded by the casimir gap");
  }
  const double occ_change =
      (final_state.occupations() - kicked.occupations()).cwiseAbs().maxCoeff();
  run.check(occ_change == 0.0, -occ_change, "occupations bit-identical");

  // Global second order: coarse/fine self-differences shrink by about 4.
  {
    const double horizon = std::min(plan.evolution.t_end, 0.5);
    const auto propagate = [&](double dt) {
      EvolutionConfig cfg;
      cfg.dt = dt;
      cfg.t_end = horizon;
      cfg.record_every = 1 << 20;
      return evolve(kicked, cfg, dist).first;
    };
    const double dt = horizon / 25.0;
    const MixedState a = propagate(dt);
    const MixedState b = propagate(dt / 2.0);
    const MixedState c = propagate(dt / 4.0);
    const double e1 = state_distance(b, a);
    const double e2 = state_distance(c, b);
    const double ratio = e2 > 0.0 ? e1 / e2 : kNan;
    run.check(ratio >= 3.7 && ratio <= 4.3, 0.3 - std::abs(ratio - 4.0),
              "global error ratio near 4 under halving, got " + std::to_string(ratio));
  }

  // Integral-form defect of a single step is third order: halving gives 8.
  {
    const double dt = 1e-2;
    const double r1 = mild_residual(kicked, strang_step(kicked, dt), dt);
    const double r2 = mild_residual(kicked, strang_step(kicked, dt / 2.0), dt / 2.0);
    const double ratio = r2 > 0.0 ? r1 / r2 : kNan;
    run.check(ratio >= 7.0 && ratio <= 9.0, 1.0 - std::abs(ratio - 8.0),
              "one-step defect ratio near 8 under halving, got " + std::to_string(ratio));
  }

  return run.finish();
}

}  // namespace

bool LemmaSuiteReport::all_pass() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult& s) { return s.failures == 0; });
}

LemmaSuiteReport run_lemma_suite(const ExperimentPlan& plan, const CasimirDistribution& dist,
                                 const std::vector<std::string>& suites) {
  plan.validate();
  static const std::vector<std::string> kAll = {"casimir", "state", "solver", "evolution"};
  std::vector<std::string> selected = suites.empty() ? kAll : suites;
  for (const auto& name : selected) {
    if (std::find(kAll.begin(), kAll.end(), name) == kAll.end()) {
      throw std::invalid_argument("lemma suite: unknown suite \"" + name + "\"");
    }
  }

  LemmaSuiteReport report;
  std::mt19937_64 rng(plan.seeds.front());
  for (const auto& name : kAll) {
    if (std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
    try {
      if (name == "casimir") {
        report.suites.push_back(casimir_suite(dist, rng));
      } else if (name == "state") {
        report.suites.push_back(state_suite(plan, dist, rng));
      } else if (name == "solver") {
        report.suites.push_back(solver_suite(plan, dist, rng));
      } else {
        report.suites.push_back(evolution_suite(plan, dist, rng));
      }
    } catch (const std::exception& e) {
      SuiteRun failed(name);
      failed.check(false, -1.0, std::string("suite threw: ") + e.what());
      report.suites.push_back(failed.finish());
    }
  }
  return report;
}

}  // namespace srsp
