#include "srsp/evolution.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "srsp/operators.hpp"

namespace srsp {
namespace {

using Complex = std::complex<double>;

Eigen::VectorXcd phase_of(const Eigen::VectorXd& symbol, double factor) {
  Eigen::VectorXcd phase(symbol.size());
  for (int i = 0; i < symbol.size(); ++i) {
    phase[i] = std::polar(1.0, -factor * symbol[i]);
  }
  return phase;
}

MixedState to_full_box(const MixedState& state) {
  const auto full = state.domain().grid_counts();
  return state.mode_counts() == full ? state : state.embedded(full);
}

// Potential phase with V rebuilt from the current orbitals; mutates the
// orbital matrix in place (full mode box assumed, so grid round-trips are
// exact inverses).
void potential_phase_step(const DomainSpec& d, const Eigen::VectorXd& occupations,
                          Eigen::MatrixXcd& orbitals, double dt) {
  const auto& full = d.grid_counts();
  Eigen::MatrixXcd grid = orbital_matrix_to_grid(d, full, orbitals);
  Eigen::VectorXd n_grid = Eigen::VectorXd::Zero(grid.rows());
  for (int k = 0; k < grid.cols(); ++k) {
    n_grid += occupations[k] * grid.col(k).cwiseAbs2();
  }
  const ModeField v = poisson_solve(from_grid(d, n_grid));
  const Eigen::VectorXcd phase = phase_of(to_grid(v), dt);
  grid.array().colwise() *= phase.array();
  orbitals = orbital_matrix_from_grid(d, full, grid);
}

}  // namespace

void EvolutionConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("evolution: dt must be positive and finite");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("evolution: t_end must be finite and >= 0");
  }
  if (t_end > 0.0 && dt > t_end * (1.0 + 1e-12)) {
    throw std::invalid_argument("evolution: dt must not exceed t_end");
  }
  if (record_every < 1) throw std::invalid_argument("evolution: record_every must be >= 1");
  if (renormalize_every < 0) {
    throw std::invalid_argument("evolution: renormalize_every must be >= 0");
  }
}

MixedState strang_step(const MixedState& state, double dt) {
  if (dt == 0.0 || !std::isfinite(dt)) {
    throw std::invalid_argument("strang_step: dt must be nonzero and finite");
  }
  MixedState out = to_full_box(state);
  const Eigen::VectorXcd half =
      phase_of(kinetic_symbol(out.domain(), out.mode_counts()), 0.5 * dt);
  out.orbitals().array().colwise() *= half.array();
  potential_phase_step(out.domain(), out.occupations(), out.orbitals(), dt);
  out.orbitals().array().colwise() *= half.array();
  return out;
}

std::pair<MixedState, TrajectoryRecord> evolve(const MixedState& state,
                                               const EvolutionConfig& config,
                                               const CasimirDistribution& dist,
                                               const ModeField* reference_density) {
  config.validate();
  MixedState cur = to_full_box(state);
  const DomainSpec& d = cur.domain();

  const long long steps = std::llround(config.t_end / config.dt);
  const Eigen::VectorXcd half =
      phase_of(kinetic_symbol(d, cur.mode_counts()), 0.5 * config.dt);

  // The occupations never change, so the conserved Casimir part is a fixed
  // shift of the energy; compute it once.
  double casimir_shift = 0.0;
  for (int k = 0; k < cur.num_orbitals(); ++k) {
    casimir_shift += dist.f_star(-cur.occupations()[k]);
  }

  ModeField n_ref(d, d.grid_counts());
  if (reference_density) {
    n_ref = reference_density->mode_counts() == d.grid_counts()
                ? *reference_density
                : reference_density->embedded(d.grid_counts());
  }

  TrajectoryRecord traj;
  auto record = [&](double t) -> bool {
    const double e = energy(cur);
    const double defect = cur.ortho_defect();
    const double m = cur.mass();
    double dist_ref = std::numeric_limits<double>::quiet_NaN();
    if (reference_density) {
      dist_ref = hminus1_norm(density(cur) - n_ref);
    }
    if (!std::isfinite(e) || !std::isfinite(defect) || !std::isfinite(m) ||
        (reference_density && !std::isfinite(dist_ref))) {
      traj.aborted = true;
      return false;
    }
    traj.times.push_back(t);
    traj.energy.push_back(e);
    traj.casimir.push_back(e + casimir_shift);
    traj.ortho_defect.push_back(defect);
    traj.hminus1_dist.push_back(dist_ref);
    traj.mass.push_back(m);
    traj.last_valid_time = t;
    return true;
  };

  if (!record(0.0)) return {std::move(cur), std::move(traj)};

  for (long long s = 1; s <= steps; ++s) {
    cur.orbitals().array().colwise() *= half.array();
    potential_phase_step(d, cur.occupations(), cur.orbitals(), config.dt);
    cur.orbitals().array().colwise() *= half.array();
    if (config.renormalize_every > 0 && s % config.renormalize_every == 0) {
      cur.reorthonormalize();
    }
    if (s % config.record_every == 0 || s == steps) {
      if (!record(s * config.dt)) break;
    }
  }
  return {std::move(cur), std::move(traj)};
}

double mild_residual(const MixedState& state0, const MixedState& state_dt, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("mild_residual: dt must be positive and finite");
  }
  MixedState a = to_full_box(state0);
  MixedState b = to_full_box(state_dt);
  if (a.num_orbitals() != b.num_orbitals()) {
    throw std::invalid_argument("mild_residual: states carry different orbital counts");
  }
  const DomainSpec& d = a.domain();
  const auto& full = a.mode_counts();
  const Eigen::VectorXd t_sym = kinetic_symbol(d, full);

  // Midpoint state via a half step; the quadrature stays third order.
  const MixedState mid = strang_step(a, 0.5 * dt);
  Eigen::MatrixXcd grid = orbital_matrix_to_grid(d, full, mid.orbitals());
  Eigen::VectorXd n_grid = Eigen::VectorXd::Zero(grid.rows());
  for (int k = 0; k < grid.cols(); ++k) {
    n_grid += mid.occupations()[k] * grid.col(k).cwiseAbs2();
  }
  const ModeField v_mid = poisson_solve(from_grid(d, n_grid));
  const Eigen::VectorXd v_grid = to_grid(v_mid);
  // F[psi] = -i V psi evaluated at the midpoint.
  grid.array().colwise() *= v_grid.array().cast<Complex>() * Complex(0.0, -1.0);
  const Eigen::MatrixXcd f_mid = orbital_matrix_from_grid(d, full, grid);

  Eigen::MatrixXcd defect = b.orbitals();
  const Eigen::VectorXcd full_phase = phase_of(t_sym, dt);
  const Eigen::VectorXcd half_phase = phase_of(t_sym, 0.5 * dt);
  Eigen::MatrixXcd prop0 = a.orbitals();
  prop0.array().colwise() *= full_phase.array();
  Eigen::MatrixXcd duhamel = f_mid;
  duhamel.array().colwise() *= half_phase.array();
  defect -= prop0 + dt * duhamel;

  double acc = 0.0;
  for (int k = 0; k < defect.cols(); ++k) {
    acc += a.occupations()[k] * defect.col(k).squaredNorm();
  }
  return std::sqrt(acc);
}

}  // namespace srsp
