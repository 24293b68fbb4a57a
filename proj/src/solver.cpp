#include "srsp/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "srsp/operators.hpp"

namespace srsp {
namespace {

constexpr double kGridNegativityTol = 1e-8;
constexpr double kDampingFloor = 1.0 / (1 << 20);
constexpr double kAscentSlack = 1e-13;

void check_nonnegative_on_grid(const ModeField& v) {
  const double mn = to_grid(v).minCoeff();
  if (mn < -kGridNegativityTol) {
    std::ostringstream msg;
    msg << "potential dips to " << mn << " on the grid; expected nonnegative";
    throw std::domain_error(msg.str());
  }
}

double constraint_sum(const Eigen::VectorXd& mu, const CasimirDistribution& dist, double sigma) {
  double s = 0.0;
  for (int j = 0; j < mu.size(); ++j) s += dist.f(mu[j] + sigma);
  return s;
}

double constraint_slope(const Eigen::VectorXd& mu, const CasimirDistribution& dist, double sigma) {
  double s = 0.0;
  for (int j = 0; j < mu.size(); ++j) s += dist.f_prime(mu[j] + sigma);
  return s;
}

double phi_from_spectrum(const ModeField& v, const Eigen::VectorXd& mu, double sigma,
                         const CasimirDistribution& dist, double lambda) {
  const Eigen::VectorXd lap = laplace_symbol(v.domain(), v.mode_counts());
  double phi = -0.5 * lap.dot(v.coeffs().cwiseAbs2());
  for (int j = 0; j < mu.size(); ++j) phi -= dist.big_f(mu[j] + sigma);
  phi -= sigma * lambda;
  return phi;
}

// One self-consistent iterate at fixed potential: spectrum, multiplier,
// occupations, realized state, rebuilt potential, residuals.
struct Iterate {
  EigenDecomposition eig;
  double sigma = 0.0;
  double phi = 0.0;
  int kept = 0;
  double tail = 0.0;
  Eigen::VectorXd occupations;  // all modes, descending along the spectrum
  ModeField v_new;              // (-Laplace)^{-1} density, full mode set
  double residual_poisson = 0.0;
  double residual_constraint = 0.0;
};

Iterate compute_iterate(const DomainSpec& domain, const ModeField& v,
                        const CasimirDistribution& dist, const SolverConfig& cfg) {
  Iterate it{.eig = {}, .v_new = ModeField(domain, domain.grid_counts())};
  const Eigen::MatrixXd h = hamiltonian_matrix(v, domain.modes);
  it.eig = eigendecompose(h);
  it.sigma = sigma_solve(it.eig.eigenvalues, dist, cfg.lambda, cfg.sigma_lo, cfg.sigma_hi);
  const int m = static_cast<int>(it.eig.eigenvalues.size());
  it.occupations.resize(m);
  for (int j = 0; j < m; ++j) it.occupations[j] = dist.f(it.eig.eigenvalues[j] + it.sigma);
  it.residual_constraint = std::abs(it.occupations.sum() - cfg.lambda);
  it.phi = phi_from_spectrum(v, it.eig.eigenvalues, it.sigma, dist, cfg.lambda);

  // Keep the shortest ascending prefix whose dropped tail stays below
  // tail_tol * lambda; occupations decay with the spectrum since f decreases.
  double tail = 0.0;
  int kept = m;
  while (kept > 1 && tail + it.occupations[kept - 1] <= cfg.tail_tol * cfg.lambda) {
    tail += it.occupations[kept - 1];
    --kept;
  }
  it.kept = kept;
  it.tail = tail;

  Eigen::MatrixXcd orbitals = it.eig.eigenvectors.leftCols(kept).cast<std::complex<double>>();
  MixedState state(domain, domain.modes, std::move(orbitals), it.occupations.head(kept));
  const ModeField n = density(state);
  it.v_new = poisson_solve(n);

  const Eigen::VectorXd lap = laplace_symbol(domain, it.v_new.mode_counts());
  const ModeField v_full =
      v.mode_counts() == it.v_new.mode_counts() ? v : v.embedded(it.v_new.mode_counts());
  it.residual_poisson =
      std::sqrt(lap.dot((v_full.coeffs() - it.v_new.coeffs()).cwiseAbs2()));
  return it;
}

MixedState iterate_state(const DomainSpec& domain, const Iterate& it) {
  Eigen::MatrixXcd orbitals =
      it.eig.eigenvectors.leftCols(it.kept).cast<std::complex<double>>();
  return MixedState(domain, domain.modes, std::move(orbitals), it.occupations.head(it.kept));
}

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("solver: lambda must be positive and finite");
  }
  if (!(damping > 0.0) || damping > 1.0) {
    throw std::invalid_argument("solver: damping must lie in (0, 1]");
  }
  if (max_outer < 1) throw std::invalid_argument("solver: max_outer must be >= 1");
  if (!(tol_poisson > 0.0) || !(tol_constraint > 0.0)) {
    throw std::invalid_argument("solver: tolerances must be positive");
  }
  if (!(sigma_lo < sigma_hi)) throw std::invalid_argument("solver: empty sigma bracket");
  if (!(tail_tol >= 0.0)) throw std::invalid_argument("solver: tail_tol must be >= 0");
}

double phi_eval(const ModeField& v, double sigma, const CasimirDistribution& dist,
                double lambda) {
  check_nonnegative_on_grid(v);
  const Eigen::MatrixXd h = hamiltonian_matrix(v, v.domain().modes);
  const EigenDecomposition eig = eigendecompose(h);
  return phi_from_spectrum(v, eig.eigenvalues, sigma, dist, lambda);
}

double sigma_solve(const Eigen::VectorXd& mu, const CasimirDistribution& dist, double lambda,
                   double sigma_lo, double sigma_hi) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sigma_solve: lambda must be positive");
  if (!(sigma_lo < sigma_hi)) throw std::invalid_argument("sigma_solve: empty bracket");
  double lo = sigma_lo, hi = sigma_hi;
  // sum f(mu + sigma) decreases in sigma: widen until it straddles lambda.
  for (int i = 0; constraint_sum(mu, dist, lo) < lambda; ++i) {
    if (i >= 60) throw std::runtime_error("sigma_solve: no lower bracket for the multiplier");
    lo -= (hi - lo);
  }
  for (int i = 0; constraint_sum(mu, dist, hi) > lambda; ++i) {
    if (i >= 60) throw std::runtime_error("sigma_solve: no upper bracket for the multiplier");
    hi += (hi - lo);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (constraint_sum(mu, dist, mid) >= lambda) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double sigma = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double g = constraint_sum(mu, dist, sigma) - lambda;
    const double gp = constraint_slope(mu, dist, sigma);
    if (std::abs(g) <= 1e-15 * std::max(1.0, lambda) || !(std::abs(gp) > 0.0)) break;
    const double next = sigma - g / gp;
    if (!(next > lo - 1.0) || !(next < hi + 1.0)) break;
    sigma = next;
  }
  return sigma;
}

double sigma_solve(const ModeField& v, const CasimirDistribution& dist, double lambda,
                   double sigma_lo, double sigma_hi) {
  const Eigen::MatrixXd h = hamiltonian_matrix(v, v.domain().modes);
  return sigma_solve(eigendecompose(h).eigenvalues, dist, lambda, sigma_lo, sigma_hi);
}

ScfResult scf_solve(const DomainSpec& domain, const CasimirDistribution& dist,
                    const SolverConfig& config, const std::optional<ModeField>& initial_v) {
  domain.validate();
  config.validate();
  const std::vector<int> full = domain.grid_counts();

  ModeField v(domain, full);
  if (initial_v) {
    v = initial_v->mode_counts() == full ? *initial_v : initial_v->embedded(full);
    check_nonnegative_on_grid(v);
  }

  ScfResult result;
  double damping = config.damping;
  Iterate cur = compute_iterate(domain, v, dist, config);

  for (int outer = 0; outer < config.max_outer; ++outer) {
    result.history.push_back({outer, cur.phi, cur.residual_poisson, cur.residual_constraint,
                              cur.sigma, damping});
    if (cur.residual_poisson <= config.tol_poisson &&
        cur.residual_constraint <= config.tol_constraint) {
      result.converged = true;
      result.message = "converged in " + std::to_string(outer) + " iterations";
      break;
    }

    bool accepted = false;
    while (damping >= kDampingFloor) {
      ModeField v_trial = ModeField(
          domain, full, (1.0 - damping) * v.coeffs() + damping * cur.v_new.coeffs());
      Iterate trial = compute_iterate(domain, v_trial, dist, config);
      if (trial.phi >= cur.phi - kAscentSlack * (1.0 + std::abs(cur.phi))) {
        v = std::move(v_trial);
        cur = std::move(trial);
        accepted = true;
        damping = std::min(config.damping, damping * 1.5);
        break;
      }
      damping *= 0.5;
    }
    if (!accepted) {
      result.message = "objective ascent stalled at the damping floor";
      break;
    }
  }

  if (!result.converged && result.message.empty()) {
    result.message = "no convergence within " + std::to_string(config.max_outer) +
                     " iterations; poisson residual " + std::to_string(cur.residual_poisson);
  }

  result.solution.emplace(StationarySolution{
      .v0 = v,
      .sigma0 = cur.sigma,
      .mu = cur.eig.eigenvalues.head(cur.kept),
      .state = iterate_state(domain, cur),
      .phi_value = cur.phi,
      .residual_poisson = cur.residual_poisson,
      .residual_constraint = cur.residual_constraint,
      .occupation_tail = cur.tail,
  });
  return result;
}

double duality_check(const StationarySolution& sol, const CasimirDistribution& dist,
                     double lambda) {
  return casimir_energy(sol.state, dist) - phi_eval(sol.v0, sol.sigma0, dist, lambda);
}

std::pair<double, double> lemma10_bound(const MixedState& state, const ModeField& v, double sigma,
                                        const CasimirDistribution& dist, double lambda) {
  const double gap = casimir_energy(state, dist) - phi_eval(v, sigma, dist, lambda);
  const ModeField v_state = poisson_solve(density(state));
  const ModeField v_full = v.mode_counts() == v_state.mode_counts()
                               ? v
                               : v.embedded(v_state.mode_counts());
  const Eigen::VectorXd lap = laplace_symbol(state.domain(), v_state.mode_counts());
  const double quad = 0.5 * lap.dot((v_state.coeffs() - v_full.coeffs()).cwiseAbs2());
  return {gap, quad};
}

}  // namespace srsp
