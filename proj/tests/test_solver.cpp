#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "srsp/operators.hpp"
#include "srsp/solver.hpp"

using namespace srsp;

namespace {

DomainSpec desk_domain(double mass = 0.0, int modes = 64) {
  DomainSpec d;
  d.dim = 1;
  d.lengths = {M_PI};
  d.modes = {modes};
  d.mass = mass;
  return d;
}

}  // namespace

TEST_CASE("multiplier equation has the closed-form root for the free operator") {
  // massless symbol on [0, pi] is k, so sum exp(-(k + sigma)) = 1 gives
  // sigma = -ln(e - 1) up to an exp(-64) truncation correction.
  const DomainSpec d = desk_domain();
  const BoltzmannDistribution dist(1.0);
  const ModeField zero(d, d.grid_counts());
  const double sigma = sigma_solve(zero, dist, 1.0);
  CHECK(sigma == doctest::Approx(-0.5413248546129181).epsilon(1e-12));

  const Eigen::VectorXd mu = kinetic_symbol(d, d.modes);
  CHECK(sigma_solve(mu, dist, 1.0) == doctest::Approx(-0.5413248546129181).epsilon(1e-12));

  double total = 0.0;
  for (int j = 0; j < mu.size(); ++j) total += dist.f(mu[j] + sigma);
  CHECK(std::abs(total - 1.0) <= 1e-13);
}

TEST_CASE("multiplier equation reaches roundoff for a cutoff profile") {
  const DomainSpec d = desk_domain(1.0, 32);
  const PowerCutoffDistribution dist(6.0, 2.0);
  const Eigen::VectorXd mu = kinetic_symbol(d, d.modes);
  for (double lambda : {0.3, 1.0, 17.0}) {
    const double sigma = sigma_solve(mu, dist, lambda);
    double total = 0.0;
    for (int j = 0; j < mu.size(); ++j) total += dist.f(mu[j] + sigma);
    CHECK(std::abs(total - lambda) <= 1e-12 * std::max(1.0, lambda));
  }
}

TEST_CASE("dual objective has frozen values on the free operator") {
  const DomainSpec d = desk_domain();
  const BoltzmannDistribution dist(1.0);
  const ModeField zero(d, d.grid_counts());
  // phi(0, 0) = -sum_k exp(-k) = -(1 - e^{-64})/(e - 1)
  CHECK(phi_eval(zero, 0.0, dist, 1.0) ==
        doctest::Approx(-0.5819767068693265).epsilon(1e-13));
  // phi(0, sigma0) = -1 - sigma0 at the multiplier root
  CHECK(phi_eval(zero, -0.5413248546129181, dist, 1.0) ==
        doctest::Approx(-0.4586751453870819).epsilon(1e-13));
}

TEST_CASE("dual objective is concave in the multiplier direction") {
  const DomainSpec d = desk_domain(0.5, 24);
  const BoltzmannDistribution dist(1.3);
  const ModeField zero(d, d.grid_counts());
  for (double a : {-1.0, -0.2, 0.5}) {
    for (double b : {0.9, 1.8}) {
      const double mid = phi_eval(zero, 0.5 * (a + b), dist, 1.0);
      const double avg =
          0.5 * (phi_eval(zero, a, dist, 1.0) + phi_eval(zero, b, dist, 1.0));
      CHECK(mid >= avg - 1e-12);
    }
  }
}

TEST_CASE("dual objective rejects potentials that dip negative") {
  const DomainSpec d = desk_domain(0.0, 8);
  ModeField v(d, d.grid_counts());
  v[1] = 1.0;  // sin(2x) changes sign on the box
  CHECK_THROWS_AS(phi_eval(v, 0.0, BoltzmannDistribution(1.0), 1.0), std::domain_error);
}

TEST_CASE("self-consistent solve reaches the desk tolerances") {
  const BoltzmannDistribution dist(1.0);
  SolverConfig cfg;
  cfg.lambda = 1.0;

  for (double mass : {0.0, 1.0}) {
    CAPTURE(mass);
    const DomainSpec d = desk_domain(mass);
    const ScfResult res = scf_solve(d, dist, cfg);
    REQUIRE(res.converged);
    REQUIRE(res.solution.has_value());
    const StationarySolution& sol = *res.solution;

    CHECK(sol.residual_poisson <= 1e-10);
    CHECK(sol.residual_constraint <= 1e-12);
    CHECK(sol.occupation_tail <= cfg.tail_tol * cfg.lambda);
    CHECK(sol.state.num_orbitals() >= 5);
    CHECK(sol.state.ortho_defect() <= 1e-12);

    // the interaction raises the spectrum, so sigma shifts upward from the
    // free-operator value but stays within the bracket
    CHECK(sol.sigma0 > -1.0);
    CHECK(sol.sigma0 < 1.0);

    // the realized occupations sit on the graph of f
    for (int k = 0; k < sol.state.num_orbitals(); ++k) {
      CHECK(sol.state.occupations()[k] ==
            doctest::Approx(dist.f(sol.mu[k] + sol.sigma0)).epsilon(1e-12));
    }

    // ascent history never drops by more than roundoff slack
    for (std::size_t i = 1; i < res.history.size(); ++i) {
      CHECK(res.history[i].phi >= res.history[i - 1].phi - 1e-11);
    }

    // duality gap at the saddle
    const double gap = duality_check(sol, dist, cfg.lambda);
    CHECK(std::abs(gap) <= 1e-7);

    // the potential solves its own screening equation
    const ModeField v_self = poisson_solve(density(sol.state));
    const Eigen::VectorXd mu_lap = laplace_symbol(d, v_self.mode_counts());
    const ModeField diff = sol.v0 - v_self;
    CHECK(std::sqrt(mu_lap.dot(diff.coeffs().cwiseAbs2())) <= 1e-10);
  }
}

TEST_CASE("quantitative gap bound dominates the screening distance") {
  const BoltzmannDistribution dist(1.0);
  SolverConfig cfg;
  const DomainSpec d = desk_domain(1.0, 48);
  const ScfResult res = scf_solve(d, dist, cfg);
  REQUIRE(res.converged);
  const StationarySolution& sol = *res.solution;

  SUBCASE("at the saddle both sides nearly vanish") {
    const auto [gap, quad] = lemma10_bound(sol.state, sol.v0, sol.sigma0, dist, cfg.lambda);
    CHECK(std::abs(gap) <= 1e-8);
    CHECK(quad <= 1e-16);
    CHECK(gap >= quad - 1e-9);
  }

  SUBCASE("perturbed states keep the inequality with quadratic scaling") {
    double prev_gap = 0.0;
    for (double eps : {1e-3, 1e-2}) {
      const MixedState kicked = perturb(sol.state, eps, 11);
      const auto [gap, quad] = lemma10_bound(kicked, sol.v0, sol.sigma0, dist, cfg.lambda);
      CHECK(gap >= quad - 1e-10);
      CHECK(gap >= 0.0);
      if (prev_gap > 0.0) {
        // eps grew by 10, the gap should grow roughly 100-fold
        CHECK(gap / prev_gap > 30.0);
        CHECK(gap / prev_gap < 300.0);
      }
      prev_gap = gap;
    }
  }
}

TEST_CASE("solver restarts land on the same maximizer") {
  const BoltzmannDistribution dist(1.0);
  SolverConfig cfg;
  const DomainSpec d = desk_domain(0.0, 32);
  const ScfResult base = scf_solve(d, dist, cfg);
  REQUIRE(base.converged);

  // restart from a deformed copy of the converged potential
  ModeField warped = base.solution->v0;
  warped.coeffs() *= 1.35;
  const ScfResult again = scf_solve(d, dist, cfg, warped);
  REQUIRE(again.converged);

  const ModeField dv = again.solution->v0 - base.solution->v0;
  CHECK(dv.l2_norm() <= 1e-8);
  CHECK(again.solution->sigma0 == doctest::Approx(base.solution->sigma0).epsilon(1e-9));
  CHECK(again.solution->phi_value == doctest::Approx(base.solution->phi_value).epsilon(1e-12));
}

TEST_CASE("iteration budget failure reports history instead of throwing") {
  const BoltzmannDistribution dist(1.0);
  SolverConfig cfg;
  cfg.max_outer = 2;
  const ScfResult res = scf_solve(desk_domain(0.0, 32), dist, cfg);
  CHECK_FALSE(res.converged);
  CHECK_FALSE(res.message.empty());
  CHECK(res.solution.has_value());
  CHECK(res.history.size() >= 1);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.damping = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.sigma_lo = 2.0;
  cfg.sigma_hi = -2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
