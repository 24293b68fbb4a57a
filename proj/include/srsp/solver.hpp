#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srsp/casimir.hpp"
#include "srsp/state.hpp"

namespace srsp {

struct SolverConfig {
  double lambda = 1.0;          // total occupation mass
  double damping = 0.5;         // initial mixing weight for the potential update
  int max_outer = 500;
  double tol_poisson = 1e-10;     // |grad(V - (-Lap)^{-1} n)| in L2
  double tol_constraint = 1e-12;  // |sum_j f(mu_j + sigma) - lambda|
  double sigma_lo = -10.0;        // initial multiplier bracket
  double sigma_hi = 10.0;
  double tail_tol = 1e-10;  // dropped occupation mass per unit lambda

  void validate() const;
};

// Concave dual objective
//   phi(V, sigma) = -(1/2)|grad V|^2 - sum_j big_f(mu_j(T+V) + sigma) - sigma lambda
// with the trace over the domain's orbital mode box.  V must be nonnegative
// on the grid to within roundoff (throws std::domain_error otherwise).
double phi_eval(const ModeField& v, double sigma, const CasimirDistribution& dist, double lambda);

// Root of sum_j f(mu_j + sigma) = lambda in sigma; the sum is strictly
// decreasing, so bracketed bisection plus a Newton polish converges to
// roundoff.  The bracket is widened automatically when needed.
double sigma_solve(const Eigen::VectorXd& mu, const CasimirDistribution& dist, double lambda,
                   double sigma_lo = -10.0, double sigma_hi = 10.0);
double sigma_solve(const ModeField& v, const CasimirDistribution& dist, double lambda,
                   double sigma_lo = -10.0, double sigma_hi = 10.0);

struct ScfIterationRecord {
  int iteration = 0;
  double phi = 0.0;
  double residual_poisson = 0.0;
  double residual_constraint = 0.0;
  double sigma = 0.0;
  double damping = 0.0;
};

struct ScfResult {
  bool converged = false;
  std::string message;
  // Always engaged on return; holds the last accepted iterate when the solve
  // did not converge.
  std::optional<StationarySolution> solution;
  std::vector<ScfIterationRecord> history;
};

// Damped self-consistent ascent on the dual functional: eigendecompose
// T + V, solve the multiplier equation, occupy modes through f, rebuild the
// potential from the density, and mix.  The mixing weight is halved whenever
// a step would decrease phi and restored gradually on success.
ScfResult scf_solve(const DomainSpec& domain, const CasimirDistribution& dist,
                    const SolverConfig& config,
                    const std::optional<ModeField>& initial_v = std::nullopt);

// casimir_energy(state) - phi(v0, sigma0): zero at the exact saddle,
// nonnegative up to the dropped occupation tail.
double duality_check(const StationarySolution& sol, const CasimirDistribution& dist,
                     double lambda);

// Quantitative stability pairing: first = casimir_energy(state) - phi(v, sigma),
// second = (1/2)|grad(V[state] - v)|^2.  For states carrying occupation mass
// lambda the first dominates the second.
std::pair<double, double> lemma10_bound(const MixedState& state, const ModeField& v, double sigma,
                                        const CasimirDistribution& dist, double lambda);

}  // namespace srsp
