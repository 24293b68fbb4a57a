#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "srsp/casimir.hpp"
#include "srsp/domain.hpp"
#include "srsp/mode_field.hpp"

namespace srsp {

// Finite-rank mixed state: orthonormal orbitals (one per column, coefficients
// against the sine basis over `counts`) with positive occupation numbers.
class MixedState {
 public:
  MixedState(DomainSpec domain, std::vector<int> counts, Eigen::MatrixXcd orbitals,
             Eigen::VectorXd occupations);

  const DomainSpec& domain() const { return domain_; }
  const std::vector<int>& mode_counts() const { return counts_; }
  const Eigen::MatrixXcd& orbitals() const { return orbitals_; }
  Eigen::MatrixXcd& orbitals() { return orbitals_; }
  const Eigen::VectorXd& occupations() const { return occupations_; }
  int num_orbitals() const { return static_cast<int>(occupations_.size()); }

  // max-norm distance of the Gram matrix from the identity.
  double ortho_defect() const;
  // Sum of occupations weighted by orbital norms; equals the occupation sum
  // for an orthonormal family.
  double mass() const;

  // Throws std::invalid_argument when the orbitals are not orthonormal to
  // within tol or an occupation is not positive and finite.
  void validate(double tol = 1e-8) const;

  // Zero-padded copy on a larger per-axis mode box.
  MixedState embedded(const std::vector<int>& counts) const;
  // Re-orthonormalizes the orbitals in place (two modified Gram-Schmidt
  // sweeps); occupations are untouched.
  void reorthonormalize();

 private:
  DomainSpec domain_;
  std::vector<int> counts_;
  Eigen::MatrixXcd orbitals_;
  Eigen::VectorXd occupations_;
};

// Occupation-weighted density sum lambda_k |psi_k|^2, carried on the full
// grid-resolution mode set so its grid values are exactly the pointwise sums.
ModeField density(const MixedState& state);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double field_gradient = 0.0;  // (1/2) |grad V|^2 with V = (-Laplace)^{-1} n
  double field_overlap = 0.0;   // (1/2) integral V n, equal in exact arithmetic
  double total() const { return kinetic + field_gradient; }
};

EnergyBreakdown energy_breakdown(const MixedState& state);
double energy(const MixedState& state);

// energy + sum_k f_star(-lambda_k); conserved by the flow alongside the
// energy because the occupations never change.
double casimir_energy(const MixedState& state, const CasimirDistribution& dist);

// Lagrangian pairing whose infimum over states with occupation sum `mass`
// is bounded below by the dual functional:
//   sum_k f_star(-lambda_k) + sum_k lambda_k (<psi_k,(T+V)psi_k> + sigma)
//     - (1/2)|grad V|^2 - sigma mass
double g_functional(const MixedState& state, const ModeField& v, double sigma,
                    const CasimirDistribution& dist, double mass);

// Left: sum_k big_f(<psi_k,(T+V)psi_k> + sigma) over the state's orbitals.
// Right: the same sum over the full spectrum of T+V on the state's mode box.
// Orthonormality forces left <= right.
std::pair<double, double> jensen_check(const MixedState& state, const ModeField& v, double sigma,
                                       const CasimirDistribution& dist);

// Occupation-weighted inhomogeneous Sobolev norm
//   sqrt( sum_k lambda_k sum_a (1 + mu_a)^s |psi_{a,k}|^2 ).
double sobolev_hs_norm(const MixedState& state, double s);
double sobolev_hs_norm(const ModeField& f, double s);

// Random tangent kick of total Frobenius size epsilon followed by
// re-orthonormalization; occupations are preserved.  Deterministic in `seed`.
MixedState perturb(const MixedState& state, double epsilon, std::uint64_t seed);

// Output of the self-consistent solver: the maximizing potential and
// multiplier, the kept spectral data, and the realized state.
struct StationarySolution {
  ModeField v0;                    // full grid-resolution mode set
  double sigma0 = 0.0;
  Eigen::VectorXd mu;              // kept eigenvalues of T + V0, ascending
  MixedState state;                // kept eigenvectors with f(mu+sigma) weights
  double phi_value = 0.0;
  double residual_poisson = 0.0;
  double residual_constraint = 0.0;
  double occupation_tail = 0.0;    // dropped occupation mass
};

}  // namespace srsp
