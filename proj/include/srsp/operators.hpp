#pragma once

#include <Eigen/Core>

#include "srsp/domain.hpp"
#include "srsp/mode_field.hpp"

namespace srsp {

// (sqrt(-Laplace + mass^2) - mass) f, diagonal in mode space.
ModeField apply_kinetic(const ModeField& f);

// V = (-Laplace)^{-1} rho with Dirichlet walls: V_k = rho_k / mu_k.
ModeField poisson_solve(const ModeField& rho);

// sqrt( sum_k u_k^2 / mu_k ), the norm dual to the Dirichlet energy.
double hminus1_norm(const ModeField& u);

// Dense matrix of sqrt(-Laplace + mass^2) - mass + V on the first `counts`
// modes (defaults to domain.modes).  The potential block is the collocation
// operator induced by the interior quadrature: its quadratic form equals the
// weighted grid sum used everywhere else, so every discrete variational
// identity is exact, and it converges to the Galerkin integrals at fourth
// order in the grid spacing.  The result is symmetrized; the tiny
// pre-symmetrization defect is written to *defect_out when given.
Eigen::MatrixXd hamiltonian_matrix(const ModeField& V, double* defect_out = nullptr);
Eigen::MatrixXd hamiltonian_matrix(const ModeField& V, const std::vector<int>& counts,
                                   double* defect_out = nullptr);

// Synthesis matrix mapping coefficients over `counts` to grid values
// (grid_total x prod(counts)).
Eigen::MatrixXd synthesis_matrix(const DomainSpec& d, const std::vector<int>& counts);

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal, sign-fixed
  double max_residual;           // max_k |H v_k - lambda_k v_k|_inf
  double ortho_defect;           // |V^T V - I|_max
};

// Full decomposition of a symmetric matrix.  Eigenvalues come out ascending;
// each eigenvector is scaled so its largest-magnitude entry (first such entry
// on ties) is positive, making the output reproducible across runs.
// Throws std::invalid_argument if H is not square or not symmetric to
// roundoff scale.
EigenDecomposition eigendecompose(const Eigen::MatrixXd& H);

}  // namespace srsp
