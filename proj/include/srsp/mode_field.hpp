#pragma once

#include <Eigen/Core>
#include <vector>

#include "srsp/domain.hpp"

namespace srsp {

// Real scalar field (potential or density) stored as coefficients against the
// orthonormal sine basis.  `counts` may differ from the domain's orbital mode
// box: densities and potentials keep the full grid-resolution mode set so
// that grid values round-trip exactly, while orbital-space projections use
// domain.modes.  Coefficients are stored row-major over `counts`.
class ModeField {
 public:
  ModeField(DomainSpec domain, std::vector<int> counts);
  explicit ModeField(DomainSpec domain);  // counts = domain.modes, zeros
  ModeField(DomainSpec domain, std::vector<int> counts, Eigen::VectorXd coeffs);

  const DomainSpec& domain() const { return domain_; }
  const std::vector<int>& mode_counts() const { return counts_; }
  int mode_total() const { return static_cast<int>(coeffs_.size()); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  double operator[](int flat) const { return coeffs_[flat]; }
  double& operator[](int flat) { return coeffs_[flat]; }

  // L2(Omega) norm; the basis is orthonormal so this is the coefficient norm.
  double l2_norm() const { return coeffs_.norm(); }

  // Zero-padded copy on a larger (or equal) per-axis mode box.
  ModeField embedded(const std::vector<int>& counts) const;
  // Truncated copy on a smaller (or equal) per-axis mode box.
  ModeField truncated(const std::vector<int>& counts) const;

 private:
  DomainSpec domain_;
  std::vector<int> counts_;
  Eigen::VectorXd coeffs_;
};

ModeField operator+(const ModeField& a, const ModeField& b);
ModeField operator-(const ModeField& a, const ModeField& b);
ModeField operator*(double s, const ModeField& a);

// Values at the interior grid nodes, flattened row-major over grid_counts().
Eigen::VectorXd to_grid(const ModeField& f);

// Projection of grid samples onto the full grid-resolution mode set using the
// interior quadrature rule.  Exact inverse of to_grid for fields carrying the
// full mode set.
ModeField from_grid(const DomainSpec& d, const Eigen::VectorXd& grid_values);

// Same transforms for complex orbital coefficient vectors over `counts`.
Eigen::VectorXcd orbital_to_grid(const DomainSpec& d, const std::vector<int>& counts,
                                 const Eigen::VectorXcd& coeffs);
Eigen::VectorXcd orbital_from_grid(const DomainSpec& d, const std::vector<int>& counts,
                                   const Eigen::VectorXcd& grid_values);

// Column-batched versions: one orbital per column.
Eigen::MatrixXcd orbital_matrix_to_grid(const DomainSpec& d, const std::vector<int>& counts,
                                        const Eigen::MatrixXcd& coeffs);
Eigen::MatrixXcd orbital_matrix_from_grid(const DomainSpec& d, const std::vector<int>& counts,
                                          const Eigen::MatrixXcd& grid_values);

// Quadrature approximation of integral(a * b) over the box; exact for any two
// fields resolved by the grid, because a product of two kept sine modes only
// carries cosine frequencies below 2(G_i + 1).
double inner_product_grid(const ModeField& a, const ModeField& b);

}  // namespace srsp
