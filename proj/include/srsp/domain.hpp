#pragma once

#include <Eigen/Core>
#include <vector>

namespace srsp {

// Rectangular box [0,L_1] x ... x [0,L_d] with homogeneous Dirichlet walls.
// Fields live in the orthonormal product sine basis
//   e_k(x) = prod_i sqrt(2/L_i) sin(k_i pi x_i / L_i),   k_i >= 1,
// which diagonalises both -Laplace and the kinetic operator
// sqrt(-Laplace + mass^2) - mass.  `modes` bounds the orbital expansion per
// axis; grids carry grid_oversample*modes points per axis so that products of
// two basis functions are still integrated exactly by the trapezoid-free
// interior quadrature rule.
struct DomainSpec {
  int dim = 1;
  std::vector<double> lengths;
  std::vector<int> modes;
  double mass = 0.0;
  int grid_oversample = 2;

  // Throws std::invalid_argument describing the first offending field.
  void validate() const;

  int mode_total() const;
  std::vector<int> grid_counts() const;
  int grid_total() const;

  bool operator==(const DomainSpec&) const = default;
};

// 1-based per-axis mode numbers, size == dim.
using MultiIndex = std::vector<int>;

// Row-major flattening of a multi-index over the given per-axis counts
// (axis 0 slowest).  Mode k occupies slot
//   sum_i (k_i - 1) * prod_{j>i} counts_j.
int flat_index(const std::vector<int>& counts, const MultiIndex& k);
MultiIndex unflatten_index(const std::vector<int>& counts, int flat);

// Dirichlet Laplacian eigenvalue sum_i (pi k_i / L_i)^2.
double laplace_eigenvalue(const DomainSpec& d, const MultiIndex& k);

// All Laplacian eigenvalues over `counts` modes in storage (row-major) order.
Eigen::VectorXd laplace_symbol(const DomainSpec& d, const std::vector<int>& counts);

// Kinetic symbol sqrt(mu + mass^2) - mass applied entrywise to the Laplacian
// symbol; nonnegative, and -> mu/(2 mass) as mass -> infinity.
Eigen::VectorXd kinetic_symbol(const DomainSpec& d, const std::vector<int>& counts);
double kinetic_eigenvalue(const DomainSpec& d, double mu0);

struct SpectrumEntry {
  MultiIndex index;
  double eigenvalue;
};

// Laplacian spectrum over the domain's mode box, ascending by eigenvalue,
// lexicographic multi-index order breaking ties deterministically.
std::vector<SpectrumEntry> laplacian_spectrum(const DomainSpec& d);

// Interior grid nodes x_j = (j+1) L / (G+1), j = 0..G-1, along one axis.
Eigen::VectorXd grid_coordinates(const DomainSpec& d, int axis);

// Quadrature weight prod_i L_i / (G_i + 1) attached to every grid node; the
// resulting rule integrates products of two kept basis functions exactly.
double grid_weight(const DomainSpec& d);

}  // namespace srsp
