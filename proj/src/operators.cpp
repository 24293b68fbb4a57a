#include "srsp/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace srsp {

ModeField apply_kinetic(const ModeField& f) {
  Eigen::VectorXd t = kinetic_symbol(f.domain(), f.mode_counts());
  return ModeField(f.domain(), f.mode_counts(), t.cwiseProduct(f.coeffs()));
}

ModeField poisson_solve(const ModeField& rho) {
  Eigen::VectorXd mu = laplace_symbol(rho.domain(), rho.mode_counts());
  return ModeField(rho.domain(), rho.mode_counts(), rho.coeffs().cwiseQuotient(mu));
}

double hminus1_norm(const ModeField& u) {
  Eigen::VectorXd mu = laplace_symbol(u.domain(), u.mode_counts());
  return std::sqrt(u.coeffs().cwiseQuotient(mu).dot(u.coeffs()));
}

Eigen::MatrixXd synthesis_matrix(const DomainSpec& d, const std::vector<int>& counts) {
  const int m = std::accumulate(counts.begin(), counts.end(), 1, std::multiplies<int>());
  Eigen::MatrixXd e(d.grid_total(), m);
  ModeField unit(d, counts);
  for (int a = 0; a < m; ++a) {
    unit.coeffs().setZero();
    unit[a] = 1.0;
    e.col(a) = to_grid(unit);
  }
  return e;
}

Eigen::MatrixXd hamiltonian_matrix(const ModeField& V, double* defect_out) {
  return hamiltonian_matrix(V, V.domain().modes, defect_out);
}

Eigen::MatrixXd hamiltonian_matrix(const ModeField& V, const std::vector<int>& counts,
                                   double* defect_out) {
  const DomainSpec& d = V.domain();
  const Eigen::MatrixXd e = synthesis_matrix(d, counts);
  const Eigen::VectorXd v_grid = to_grid(V);
  Eigen::MatrixXd w =
      grid_weight(d) * (e.transpose() * v_grid.asDiagonal() * e);
  const double defect = (w - w.transpose()).cwiseAbs().maxCoeff();
  if (defect_out) *defect_out = defect;
  w = 0.5 * (w + w.transpose()).eval();
  w.diagonal() += kinetic_symbol(d, counts);
  return w;
}

EigenDecomposition eigendecompose(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("eigendecompose: matrix is not square");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double sym_defect = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (sym_defect > 1e-10 * scale) {
    throw std::invalid_argument("eigendecompose: matrix is not symmetric (defect " +
                                std::to_string(sym_defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: iteration failed to converge");
  }
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  const int n = static_cast<int>(h.rows());
  for (int c = 0; c < n; ++c) {
    int arg = 0;
    double best = 0.0;
    for (int r = 0; r < n; ++r) {
      const double a = std::abs(out.eigenvectors(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (out.eigenvectors(arg, c) < 0.0) out.eigenvectors.col(c) = -out.eigenvectors.col(c);
  }
  out.max_residual =
      (h * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal())
          .cwiseAbs()
          .maxCoeff();
  out.ortho_defect = (out.eigenvectors.transpose() * out.eigenvectors -
                      Eigen::MatrixXd::Identity(n, n))
                         .cwiseAbs()
                         .maxCoeff();
  return out;
}

}  // namespace srsp
