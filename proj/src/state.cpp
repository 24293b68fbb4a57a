#include "srsp/state.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "srsp/operators.hpp"

namespace srsp {
namespace {

int product(const std::vector<int>& v) {
  return std::accumulate(v.begin(), v.end(), 1, std::multiplies<int>());
}

// Bit-stable uniform in (0,1): top 53 bits of the generator output, centered.
double uniform01(std::mt19937_64& rng) {
  return ((rng() >> 11) + 0.5) * 0x1p-53;
}

std::complex<double> gaussian_complex(std::mt19937_64& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

}  // namespace

MixedState::MixedState(DomainSpec domain, std::vector<int> counts, Eigen::MatrixXcd orbitals,
                       Eigen::VectorXd occupations)
    : domain_(std::move(domain)),
      counts_(std::move(counts)),
      orbitals_(std::move(orbitals)),
      occupations_(std::move(occupations)) {
  domain_.validate();
  if (static_cast<int>(counts_.size()) != domain_.dim) {
    throw std::invalid_argument("MixedState: mode counts dimension mismatch");
  }
  if (orbitals_.rows() != product(counts_)) {
    throw std::invalid_argument("MixedState: orbital rows do not match the mode box");
  }
  if (orbitals_.cols() != occupations_.size()) {
    throw std::invalid_argument("MixedState: one occupation per orbital required");
  }
}

double MixedState::ortho_defect() const {
  const int k = num_orbitals();
  Eigen::MatrixXcd gram = orbitals_.adjoint() * orbitals_;
  gram -= Eigen::MatrixXcd::Identity(k, k);
  return gram.cwiseAbs().maxCoeff();
}

double MixedState::mass() const {
  double m = 0.0;
  for (int k = 0; k < num_orbitals(); ++k) {
    m += occupations_[k] * orbitals_.col(k).squaredNorm();
  }
  return m;
}

void MixedState::validate(double tol) const {
  for (int k = 0; k < num_orbitals(); ++k) {
    if (!(occupations_[k] > 0.0) || !std::isfinite(occupations_[k])) {
      std::ostringstream msg;
      msg << "MixedState: occupation " << k << " must be positive and finite, got "
          << occupations_[k];
      throw std::invalid_argument(msg.str());
    }
  }
  const double defect = ortho_defect();
  if (!(defect <= tol)) {
    std::ostringstream msg;
    msg << "MixedState: orbitals are not orthonormal, Gram defect " << defect << " > " << tol;
    throw std::invalid_argument(msg.str());
  }
}

MixedState MixedState::embedded(const std::vector<int>& counts) const {
  for (int i = 0; i < domain_.dim; ++i) {
    if (counts[i] < counts_[i]) {
      throw std::invalid_argument("MixedState::embedded: target mode box is smaller");
    }
  }
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(product(counts), orbitals_.cols());
  for (int flat = 0; flat < orbitals_.rows(); ++flat) {
    big.row(flat_index(counts, unflatten_index(counts_, flat))) = orbitals_.row(flat);
  }
  return MixedState(domain_, counts, std::move(big), occupations_);
}

void MixedState::reorthonormalize() {
  const int k = num_orbitals();
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int j = 0; j < k; ++j) {
      auto col = orbitals_.col(j);
      for (int i = 0; i < j; ++i) {
        col -= orbitals_.col(i).dot(col) * orbitals_.col(i);
      }
      const double norm = col.norm();
      if (!(norm > 1e-14)) {
        throw std::runtime_error("reorthonormalize: orbital family became degenerate");
      }
      col /= norm;
    }
  }
}

ModeField density(const MixedState& state) {
  const DomainSpec& d = state.domain();
  const Eigen::MatrixXcd grid = orbital_matrix_to_grid(d, state.mode_counts(), state.orbitals());
  Eigen::VectorXd n_grid = Eigen::VectorXd::Zero(grid.rows());
  for (int k = 0; k < state.num_orbitals(); ++k) {
    n_grid += state.occupations()[k] * grid.col(k).cwiseAbs2();
  }
  return from_grid(d, n_grid);
}

EnergyBreakdown energy_breakdown(const MixedState& state) {
  EnergyBreakdown e;
  const Eigen::VectorXd t = kinetic_symbol(state.domain(), state.mode_counts());
  for (int k = 0; k < state.num_orbitals(); ++k) {
    e.kinetic += state.occupations()[k] * t.dot(state.orbitals().col(k).cwiseAbs2());
  }
  const ModeField n = density(state);
  const ModeField v = poisson_solve(n);
  e.field_overlap = 0.5 * v.coeffs().dot(n.coeffs());
  const Eigen::VectorXd mu = laplace_symbol(state.domain(), n.mode_counts());
  e.field_gradient = 0.5 * mu.dot(v.coeffs().cwiseAbs2());
  return e;
}

double energy(const MixedState& state) { return energy_breakdown(state).total(); }

double casimir_energy(const MixedState& state, const CasimirDistribution& dist) {
  double c = energy(state);
  for (int k = 0; k < state.num_orbitals(); ++k) {
    c += dist.f_star(-state.occupations()[k]);
  }
  return c;
}

double g_functional(const MixedState& state, const ModeField& v, double sigma,
                    const CasimirDistribution& dist, double mass) {
  const DomainSpec& d = state.domain();
  const Eigen::VectorXd t = kinetic_symbol(d, state.mode_counts());
  const Eigen::MatrixXcd grid = orbital_matrix_to_grid(d, state.mode_counts(), state.orbitals());
  const Eigen::VectorXd v_grid = to_grid(v);
  const double w = grid_weight(d);
  double g = 0.0;
  for (int k = 0; k < state.num_orbitals(); ++k) {
    const double lam = state.occupations()[k];
    const double kin = t.dot(state.orbitals().col(k).cwiseAbs2());
    const double pot = w * v_grid.dot(grid.col(k).cwiseAbs2());
    g += dist.f_star(-lam) + lam * (kin + pot + sigma);
  }
  const Eigen::VectorXd mu = laplace_symbol(d, v.mode_counts());
  g -= 0.5 * mu.dot(v.coeffs().cwiseAbs2());
  g -= sigma * mass;
  return g;
}

std::pair<double, double> jensen_check(const MixedState& state, const ModeField& v, double sigma,
                                       const CasimirDistribution& dist) {
  const DomainSpec& d = state.domain();
  const Eigen::VectorXd t = kinetic_symbol(d, state.mode_counts());
  const Eigen::MatrixXcd grid = orbital_matrix_to_grid(d, state.mode_counts(), state.orbitals());
  const Eigen::VectorXd v_grid = to_grid(v);
  const double w = grid_weight(d);
  double lhs = 0.0;
  for (int k = 0; k < state.num_orbitals(); ++k) {
    const double kin = t.dot(state.orbitals().col(k).cwiseAbs2());
    const double pot = w * v_grid.dot(grid.col(k).cwiseAbs2());
    lhs += dist.big_f(kin + pot + sigma);
  }
  const Eigen::MatrixXd h = hamiltonian_matrix(v, state.mode_counts());
  const EigenDecomposition eig = eigendecompose(h);
  double rhs = 0.0;
  for (int j = 0; j < eig.eigenvalues.size(); ++j) {
    rhs += dist.big_f(eig.eigenvalues[j] + sigma);
  }
  return {lhs, rhs};
}

double sobolev_hs_norm(const MixedState& state, double s) {
  const Eigen::VectorXd mu = laplace_symbol(state.domain(), state.mode_counts());
  double acc = 0.0;
  for (int k = 0; k < state.num_orbitals(); ++k) {
    double orb = 0.0;
    for (int a = 0; a < mu.size(); ++a) {
      orb += std::pow(1.0 + mu[a], s) * std::norm(state.orbitals()(a, k));
    }
    acc += state.occupations()[k] * orb;
  }
  return std::sqrt(acc);
}

double sobolev_hs_norm(const ModeField& f, double s) {
  const Eigen::VectorXd mu = laplace_symbol(f.domain(), f.mode_counts());
  double acc = 0.0;
  for (int a = 0; a < mu.size(); ++a) {
    acc += std::pow(1.0 + mu[a], s) * f[a] * f[a];
  }
  return std::sqrt(acc);
}

MixedState perturb(const MixedState& state, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("perturb: epsilon must be finite and >= 0");
  }
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd kick(state.orbitals().rows(), state.orbitals().cols());
  for (int c = 0; c < kick.cols(); ++c) {
    for (int r = 0; r < kick.rows(); ++r) {
      kick(r, c) = gaussian_complex(rng);
    }
  }
  const double norm = kick.norm();
  MixedState out = state;
  if (epsilon > 0.0 && norm > 0.0) {
    out.orbitals() += (epsilon / norm) * kick;
    out.reorthonormalize();
  }
  return out;
}

}  // namespace srsp
