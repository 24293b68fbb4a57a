#include "srsp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace srsp {

void DomainSpec::validate() const {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("domain: dim must be 1, 2 or 3, got " + std::to_string(dim));
  }
  if (static_cast<int>(lengths.size()) != dim) {
    std::ostringstream msg;
    msg << "domain: expected " << dim << " lengths, got " << lengths.size();
    throw std::invalid_argument(msg.str());
  }
  if (static_cast<int>(modes.size()) != dim) {
    std::ostringstream msg;
    msg << "domain: expected " << dim << " mode counts, got " << modes.size();
    throw std::invalid_argument(msg.str());
  }
  for (int i = 0; i < dim; ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
      std::ostringstream msg;
      msg << "domain: lengths[" << i << "] must be positive and finite, got " << lengths[i];
      throw std::invalid_argument(msg.str());
    }
    if (modes[i] < 1) {
      std::ostringstream msg;
      msg << "domain: modes[" << i << "] must be >= 1, got " << modes[i];
      throw std::invalid_argument(msg.str());
    }
  }
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("domain: mass must be finite and >= 0");
  }
  if (grid_oversample < 2) {
    throw std::invalid_argument("domain: grid_oversample must be >= 2, got " +
                                std::to_string(grid_oversample));
  }
}

int DomainSpec::mode_total() const {
  return std::accumulate(modes.begin(), modes.end(), 1, std::multiplies<int>());
}

std::vector<int> DomainSpec::grid_counts() const {
  std::vector<int> g(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) g[i] = grid_oversample * modes[i];
  return g;
}

int DomainSpec::grid_total() const {
  const auto g = grid_counts();
  return std::accumulate(g.begin(), g.end(), 1, std::multiplies<int>());
}

int flat_index(const std::vector<int>& counts, const MultiIndex& k) {
  if (k.size() != counts.size()) {
    throw std::invalid_argument("flat_index: dimension mismatch");
  }
  int flat = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (k[i] < 1 || k[i] > counts[i]) {
      std::ostringstream msg;
      msg << "flat_index: component " << i << " out of range: " << k[i];
      throw std::invalid_argument(msg.str());
    }
    flat = flat * counts[i] + (k[i] - 1);
  }
  return flat;
}

MultiIndex unflatten_index(const std::vector<int>& counts, int flat) {
  MultiIndex k(counts.size());
  for (int i = static_cast<int>(counts.size()) - 1; i >= 0; --i) {
    k[i] = flat % counts[i] + 1;
    flat /= counts[i];
  }
  if (flat != 0) throw std::invalid_argument("unflatten_index: flat index out of range");
  return k;
}

double laplace_eigenvalue(const DomainSpec& d, const MultiIndex& k) {
  double mu = 0.0;
  for (int i = 0; i < d.dim; ++i) {
    const double w = M_PI * k[i] / d.lengths[i];
    mu += w * w;
  }
  return mu;
}

Eigen::VectorXd laplace_symbol(const DomainSpec& d, const std::vector<int>& counts) {
  const int total = std::accumulate(counts.begin(), counts.end(), 1, std::multiplies<int>());
  Eigen::VectorXd mu(total);
  for (int flat = 0; flat < total; ++flat) {
    mu[flat] = laplace_eigenvalue(d, unflatten_index(counts, flat));
  }
  return mu;
}

double kinetic_eigenvalue(const DomainSpec& d, double mu0) {
  const double m = d.mass;
  // sqrt(mu + m^2) - m computed as mu / (sqrt(mu + m^2) + m) to stay accurate
  // for mu << m^2.
  return mu0 / (std::sqrt(mu0 + m * m) + m);
}

Eigen::VectorXd kinetic_symbol(const DomainSpec& d, const std::vector<int>& counts) {
  Eigen::VectorXd t = laplace_symbol(d, counts);
  for (int i = 0; i < t.size(); ++i) t[i] = kinetic_eigenvalue(d, t[i]);
  return t;
}

std::vector<SpectrumEntry> laplacian_spectrum(const DomainSpec& d) {
  d.validate();
  const int total = d.mode_total();
  std::vector<SpectrumEntry> entries;
  entries.reserve(total);
  for (int flat = 0; flat < total; ++flat) {
    MultiIndex k = unflatten_index(d.modes, flat);
    entries.push_back({k, laplace_eigenvalue(d, k)});
  }
  std::sort(entries.begin(), entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return a.index < b.index;
  });
  return entries;
}

Eigen::VectorXd grid_coordinates(const DomainSpec& d, int axis) {
  if (axis < 0 || axis >= d.dim) throw std::invalid_argument("grid_coordinates: bad axis");
  const int g = d.grid_oversample * d.modes[axis];
  Eigen::VectorXd x(g);
  for (int j = 0; j < g; ++j) x[j] = (j + 1) * d.lengths[axis] / (g + 1);
  return x;
}

double grid_weight(const DomainSpec& d) {
  double w = 1.0;
  const auto g = d.grid_counts();
  for (int i = 0; i < d.dim; ++i) w *= d.lengths[i] / (g[i] + 1);
  return w;
}

}  // namespace srsp
