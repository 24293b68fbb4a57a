#include "srsp/casimir.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace srsp {
namespace {

constexpr double kInverseTol = 1e-9;
constexpr double kAntiderivativeTol = 1e-6;

void require_nonpositive(double s, const char* who) {
  if (s > 0.0) {
    std::ostringstream msg;
    msg << who << ": conjugate argument must be <= 0, got " << s;
    throw std::domain_error(msg.str());
  }
}

void require_positive_y(double y, const char* who) {
  if (!(y > 0.0)) {
    std::ostringstream msg;
    msg << who << ": inverse argument must be > 0, got " << y;
    throw std::domain_error(msg.str());
  }
}

}  // namespace

BoltzmannDistribution::BoltzmannDistribution(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("boltzmann: beta must be positive and finite");
  }
}

double BoltzmannDistribution::f(double s) const { return std::exp(-beta_ * s); }

double BoltzmannDistribution::f_prime(double s) const { return -beta_ * std::exp(-beta_ * s); }

double BoltzmannDistribution::f_inverse(double y) const {
  require_positive_y(y, "boltzmann f_inverse");
  return -std::log(y) / beta_;
}

double BoltzmannDistribution::big_f(double s) const { return std::exp(-beta_ * s) / beta_; }

double BoltzmannDistribution::f_star(double s) const {
  require_nonpositive(s, "boltzmann f_star");
  const double lam = -s;
  if (lam == 0.0) return 0.0;
  // The sup over tau >= 0 sits at tau = f_inverse(lam) while lam <= f(0) = 1,
  // and pins to tau = 0 beyond.
  if (lam >= 1.0) return -1.0 / beta_;
  return (lam * std::log(lam) - lam) / beta_;
}

double BoltzmannDistribution::cutoff() const { return std::numeric_limits<double>::infinity(); }

PowerCutoffDistribution::PowerCutoffDistribution(double s0, double p) : s0_(s0), p_(p) {
  if (!(s0 > 0.0) || !std::isfinite(s0)) {
    throw std::invalid_argument("power_cutoff: s0 must be positive and finite");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("power_cutoff: p must be >= 1 and finite");
  }
}

double PowerCutoffDistribution::f(double s) const {
  const double r = s0_ - s;
  return r > 0.0 ? std::pow(r, p_) : 0.0;
}

double PowerCutoffDistribution::f_prime(double s) const {
  const double r = s0_ - s;
  return r > 0.0 ? -p_ * std::pow(r, p_ - 1.0) : 0.0;
}

double PowerCutoffDistribution::f_inverse(double y) const {
  require_positive_y(y, "power_cutoff f_inverse");
  return s0_ - std::pow(y, 1.0 / p_);
}

double PowerCutoffDistribution::big_f(double s) const {
  const double r = s0_ - s;
  return r > 0.0 ? std::pow(r, p_ + 1.0) / (p_ + 1.0) : 0.0;
}

double PowerCutoffDistribution::f_star(double s) const {
  require_nonpositive(s, "power_cutoff f_star");
  const double lam = -s;
  if (lam == 0.0) return 0.0;
  const double f0 = std::pow(s0_, p_);
  if (lam >= f0) return -std::pow(s0_, p_ + 1.0) / (p_ + 1.0);
  return s * s0_ + p_ / (p_ + 1.0) * std::pow(lam, (p_ + 1.0) / p_);
}

double PowerCutoffDistribution::cutoff() const { return s0_; }

double NonMonotoneProbe::f(double s) const {
  return std::exp(-s) * (1.0 + 0.5 * std::sin(3.0 * s));
}

double NonMonotoneProbe::f_prime(double s) const {
  return std::exp(-s) * (-1.0 - 0.5 * std::sin(3.0 * s) + 1.5 * std::cos(3.0 * s));
}

double NonMonotoneProbe::f_inverse(double) const {
  throw std::logic_error("non_monotone_probe: no inverse, f is not monotone");
}

double NonMonotoneProbe::big_f(double s) const {
  return std::exp(-s) * (1.0 + (std::sin(3.0 * s) + 3.0 * std::cos(3.0 * s)) / 20.0);
}

double NonMonotoneProbe::f_star(double s) const {
  require_nonpositive(s, "non_monotone_probe f_star");
  // Coarse scan plus ternary refinement; adequate for a validation probe.
  const int n = 4000;
  const double hi = 60.0;
  double best = -big_f(0.0), best_tau = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double tau = hi * i / n;
    const double g = s * tau - big_f(tau);
    if (g > best) {
      best = g;
      best_tau = tau;
    }
  }
  double lo = std::max(0.0, best_tau - hi / n), up = best_tau + hi / n;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (up - lo) / 3.0, m2 = up - (up - lo) / 3.0;
    if (s * m1 - big_f(m1) < s * m2 - big_f(m2)) lo = m1;
    else up = m2;
  }
  const double tau = 0.5 * (lo + up);
  return std::max(best, s * tau - big_f(tau));
}

double NonMonotoneProbe::cutoff() const { return std::numeric_limits<double>::infinity(); }

CasimirValidationReport validate_casimir(const CasimirDistribution& dist, double s_max,
                                         int n_samples) {
  if (!(s_max > 0.0) || n_samples < 16) {
    throw std::invalid_argument("validate_casimir: need s_max > 0 and n_samples >= 16");
  }
  CasimirValidationReport rep;
  const double s0 = dist.cutoff();

  std::vector<double> s(n_samples), fv(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    s[i] = s_max * i / (n_samples - 1);
    fv[i] = dist.f(s[i]);
  }

  rep.positive_on_support = true;
  for (int i = 0; i < n_samples; ++i) {
    if (s[i] < s0 && !(fv[i] > 0.0)) {
      rep.positive_on_support = false;
      std::ostringstream msg;
      msg << "f(" << s[i] << ") = " << fv[i] << " is not positive inside the support";
      rep.failures.push_back(msg.str());
      break;
    }
  }

  rep.zero_beyond_cutoff = true;
  if (std::isfinite(s0)) {
    for (double probe : {s0 * 1.000001, s0 + 1.0, s0 + 10.0, 2.0 * s0}) {
      if (dist.f(probe) != 0.0) {
        rep.zero_beyond_cutoff = false;
        std::ostringstream msg;
        msg << "f(" << probe << ") = " << dist.f(probe) << " beyond the cutoff " << s0;
        rep.failures.push_back(msg.str());
        break;
      }
    }
  }

  rep.strictly_decreasing = true;
  for (int i = 0; i + 1 < n_samples; ++i) {
    if (s[i + 1] >= s0) break;
    if (!(fv[i + 1] < fv[i])) {
      rep.strictly_decreasing = false;
      std::ostringstream msg;
      msg << "f is not strictly decreasing between s = " << s[i] << " and " << s[i + 1];
      rep.failures.push_back(msg.str());
      break;
    }
  }

  // Decay check: find eps > 0 with f(s) (1+s)^(5+eps) bounded along the tail.
  // Block maxima over the upper half of the sample window must not grow, which
  // tolerates oscillating profiles while rejecting anything slower than
  // (1+s)^(-5).
  rep.decay_bound = false;
  if (std::isfinite(s0) && s0 <= s_max * 0.5) {
    rep.decay_eps = 1.0;
    rep.decay_c = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      rep.decay_c = std::max(rep.decay_c, fv[i] * std::pow(1.0 + s[i], 6.0));
    }
    rep.decay_bound = true;  // compact support decays trivially
  } else {
    for (double eps : {2.0, 1.0, 0.5, 0.25, 0.1, 0.01}) {
      const int tail_begin = n_samples / 2;
      const int blocks = 4;
      const int per_block = (n_samples - tail_begin) / blocks;
      double prev = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (int b = 0; b < blocks; ++b) {
        double mx = 0.0;
        for (int i = tail_begin + b * per_block;
             i < std::min(n_samples, tail_begin + (b + 1) * per_block); ++i) {
          mx = std::max(mx, fv[i] * std::pow(1.0 + s[i], 5.0 + eps));
        }
        if (mx > prev * 1.01) {
          ok = false;
          break;
        }
        prev = mx;
      }
      if (ok) {
        rep.decay_bound = true;
        rep.decay_eps = eps;
        rep.decay_c = 0.0;
        for (int i = 0; i < n_samples; ++i) {
          rep.decay_c = std::max(rep.decay_c, fv[i] * std::pow(1.0 + s[i], 5.0 + eps));
        }
        break;
      }
    }
    if (!rep.decay_bound) {
      rep.failures.push_back("no eps > 0 with f(s)(1+s)^(5+eps) bounded was found");
    }
  }

  rep.inverse_consistent = true;
  try {
    for (int i = 0; i < n_samples; ++i) {
      if (s[i] >= s0 || !(fv[i] > 0.0)) break;
      const double back = dist.f_inverse(fv[i]);
      if (std::abs(back - s[i]) > kInverseTol * (1.0 + std::abs(s[i])) ||
          std::abs(dist.f(back) - fv[i]) > kInverseTol * (1.0 + fv[i])) {
        rep.inverse_consistent = false;
        std::ostringstream msg;
        msg << "f_inverse(f(" << s[i] << ")) = " << back << " does not match";
        rep.failures.push_back(msg.str());
        break;
      }
    }
  } catch (const std::exception& e) {
    rep.inverse_consistent = false;
    rep.failures.push_back(std::string("f_inverse unavailable: ") + e.what());
  }

  rep.antiderivative_consistent = true;
  const double h = 1e-5 * std::max(1.0, s_max / 40.0);
  for (int i = 1; i + 1 < n_samples; i += std::max(1, n_samples / 64)) {
    if (std::abs(s[i] - s0) < 10.0 * h) continue;  // one-sided kink at the cutoff
    const double slope = (dist.big_f(s[i] + h) - dist.big_f(s[i] - h)) / (2.0 * h);
    if (std::abs(slope + fv[i]) > kAntiderivativeTol * (1.0 + fv[i])) {
      rep.antiderivative_consistent = false;
      std::ostringstream msg;
      msg << "d big_f/ds at s = " << s[i] << " is " << slope << ", expected " << -fv[i];
      rep.failures.push_back(msg.str());
      break;
    }
  }

  return rep;
}

}  // namespace srsp
