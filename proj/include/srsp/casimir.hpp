#pragma once

#include <memory>
#include <string>
#include <vector>

namespace srsp {

// Occupation profile f together with the transforms the variational machinery
// needs.  f is positive and strictly decreasing below its cutoff, zero beyond
// it, and integrable with at least (1+s)^{-5} decay; these properties are what
// validate_casimir probes.
//
//   big_f(s)  = integral of f over [s, infinity)
//   f_star(s) = sup_{tau >= 0} ( s tau - big_f(tau) ),  defined for s <= 0
//   f_inverse = inverse of the decreasing branch, f(f_inverse(y)) = y
//
// big_f is convex with derivative -f, so f_star is its convex conjugate on
// the half-line; f_star(0) = 0 because big_f decays to zero.
class CasimirDistribution {
 public:
  virtual ~CasimirDistribution() = default;

  virtual double f(double s) const = 0;
  // df/ds away from the cutoff point.
  virtual double f_prime(double s) const = 0;
  // Defined for y > 0; throws std::domain_error outside.
  virtual double f_inverse(double y) const = 0;
  virtual double big_f(double s) const = 0;
  // Defined for s <= 0; throws std::domain_error for s > 0.
  virtual double f_star(double s) const = 0;
  // Support endpoint; +infinity when f never vanishes.
  virtual double cutoff() const = 0;
  virtual std::string kind() const = 0;
};

// f(s) = exp(-beta s), no cutoff.  All transforms in closed form.
class BoltzmannDistribution final : public CasimirDistribution {
 public:
  explicit BoltzmannDistribution(double beta);
  double f(double s) const override;
  double f_prime(double s) const override;
  double f_inverse(double y) const override;
  double big_f(double s) const override;
  double f_star(double s) const override;
  double cutoff() const override;
  std::string kind() const override { return "boltzmann"; }
  double beta() const { return beta_; }

 private:
  double beta_;
};

// f(s) = max(s0 - s, 0)^p with p >= 1, cutoff at s0 > 0.
class PowerCutoffDistribution final : public CasimirDistribution {
 public:
  PowerCutoffDistribution(double s0, double p);
  double f(double s) const override;
  double f_prime(double s) const override;
  double f_inverse(double y) const override;
  double big_f(double s) const override;
  double f_star(double s) const override;
  double cutoff() const override;
  std::string kind() const override { return "power_cutoff"; }
  double s0() const { return s0_; }
  double p() const { return p_; }

 private:
  double s0_;
  double p_;
};

// Negative control for the validator: f(s) = exp(-s)(1 + 0.5 sin 3s) decays
// fast enough but is not monotone, so it must be rejected.  f_inverse is
// unavailable; f_star falls back to a numeric sup.
class NonMonotoneProbe final : public CasimirDistribution {
 public:
  double f(double s) const override;
  double f_prime(double s) const override;
  double f_inverse(double y) const override;
  double big_f(double s) const override;
  double f_star(double s) const override;
  double cutoff() const override;
  std::string kind() const override { return "non_monotone_probe"; }
};

struct CasimirValidationReport {
  bool positive_on_support = false;
  bool zero_beyond_cutoff = false;
  bool strictly_decreasing = false;
  bool decay_bound = false;
  bool inverse_consistent = false;
  bool antiderivative_consistent = false;
  double decay_c = 0.0;    // fitted constant in f(s) <= C (1+s)^(-5-eps)
  double decay_eps = 0.0;  // fitted excess decay exponent
  std::vector<std::string> failures;

  bool ok() const {
    return positive_on_support && zero_beyond_cutoff && strictly_decreasing && decay_bound &&
           inverse_consistent && antiderivative_consistent;
  }
};

// Samples the distribution on [0, s_max] and checks the class conditions.
CasimirValidationReport validate_casimir(const CasimirDistribution& dist, double s_max = 40.0,
                                         int n_samples = 2000);

}  // namespace srsp
