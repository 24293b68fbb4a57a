#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "srsp/casimir.hpp"

using namespace srsp;

namespace {

// Independent oracle for big_f: adaptive quadrature of f over [s, horizon].
double integral_tail(const CasimirDistribution& dist, double s, double horizon) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return dist.f(t); }, s, horizon, 12, 1e-13);
}

// Independent oracle for f_star: dense scan of tau -> s tau - big_f(tau)
// followed by local refinement.
double sup_oracle(const CasimirDistribution& dist, double s, double horizon) {
  const int n = 200000;
  double best = -dist.big_f(0.0), best_tau = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double tau = horizon * i / n;
    const double g = s * tau - dist.big_f(tau);
    if (g > best) {
      best = g;
      best_tau = tau;
    }
  }
  double lo = std::max(0.0, best_tau - horizon / n), hi = best_tau + horizon / n;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (s * m1 - dist.big_f(m1) < s * m2 - dist.big_f(m2)) lo = m1;
    else hi = m2;
  }
  const double tau = 0.5 * (lo + hi);
  return std::max(best, s * tau - dist.big_f(tau));
}

}  // namespace

TEST_CASE("boltzmann closed forms against quadrature and scan oracles") {
  const BoltzmannDistribution dist(1.7);
  for (double s : {0.0, 0.3, 1.0, 2.9}) {
    CHECK(dist.big_f(s) == doctest::Approx(integral_tail(dist, s, s + 60.0)).epsilon(1e-11));
  }
  for (double lam : {0.01, 0.3, 0.9, 1.0, 1.4, 6.0}) {
    CHECK(dist.f_star(-lam) == doctest::Approx(sup_oracle(dist, -lam, 40.0)).epsilon(1e-8));
  }
  CHECK(dist.f_star(0.0) == 0.0);
}

TEST_CASE("boltzmann frozen values at unit temperature") {
  const BoltzmannDistribution dist(1.0);
  CHECK(dist.f(0.0) == 1.0);
  CHECK(dist.big_f(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dist.f_inverse(0.5) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(dist.f_star(-1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(dist.f_star(-0.5) == doctest::Approx(-0.8465735902799727).epsilon(1e-15));
  // beyond the occupancy ceiling f(0) the sup pins to tau = 0
  CHECK(dist.f_star(-2.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(dist.f_star(0.1), std::domain_error);
  CHECK_THROWS_AS(dist.f_inverse(0.0), std::domain_error);
  CHECK_THROWS_AS(dist.f_inverse(-1.0), std::domain_error);
}

TEST_CASE("power cutoff closed forms against oracles") {
  const PowerCutoffDistribution dist(2.0, 2.0);
  CHECK(dist.cutoff() == 2.0);
  for (double s : {0.0, 0.5, 1.5, 1.99}) {
    CHECK(dist.big_f(s) == doctest::Approx(integral_tail(dist, s, 2.0)).epsilon(1e-11));
  }
  CHECK(dist.big_f(2.0) == 0.0);
  CHECK(dist.big_f(5.0) == 0.0);
  for (double lam : {0.05, 0.5, 2.25, 3.9, 4.0, 9.0}) {
    CHECK(dist.f_star(-lam) == doctest::Approx(sup_oracle(dist, -lam, 3.0)).epsilon(1e-8));
  }

  // frozen: f(0.5) = 2.25, f_inverse back, F(0) = 8/3, F*(-1) = -4/3
  CHECK(dist.f(0.5) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(dist.f_inverse(2.25) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dist.big_f(0.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(dist.f_star(-1.0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
  CHECK(dist.f_star(-4.0) == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));  // pinned branch
  CHECK(dist.f_star(-9.0) == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("fenchel-young inequality with equality on the graph of f") {
  std::vector<std::unique_ptr<CasimirDistribution>> dists;
  dists.push_back(std::make_unique<BoltzmannDistribution>(1.0));
  dists.push_back(std::make_unique<BoltzmannDistribution>(2.5));
  dists.push_back(std::make_unique<PowerCutoffDistribution>(1.5, 2.0));
  dists.push_back(std::make_unique<PowerCutoffDistribution>(3.0, 1.0));
  for (const auto& dist : dists) {
    for (double s : {0.0, 0.2, 0.7, 1.3, 2.1, 4.0}) {
      for (double lam : {1e-3, 0.1, 0.6, 1.0, 2.2}) {
        CHECK(dist->big_f(s) + dist->f_star(-lam) >= -lam * s - 1e-12);
      }
      const double lam_eq = dist->f(s);
      if (lam_eq > 0.0) {
        const double gap = dist->big_f(s) + dist->f_star(-lam_eq) + lam_eq * s;
        CHECK(std::abs(gap) <= 1e-10 * (1.0 + std::abs(dist->big_f(s))));
      }
    }
  }
}

TEST_CASE("derivatives and midpoint convexity of big_f") {
  const BoltzmannDistribution b(1.3);
  const PowerCutoffDistribution p(2.0, 3.0);
  const double h = 1e-6;
  for (double s : {0.1, 0.8, 1.7}) {
    CHECK((b.f(s + h) - b.f(s - h)) / (2 * h) == doctest::Approx(b.f_prime(s)).epsilon(1e-8));
    CHECK((p.f(s + h) - p.f(s - h)) / (2 * h) == doctest::Approx(p.f_prime(s)).epsilon(1e-8));
    CHECK((b.big_f(s + h) - b.big_f(s - h)) / (2 * h) == doctest::Approx(-b.f(s)).epsilon(1e-8));
    CHECK((p.big_f(s + h) - p.big_f(s - h)) / (2 * h) == doctest::Approx(-p.f(s)).epsilon(1e-8));
  }
  for (double s : {0.0, 0.4, 1.1}) {
    for (double t : {0.2, 1.9, 3.5}) {
      CHECK(b.big_f(0.5 * (s + t)) <= 0.5 * (b.big_f(s) + b.big_f(t)) + 1e-14);
      CHECK(p.big_f(0.5 * (s + t)) <= 0.5 * (p.big_f(s) + p.big_f(t)) + 1e-14);
    }
  }
}

TEST_CASE("validator accepts the closed-form families") {
  const CasimirValidationReport rb = validate_casimir(BoltzmannDistribution(1.0));
  CHECK(rb.ok());
  CHECK(rb.failures.empty());
  CHECK(rb.decay_eps > 0.0);
  CHECK(rb.decay_c > 0.0);

  const CasimirValidationReport rp = validate_casimir(PowerCutoffDistribution(2.0, 2.0));
  CHECK(rp.ok());
  CHECK(rp.failures.empty());

  // steep temperature and wide cutoff corners
  CHECK(validate_casimir(BoltzmannDistribution(8.0)).ok());
  CHECK(validate_casimir(PowerCutoffDistribution(15.0, 1.0)).ok());
}

TEST_CASE("validator rejects a non-monotone profile") {
  const NonMonotoneProbe probe;
  const CasimirValidationReport rep = validate_casimir(probe);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.strictly_decreasing);
  CHECK_FALSE(rep.failures.empty());
  // the probe still decays fast enough; rejection is purely about monotonicity
  CHECK(rep.decay_bound);
  CHECK(rep.positive_on_support);
}

TEST_CASE("constructor guards") {
  CHECK_THROWS_AS(BoltzmannDistribution(0.0), std::invalid_argument);
  CHECK_THROWS_AS(BoltzmannDistribution(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(PowerCutoffDistribution(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(PowerCutoffDistribution(1.0, 0.5), std::invalid_argument);
}
