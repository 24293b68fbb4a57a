#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "srsp/domain.hpp"

using namespace srsp;

namespace {
DomainSpec desk_domain() {
  DomainSpec d;
  d.dim = 1;
  d.lengths = {M_PI};
  d.modes = {8};
  d.mass = 0.0;
  d.grid_oversample = 2;
  return d;
}
}  // namespace

TEST_CASE("domain validation rejects bad fields") {
  DomainSpec d = desk_domain();
  CHECK_NOTHROW(d.validate());

  d.dim = 0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = desk_domain();
  d.lengths = {-1.0};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = desk_domain();
  d.modes = {0};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = desk_domain();
  d.mass = -0.5;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = desk_domain();
  d.grid_oversample = 1;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = desk_domain();
  d.lengths = {1.0, 1.0};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("flat index round-trips in row-major order") {
  const std::vector<int> counts = {3, 4, 2};
  int expected = 0;
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 4; ++b) {
      for (int c = 1; c <= 2; ++c) {
        const MultiIndex k = {a, b, c};
        CHECK(flat_index(counts, k) == expected);
        CHECK(unflatten_index(counts, expected) == k);
        ++expected;
      }
    }
  }
  CHECK_THROWS_AS(flat_index(counts, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(flat_index(counts, {4, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(flat_index({3, 4}, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("laplacian spectrum on an anisotropic box") {
  // lengths (pi, pi/2): eigenvalue k1^2 + 4 k2^2
  DomainSpec d;
  d.dim = 2;
  d.lengths = {M_PI, M_PI / 2.0};
  d.modes = {3, 3};
  const auto spec = laplacian_spectrum(d);
  REQUIRE(spec.size() == 9);
  const std::vector<double> expected_values = {5, 8, 13, 17, 20, 25, 37, 40, 45};
  const std::vector<MultiIndex> expected_indices = {{1, 1}, {2, 1}, {3, 1}, {1, 2}, {2, 2},
                                                    {3, 2}, {1, 3}, {2, 3}, {3, 3}};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    CHECK(spec[i].eigenvalue == doctest::Approx(expected_values[i]).epsilon(1e-13));
    CHECK(spec[i].index == expected_indices[i]);
  }
}

TEST_CASE("degenerate eigenvalues order lexicographically") {
  DomainSpec d;
  d.dim = 2;
  d.lengths = {M_PI, M_PI};
  d.modes = {2, 2};
  const auto spec = laplacian_spectrum(d);
  REQUIRE(spec.size() == 4);
  CHECK(spec[0].index == MultiIndex{1, 1});
  CHECK(spec[1].index == MultiIndex{1, 2});  // ties at 5 break toward smaller k1
  CHECK(spec[2].index == MultiIndex{2, 1});
  CHECK(spec[3].index == MultiIndex{2, 2});
}

TEST_CASE("kinetic symbol limits and identities") {
  DomainSpec d = desk_domain();

  SUBCASE("massless case is the square root of the laplacian") {
    const Eigen::VectorXd t = kinetic_symbol(d, d.modes);
    for (int k = 1; k <= 8; ++k) {
      CHECK(t[k - 1] == doctest::Approx(static_cast<double>(k)).epsilon(1e-14));
    }
  }

  SUBCASE("frozen value at mass 3") {
    d.mass = 3.0;
    // sqrt(4 + 9) - 3 for the k = 2 mode
    CHECK(kinetic_eigenvalue(d, 4.0) == doctest::Approx(0.6055512754639893).epsilon(1e-15));
  }

  SUBCASE("heavy-mass limit matches mu / (2 m)") {
    d.mass = 1e8;
    const double t = kinetic_eigenvalue(d, 1.0);
    CHECK(std::abs(t * 2.0 * d.mass / 1.0 - 1.0) <= 1e-15);
  }

  SUBCASE("square identity t^2 + 2 m t = mu holds to roundoff") {
    d.mass = 1.0;
    d.modes = {64};
    const Eigen::VectorXd mu = laplace_symbol(d, d.modes);
    const Eigen::VectorXd t = kinetic_symbol(d, d.modes);
    for (int i = 0; i < 64; ++i) {
      CHECK(t[i] * t[i] + 2.0 * t[i] == doctest::Approx(mu[i]).epsilon(1e-12));
    }
  }

  SUBCASE("symbol is nonnegative and increasing along 1d spectrum") {
    d.mass = 0.7;
    d.modes = {32};
    const Eigen::VectorXd t = kinetic_symbol(d, d.modes);
    CHECK(t.minCoeff() >= 0.0);
    for (int i = 0; i + 1 < t.size(); ++i) CHECK(t[i] < t[i + 1]);
  }
}

TEST_CASE("grid geometry") {
  DomainSpec d = desk_domain();
  const Eigen::VectorXd x = grid_coordinates(d, 0);
  REQUIRE(x.size() == 16);
  CHECK(x[0] == doctest::Approx(M_PI / 17.0).epsilon(1e-15));
  CHECK(x[15] == doctest::Approx(16.0 * M_PI / 17.0).epsilon(1e-15));
  CHECK(grid_weight(d) == doctest::Approx(M_PI / 17.0).epsilon(1e-15));
  CHECK(d.grid_total() == 16);
  CHECK(d.mode_total() == 8);
}
