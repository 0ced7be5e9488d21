#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hookwalk/errors.hpp"
#include "hookwalk/numerics.hpp"
#include "hookwalk/polyroots.hpp"

using namespace hookwalk;

TEST_CASE("small degrees by hand") {
  auto one = derivative_root_fractional_parts(1);
  REQUIRE(one.lambdas.size() == 1);
  CHECK(one.lambdas[0] == doctest::Approx(0.5).epsilon(1e-14));
  // p_2' = 3t^2 - 6t + 2.
  auto two = derivative_root_fractional_parts(2);
  CHECK(two.lambdas[0] == doctest::Approx(1.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(two.lambdas[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  // p_3' = 4t^3 - 18t^2 + 22t - 6 = 2 (2t - 3)(t^2 - 3t + 1).
  auto three = derivative_root_fractional_parts(3);
  CHECK(three.lambdas[0] == doctest::Approx((3.0 - std::sqrt(5.0)) / 2).epsilon(1e-14));
  CHECK(three.lambdas[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(derivative_root_fractional_parts(0), InvalidInput);
  CHECK_THROWS_AS(derivative_root_fractional_parts(100001), InvalidInput);
}

TEST_CASE("profile shape and symmetry") {
  for (int n : {30, 31, 1000, 5000}) {
    auto r = derivative_root_fractional_parts(n, 2);
    for (int k = 0; k < n; ++k) {
      CHECK(r.lambdas[k] > 0.0);
      CHECK(r.lambdas[k] < 1.0);
      CHECK(std::abs(r.lambdas[k] + r.lambdas[n - 1 - k] - 1.0) < 1e-10);
      if (k > 0) CHECK(r.lambdas[k] > r.lambdas[k - 1]);
    }
    if (n % 2 == 1) CHECK(r.lambdas[n / 2] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("roots solve the logarithmic derivative") {
  for (int n : {200, 6000}) {
    auto r = derivative_root_fractional_parts(n);
    for (int k : {0, n / 7, n / 2, n - 1}) {
      const double x = k + r.lambdas[k];
      numerics::CompensatedSum s, abs_s;
      for (int j = 0; j <= n; ++j) {
        s.add(1.0 / (x - j));
        abs_s.add(1.0 / ((x - j) * (x - j)));
      }
      // |S(x)| / |S'(x)| bounds the distance to the root.
      CHECK(std::abs(s.value()) / abs_s.value() < 1e-12);
    }
  }
}

TEST_CASE("limit curve") {
  CHECK(limit_curve(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(limit_curve(0.25) == doctest::Approx(0.392918396554778).epsilon(1e-13));
  CHECK(limit_curve(0.75) == doctest::Approx(1.0 - 0.392918396554778).epsilon(1e-13));
  // Logarithmic approach to 0 at the left end.
  CHECK(limit_curve(1e-12) < limit_curve(1e-6));
  CHECK(limit_curve(1e-300) < 0.002);
  CHECK(limit_curve(1.0 - 1e-12) == doctest::Approx(1.0 - limit_curve(1e-12)).epsilon(1e-6));
  CHECK_THROWS_AS(limit_curve(0.0), DomainError);
  CHECK_THROWS_AS(limit_curve(1.0), DomainError);
}

TEST_CASE("profiles approach the limit curve") {
  double prev = 1.0;
  for (int n : {50, 200, 1000}) {
    const double err = limit_curve_error(derivative_root_fractional_parts(n));
    CHECK(err <= prev);
    prev = err;
  }
  CHECK(prev < 0.05);
  CHECK_THROWS_AS(limit_curve_error(derivative_root_fractional_parts(5), 0.6, 0.4),
                  InvalidInput);
}
