#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hookwalk/diagram.hpp"
#include "hookwalk/diagram_io.hpp"
#include "test_support.hpp"

using namespace hookwalk;

TEST_CASE("rectangular evaluation, center and area") {
  auto triv = RectangularDiagram::trivial(0.0);
  CHECK(triv.evaluate(3.0) == 3.0);
  CHECK(triv.area() == 0.0);

  RectangularDiagram r({0, 2}, {1});
  CHECK(r.evaluate(1.0) == 2.0);
  CHECK(r.evaluate(0.0) == 1.0);
  CHECK(r.center() == 1.0);
  CHECK(r.area() == 2.0);

  RectangularDiagram r3({0, 2, 5}, {1, 3});
  CHECK(r3.center() == 3.0);
  CHECK(r3.area() == 10.0);
  CHECK(r3.evaluate(-4.0) == 7.0);
  CHECK(r3.evaluate(9.0) == 6.0);
}

TEST_CASE("rectangular validation") {
  CHECK_THROWS_AS(RectangularDiagram({}, {}), InvalidInput);
  CHECK_THROWS_AS(RectangularDiagram({0, 2}, {}), InvalidInput);
  CHECK_THROWS_AS(RectangularDiagram({0, 2}, {2}), InvalidInput);
  CHECK_THROWS_AS(RectangularDiagram({0, 2}, {1}, Interval{0.5, 3}),
                  InvalidInput);
  CHECK_THROWS_AS(RectangularDiagram({0, 2}, {1}, Interval{3, 1}),
                  InvalidInput);
}

TEST_CASE("rectangular slopes are exactly +-1 between extrema") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = test_support::random_rectangular(rng, 1 + trial % 8);
    auto bp = r.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const double m = 0.5 * (bp[i] + bp[i + 1]);
      const double expect = i % 2 == 0 ? 1.0 : -1.0;
      CHECK(r.slope_left(m) == expect);
      CHECK(r.slope_right(m) == expect);
      const double secant =
          (r.evaluate(bp[i + 1]) - r.evaluate(bp[i])) / (bp[i + 1] - bp[i]);
      CHECK(secant == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(r.slope_left(bp.front()) == -1.0);
    CHECK(r.slope_right(bp.back()) == 1.0);
    CHECK(hinge_residual(r) < 1e-12);
  }
}

TEST_CASE("constant-slope diagram") {
  auto d = SmoothDiagram::constant_slope(0.0, {-1, 1});
  CHECK(d.center() == 0.0);
  CHECK(d.area() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.evaluate(0.3) == 1.0);
  CHECK(d.evaluate(2.5) == 2.5);
  auto e = SmoothDiagram::constant_slope(0.4, {0, 2});
  CHECK(hinge_residual(e) < 1e-12);
  CHECK_THROWS_AS(SmoothDiagram::constant_slope(1.0, {0, 1}), InvalidInput);
}

TEST_CASE("piecewise-linear diagram") {
  auto d = test_support::vee_half();
  CHECK(d.center() == 0.0);
  CHECK(d.area() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.evaluate(1.0) == 1.5);
  CHECK(d.slope_left(0.0) == -0.5);
  CHECK(d.slope_right(0.0) == 0.5);
  CHECK(d.breakpoints() == std::vector<double>{0.0});
  CHECK_THROWS_AS(PiecewiseLinearDiagram({{0, 1}, {1, 1}}), InvalidInput);
  CHECK_THROWS_AS(PiecewiseLinearDiagram({{-1, 1}, {0, 2}, {1, 1}}),
                  InvalidInput);
  CHECK_THROWS_AS(PiecewiseLinearDiagram({{-1, 1}}), InvalidInput);
}

TEST_CASE("smooth sine-profile diagram") {
  auto d = test_support::sine_profile();
  CHECK(hinge_residual(d) < 1e-12);
  CHECK(std::abs(d.center()) < 1e-12);
  // Numerical derivative of the evaluator agrees with the declared derivative.
  for (double x : {-0.7, -0.2, 0.1, 0.55}) {
    const double h = 1e-5;
    const double fd = (d.evaluate(x + h) - d.evaluate(x - h)) / (2 * h);
    CHECK(fd == doctest::Approx(d.slope(x)).epsilon(1e-8));
  }
}

TEST_CASE("evaluate is 1-Lipschitz") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Diagram> ds{RectangularDiagram({0, 2, 5}, {1, 3}),
                          test_support::vee_half(),
                          test_support::sine_profile()};
  for (const auto& d : ds) {
    for (int i = 0; i < 500; ++i) {
      const double x = u(rng);
      const double y = u(rng);
      CHECK(std::abs(evaluate(d, x) - evaluate(d, y)) <=
            std::abs(x - y) + 1e-12);
    }
  }
}

TEST_CASE("rotation of unrotated diagrams") {
  auto id = UnrotatedDiagram::polynomial({0, 1}, {0, 1});
  auto r = rotate(id);
  CHECK(r.interval().a == 0.0);
  CHECK(r.interval().b == doctest::Approx(std::numbers::sqrt2));
  for (double t : {0.1, 0.5, 1.2}) CHECK(r.slope(t) == doctest::Approx(0.0));

  auto q = UnrotatedDiagram::polynomial({0, 1, 1}, {0, 1});
  auto rq = rotate(q);
  CHECK(hinge_residual(rq) < 1e-12);
  auto back = unrotate(rq);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = (i + 0.5) / 100.0;
    worst = std::max(worst, std::abs(back.evaluate(x) - q.evaluate(x)));
    CHECK(back.derivative(x) == doctest::Approx(q.derivative(x)).epsilon(1e-9));
    CHECK(back.second_derivative(x) ==
          doctest::Approx(q.second_derivative(x)).epsilon(1e-8));
  }
  CHECK(worst < 1e-10);
  CHECK(back.interval().a == doctest::Approx(0.0));
  CHECK(back.interval().b == doctest::Approx(1.0));

  // Rotating the unrotated smooth profile returns the profile.
  auto s = test_support::sine_profile();
  auto s2 = rotate(unrotate(s));
  for (double t : {-0.9, -0.3, 0.2, 0.8}) {
    CHECK(s2.evaluate(t) == doctest::Approx(s.evaluate(t)).epsilon(1e-12));
    CHECK(s2.slope(t) == doctest::Approx(s.slope(t)).epsilon(1e-10));
  }

  CHECK_THROWS_AS(UnrotatedDiagram::polynomial({0, 1, -1}, {0, 1}),
                  InvalidInput);
  CHECK_THROWS_AS(UnrotatedDiagram::polynomial({0.5, 1}, {0, 1}),
                  InvalidInput);
}

TEST_CASE("unrotated helpers") {
  auto q = UnrotatedDiagram::polynomial({0, 1, 1}, {0, 1});
  CHECK(q.inverse(q.evaluate(0.3)) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(q.slope_between(0.5, 0.5 + 1e-9) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(q.slope_between(0.2, 0.6) == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(q.area() == doctest::Approx(1.0 / 3 + 0.5).epsilon(1e-12));
}

TEST_CASE("rectangular approximation") {
  PiecewiseLinearDiagram flat({{-1, 1}, {1, 1}});
  auto r2 = rectangular_approximation(flat, 2);
  CHECK(r2.minima() == std::vector<double>{-1, 0, 1});
  CHECK(r2.maxima() == std::vector<double>{-0.5, 0.5});
  auto r1 = rectangular_approximation(flat, 1);
  CHECK(r1.minima() == std::vector<double>{-1, 1});

  auto d = test_support::vee_half();
  double previous = INFINITY;
  for (int n = 2; n <= 256; n *= 2) {
    auto r = rectangular_approximation(d, n);
    // Interpolation at every minimum.
    for (double x : r.minima())
      CHECK(r.evaluate(x) == doctest::Approx(d.evaluate(x)).epsilon(1e-12));
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double x = -2.0 + 4.0 * i / 4000;
      sup = std::max(sup, std::abs(r.evaluate(x) - d.evaluate(x)));
    }
    CHECK(sup <= 2.0 / n + 1e-12);
    CHECK(sup <= previous);
    previous = sup;
  }
}

TEST_CASE("diagram spec round trip") {
  const char* texts[] = {
      R"({"kind":"rectangular","minima":[0,2,5],"maxima":[1,3],"interval":[-1,6]})",
      R"({"kind":"piecewise_linear","breakpoints":[[-2,2],[0,1],[2,2]]})",
      R"({"kind":"constant_slope","slope":0.25,"interval":[-1,1]})",
      R"({"kind":"unrotated_poly","coeffs":[0,1,0.5],"interval":[0,1]})",
  };
  for (const char* t : texts) {
    auto spec = parse_diagram_spec(nlohmann::json::parse(t));
    auto j = to_json(spec);
    CHECK(j.dump() == std::string(t));
    auto again = parse_diagram_spec(nlohmann::json::parse(j.dump()));
    CHECK(to_json(again).dump() == j.dump());
  }
  auto rect = parse_diagram_spec(nlohmann::json::parse(
      R"({"kind":"rectangular","minima":[0,2],"maxima":[1]})"));
  CHECK(std::get<RectangularDiagram>(rect).interval().a < 0.0);
  CHECK_THROWS_AS(parse_diagram_spec(nlohmann::json::parse(R"({"kind":"x"})")),
                  InvalidInput);
  CHECK_THROWS_AS(parse_diagram_spec(nlohmann::json::parse(
                      R"({"kind":"constant_slope","slope":1,"interval":[0,1]})")),
                  InvalidInput);
  CHECK_THROWS_AS(parse_diagram_spec(nlohmann::json::parse(
                      R"({"kind":"rectangular","minima":[0,1],"maxima":[2]})")),
                  InvalidInput);
}
