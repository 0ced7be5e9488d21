#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "hookwalk/transition.hpp"
#include "test_support.hpp"

using namespace hookwalk;

constexpr double kPi = std::numbers::pi;

namespace {

double poly_ratio(const RectangularDiagram& r, double x) {
  double v = 1.0;
  for (double y : r.maxima()) v *= x - y;
  for (double m : r.minima()) v /= x - m;
  return v;
}

}  // namespace

TEST_CASE("exterior atoms") {
  auto triv = exterior_atoms(RectangularDiagram::trivial(0.7));
  CHECK(triv.locations == std::vector<double>{0.7});
  CHECK(triv.weights == std::vector<double>{1.0});

  auto two = exterior_atoms(RectangularDiagram({0, 2}, {1}));
  CHECK(two.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(0.5).epsilon(1e-15));

  auto three = exterior_atoms(RectangularDiagram({0, 2, 5}, {1, 3}));
  CHECK(std::abs(three.weights[0] - 3.0 / 10) < 1e-12);
  CHECK(std::abs(three.weights[1] - 1.0 / 6) < 1e-12);
  CHECK(std::abs(three.weights[2] - 8.0 / 15) < 1e-12);
  three.validate();
}

TEST_CASE("interior atoms") {
  auto one = interior_atoms(RectangularDiagram({0, 2}, {1}));
  CHECK(one.locations == std::vector<double>{1.0});
  CHECK(one.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  auto two = interior_atoms(RectangularDiagram({0, 2, 5}, {1, 3}));
  CHECK(std::abs(two.weights[0] - 0.4) < 1e-12);
  CHECK(std::abs(two.weights[1] - 0.6) < 1e-12);
  CHECK_THROWS_AS(interior_atoms(RectangularDiagram::trivial(0.0)),
                  InvalidInput);
}

TEST_CASE("atom weights, factored forms and rational identities") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto r = test_support::random_rectangular(rng, 1 + trial % 12);
    auto ext = exterior_atoms(r);
    auto ext2 = exterior_atoms_factored(r);
    double sum = 0.0;
    for (std::size_t k = 0; k < ext.size(); ++k) {
      sum += ext.weights[k];
      CHECK(ext.weights[k] ==
            doctest::Approx(ext2.weights[k]).epsilon(1e-12));
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    const double b = r.minima().back();
    for (double x : {b + 0.5, b + 1.0, b + 10.0, r.minima().front() - 2.0,
                     b + 100.0}) {
      double lhs = 0.0;
      for (std::size_t k = 0; k < ext.size(); ++k)
        lhs += ext.weights[k] / (x - ext.locations[k]);
      CHECK(std::abs(lhs - poly_ratio(r, x)) < 1e-10);
    }
    if (r.is_trivial()) continue;
    auto in = interior_atoms(r);
    auto in2 = interior_atoms_factored(r);
    sum = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) {
      sum += in.weights[k];
      CHECK(in.weights[k] == doctest::Approx(in2.weights[k]).epsilon(1e-12));
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    const double A = r.area();
    const double z = r.center();
    for (double x : {b + 1.0, b + 10.0, r.minima().front() - 3.0}) {
      double lhs = 0.0;
      for (std::size_t k = 0; k < in.size(); ++k)
        lhs += in.weights[k] / (x - in.locations[k]);
      lhs = -0.5 * A * lhs + x - z;
      const double rhs = 1.0 / poly_ratio(r, x);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("atomic measure validation") {
  AtomicMeasure m{{0, 1}, {0.5, 0.5}};
  m.validate();
  CHECK(m.cdf(0.5) == 0.5);
  CHECK_THROWS_AS((AtomicMeasure{{0, 1}, {0.5, 0.4}}.validate()), InvalidInput);
  CHECK_THROWS_AS((AtomicMeasure{{1, 0}, {0.5, 0.5}}.validate()), InvalidInput);
  CHECK_THROWS_AS((AtomicMeasure{{0, 1}, {1.5, -0.5}}.validate()),
                  InvalidInput);
}

TEST_CASE("constant-slope densities reduce to arcsine and semicircle") {
  Diagram d = SmoothDiagram::constant_slope(0.0, {-1, 1});
  TransitionDensity ext(d, WalkKind::exterior);
  TransitionDensity in(d, WalkKind::interior);
  CHECK(ext(0.0) == doctest::Approx(1 / kPi).epsilon(1e-14));
  CHECK(ext(0.6) == doctest::Approx(1 / (kPi * 0.8)).epsilon(1e-14));
  CHECK(in(0.0) == doctest::Approx(2 / kPi).epsilon(1e-14));
  CHECK(in(0.999999) < 1e-2);
  CHECK_THROWS_AS(ext(1.0), DomainError);
  CHECK_THROWS_AS(ext(-1.5), DomainError);

  // General slope: exponent integral vanishes, closed form holds exactly.
  const double c = 0.35;
  Diagram e = SmoothDiagram::constant_slope(c, {0, 3});
  TransitionDensity ec(e, WalkKind::exterior);
  for (double x : {0.01, 0.5, 1.7, 2.99}) {
    const double closed = std::cos(kPi * c / 2) / kPi *
                          std::pow(x, -(1 + c) / 2) *
                          std::pow(3 - x, -(1 - c) / 2);
    CHECK(ec(x) == doctest::Approx(closed).epsilon(1e-13));
  }
  CHECK(ec.mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("masses of the piecewise-linear and smooth test diagrams") {
  for (Diagram d : {Diagram(test_support::vee_half()),
                    Diagram(test_support::sine_profile())}) {
    TransitionDensity ext(d, WalkKind::exterior);
    TransitionDensity in(d, WalkKind::interior);
    CHECK(std::abs(ext.mass() - 1.0) < 1e-6);
    CHECK(std::abs(in.mass() - 1.0) < 1e-6);
    CHECK(ext.cdf(interval(d).b) == doctest::Approx(ext.mass()));
    CHECK(ext.cdf(interval(d).a) == 0.0);
  }
  TransitionDensity v(test_support::vee_half(), WalkKind::exterior);
  CHECK_THROWS_AS(v(0.0), DomainError);
  CHECK(v.pieces().size() == 2);
  // Symmetric diagram, symmetric density.
  CHECK(v(-0.7) == doctest::Approx(v(0.7)).epsilon(1e-14));
  CHECK(v.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("piecewise-linear density against a hand-assembled exponent") {
  auto pl = test_support::vee_half();
  TransitionDensity closed(pl, WalkKind::exterior);
  const double x = 0.8;
  const double w = 0.5;
  double D = 0.0;
  D += (-0.5 - w) * std::log((0.0 - x) / (-2.0 - x));
  const double direct = std::cos(kPi * w / 2) / kPi *
                        std::pow(x + 2, -(1 + w) / 2) *
                        std::pow(2 - x, -(1 - w) / 2) * std::exp(0.5 * D);
  CHECK(closed(x) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("rectangular diagrams have no density") {
  CHECK_THROWS_AS(TransitionDensity(RectangularDiagram({0, 2}, {1}),
                                    WalkKind::exterior),
                  InvalidInput);
}

TEST_CASE("density grids") {
  TransitionDensity rho(test_support::vee_half(), WalkKind::exterior);
  auto grid = graded_grid(rho, 512);
  CHECK(grid.size() == 512);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i - 1] < grid[i]);
  auto g = sample_density(rho, grid);
  CHECK(g.left_exponent == doctest::Approx(-0.25));
  CHECK(g.right_exponent == doctest::Approx(-0.25));
  CHECK(std::abs(g.mass() - 1.0) < 2e-2);
  CHECK(g.value(grid[10]) == g.values[10]);
  CHECK_THROWS_AS(g.value(2.0), DomainError);
  DensityGrid bad = g;
  bad.values[3] = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("unrotated densities for f(x) = x") {
  auto f = UnrotatedDiagram::polynomial({0, 1}, {0, 1});
  CHECK(exterior_density_unrotated(f, 0.5) ==
        doctest::Approx(2 / kPi).epsilon(1e-13));
  CHECK(exterior_density_unrotated(f, 0.9) ==
        doctest::Approx(1 / (kPi * 0.3)).epsilon(1e-13));
  // Interior: (8/pi) sqrt(x(1-x)) for area 1/2.
  CHECK(interior_density_unrotated(f, 0.3) ==
        doctest::Approx(8 / kPi * std::sqrt(0.21)).epsilon(1e-13));
  CHECK(UnrotatedDensity::interior(f).mass() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unrotated densities equal rotated densities times the Jacobian") {
  auto f = UnrotatedDiagram::polynomial({0, 1, 1}, {0, 1});
  Diagram r = rotate(f);
  TransitionDensity ext(r, WalkKind::exterior);
  TransitionDensity in(r, WalkKind::interior);
  auto uext = UnrotatedDensity::exterior(f);
  auto uin = UnrotatedDensity::interior(f);
  for (double x : {0.05, 0.3, 0.5, 0.72, 0.95}) {
    const double t = (x + f.evaluate(x)) / std::numbers::sqrt2;
    const double jac = (1 + f.derivative(x)) / std::numbers::sqrt2;
    CHECK(std::abs(uext(x) - ext(t) * jac) < 1e-8);
    CHECK(std::abs(uin(x) - in(t) * jac) < 1e-8);
  }
  CHECK(uext.mass() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(uin.mass() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("started density g_{s,t}") {
  auto f = UnrotatedDiagram::polynomial({0, 1}, {0, 1});
  auto g = UnrotatedDensity::started(f, 1.0, 0.0);
  CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g(0.5) == doctest::Approx(2 / kPi).epsilon(1e-12));
  CHECK_THROWS_AS(g(1.2), DomainError);
  CHECK_THROWS_AS(started_interior_density(f, 0.5, 0.1, 0.05), DomainError);
  CHECK_THROWS_AS(UnrotatedDensity::started(f, 0.5, 0.6), DomainError);

  // Reflection oracle: the started walk of f is the exterior walk of the
  // shifted inverse F(X) = f^{-1}(X + t) - f^{-1}(t) on [0, f(s) - t].
  auto q = UnrotatedDiagram::polynomial({0, 1, 1}, {0, 1});
  const double s = 0.9;
  const double t = 0.2;
  const double x0 = q.inverse(t);
  auto qp = std::make_shared<UnrotatedDiagram>(q);
  UnrotatedDiagram F(
      [=](double X) { return qp->inverse(X + t) - x0; },
      [=](double X) { return 1.0 / qp->derivative(qp->inverse(X + t)); },
      {0.0, q.evaluate(s) - t}, {1.0 / 3.0, 1.0},
      [=](double X) {
        const double u = qp->inverse(X + t);
        const double d = qp->derivative(u);
        return -qp->second_derivative(u) / (d * d * d);
      });
  auto gst = UnrotatedDensity::started(q, s, t);
  auto ef = UnrotatedDensity::exterior(F);
  for (double x : {0.3, 0.5, 0.7, 0.85}) {
    const double X = q.evaluate(x) - t;
    CHECK(gst(x) == doctest::Approx(ef(X) * q.derivative(x)).epsilon(1e-7));
  }
  CHECK(gst.mass() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("started-walk identities for f(x) = x") {
  auto f = UnrotatedDiagram::polynomial({0, 1}, {0, 1});
  auto t9 = started_self_consistency(f, 1.0, 0.0, 0.5);
  CHECK(t9.residual() < 1e-3);
  auto t9b = started_self_consistency(f, 0.9, 0.2, 0.5);
  CHECK(t9b.residual() < 1e-3);
  auto t10 = started_mixture(f, 0.5);
  CHECK(t10.residual() < 1e-3);
}

TEST_CASE("started-walk identities for a curved diagram") {
  auto q = UnrotatedDiagram::polynomial({0, 1, 1}, {0, 1});
  CHECK(started_self_consistency(q, 0.9, 0.3, 0.6).residual() < 1e-6);
  CHECK(started_mixture(q, 0.4).residual() < 1e-6);
}

TEST_CASE("Cauchy identities") {
  RectangularDiagram r({0, 2}, {1});
  auto e = cauchy_identity(r, 3.0, WalkKind::exterior);
  CHECK(e.lhs == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(e.rhs == doctest::Approx(2.0 / 3).epsilon(1e-15));
  auto i = cauchy_identity(r, 3.0, WalkKind::interior);
  CHECK(i.residual() < 1e-14);

  auto triv = cauchy_identity(RectangularDiagram::trivial(0.0), 5.0,
                              WalkKind::exterior);
  CHECK(triv.lhs == doctest::Approx(0.2));
  CHECK(triv.rhs == doctest::Approx(0.2));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto rr = test_support::random_rectangular(rng, 2 + trial % 6);
    const double x = std::max(rr.minima().back(), 0.0) + 1.5;
    CHECK(cauchy_identity(rr, x, WalkKind::exterior).residual() < 1e-12);
    CHECK(cauchy_identity(rr, x, WalkKind::interior).residual() < 1e-10);
    const double xl = std::min(rr.minima().front(), 0.0) - 0.7;
    CHECK(cauchy_identity(rr, xl, WalkKind::exterior).residual() < 1e-12);
  }

  for (Diagram d : {Diagram(SmoothDiagram::constant_slope(0.0, {-1, 1})),
                    Diagram(SmoothDiagram::constant_slope(0.3, {0.5, 2.5})),
                    Diagram(test_support::vee_half()),
                    Diagram(test_support::sine_profile())}) {
    const double x = std::max(interval(d).b, 0.0) + 1.0;
    CHECK(cauchy_identity(d, x, WalkKind::exterior).residual() < 1e-6);
    CHECK(cauchy_identity(d, x, WalkKind::interior).residual() < 1e-6);
  }
  CHECK_THROWS_AS(cauchy_identity(r, 1.0, WalkKind::exterior), DomainError);
}
