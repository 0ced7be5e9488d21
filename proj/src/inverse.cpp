#include "hookwalk/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hookwalk {

namespace {

using numerics::CompensatedSum;
using numerics::QuadratureConfig;

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Root of a function continuous on the open gap (0, len) of a local variable,
// +inf-like at one end and of the other sign at the other. `positive_at_lo`
// gives the sign next to 0. The bracket ends are pulled toward the gap ends
// until the signs are right.
double root_in_gap(const std::function<double(double)>& g, double len,
                   bool positive_at_lo, double scale) {
  auto right_sign = [&](double v, bool want_positive) {
    return want_positive ? v > 0.0 : v < 0.0;
  };
  double lo = 0.5 * len;
  for (int i = 0; i < 80 && !right_sign(g(lo), positive_at_lo); ++i)
    lo *= 1.0 / 16.0;
  double gap_hi = 0.5 * len;
  for (int i = 0; i < 80 && !right_sign(g(len - gap_hi), !positive_at_lo); ++i)
    gap_hi *= 1.0 / 16.0;
  const double hi = len - gap_hi;
  if (!(lo < hi)) return lo;
  return numerics::find_root_bracketed(g, lo, hi,
                                       4.0 * kEps * std::max(len, scale));
}

// log((r - x) / (l - x)) and (1 - log(...) / rho) for rho = (r - l) / (l - x),
// each accurate when x is far from the cell.
struct CellLogs {
  double ell;
  double ratio;
};

CellLogs cell_logs(double l, double r, double x) {
  const double rho = (r - l) / (l - x);
  CellLogs c;
  if (std::abs(rho) < 0.5)
    c.ell = std::log1p(rho);
  else
    c.ell = std::log((r - x) / (l - x));
  if (std::abs(rho) < 1e-3) {
    // 1 - log1p(rho)/rho = rho/2 - rho^2/3 + rho^3/4 - ...
    c.ratio = rho * (0.5 - rho * (1.0 / 3.0 - rho * (0.25 - rho * 0.2)));
  } else {
    c.ratio = 1.0 - c.ell / rho;
  }
  return c;
}

// Integral of (g(u) - gx)/(u - x) over a power-law tail v0 * (d/len)^alpha,
// d the distance of u from the outer end. `outer_left` when the tail lies
// to the left of its inner end; x is at or beyond the inner end.
double tail_quotient(double v0, double alpha, double len, double beyond,
                     double gx, bool outer_left, const QuadratureConfig& cfg) {
  if (len <= 0.0) return 0.0;
  auto integrand = [&](double, double from_lo, double to_hi) {
    const double outer = outer_left ? from_lo : to_hi;
    const double inner = outer_left ? to_hi : from_lo;
    // Signed u - x: negative for a left tail.
    const double dist = inner + beyond;
    // At the inner end the difference cancels; expand it there.
    const double diff =
        beyond == 0.0 && gx == v0 && inner < outer
            ? v0 * std::expm1(alpha * std::log1p(-inner / len))
            : v0 * std::pow(outer / len, alpha) - gx;
    return outer_left ? diff / (-dist) : diff / dist;
  };
  const double ea = outer_left ? std::min(alpha, 0.0) : 0.0;
  const double eb = outer_left ? 0.0 : std::min(alpha, 0.0);
  return numerics::integrate_endpoint_singular(integrand, 0.0, len, ea, eb,
                                               cfg);
}

double bracket_term(const Interval& I, double x) {
  return std::log((I.b - x) / (x - I.a));
}

double exterior_slope(double bracket) {
  return -1.0 + (2.0 / kPi) * numerics::arccot(bracket / kPi);
}

double interior_slope(double bracket) {
  return 1.0 - (2.0 / kPi) * numerics::arccot(bracket / kPi);
}

double positive_value(double v) {
  if (!(v > 0.0))
    throw DomainError("density must be strictly positive at the recovery point");
  return v;
}

}  // namespace

void InteriorInverseParams::validate() const {
  if (!std::isfinite(center)) throw InvalidInput("center must be finite");
  if (!(area > 0.0) || !std::isfinite(area))
    throw InvalidInput("interior inversion needs area A > 0");
}

RectangularDiagram rect_from_exterior_atoms(const AtomicMeasure& m) {
  m.validate();
  const auto& x = m.locations;
  const auto& w = m.weights;
  const std::size_t n = x.size();
  std::vector<double> maxima;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double len = x[k + 1] - x[k];
    // x = x_k + t; distances to atoms right of the gap measured from x_{k+1}.
    auto f = [&](double t) {
      CompensatedSum s;
      for (std::size_t j = 0; j <= k; ++j) s.add(w[j] / ((x[k] - x[j]) + t));
      for (std::size_t j = k + 1; j < n; ++j)
        s.add(w[j] / ((x[k + 1] - x[j]) - (len - t)));
      return s.value();
    };
    const double scale = std::max(std::abs(x[k]), std::abs(x[k + 1]));
    maxima.push_back(x[k] + root_in_gap(f, len, true, scale));
  }
  return RectangularDiagram(x, std::move(maxima));
}

RectangularDiagram rect_from_interior_atoms(const AtomicMeasure& m,
                                            const InteriorInverseParams& p) {
  m.validate();
  p.validate();
  const auto& y = m.locations;
  const auto& w = m.weights;
  const std::size_t n = y.size();
  const double half_a = 0.5 * p.area;
  const double z = p.center;
  // G(x) = -(A/2) sum w_j / (x - y_j) + x - z with x = base + t and the
  // distances x - y_j = (base - y_j) + t.
  auto make = [&](double base) {
    return [&, base](double t) {
      CompensatedSum s;
      for (std::size_t j = 0; j < n; ++j) s.add(w[j] / ((base - y[j]) + t));
      return -half_a * s.value() + (base - z) + t;
    };
  };
  std::vector<double> minima;
  // Left of y_1 the sum is bounded by 1 / (x - y_1), giving the outer root
  // bracket [c, y_1).
  const double c = 0.5 * (y.front() + z -
                          std::sqrt((y.front() - z) * (y.front() - z) + 4.0 * half_a));
  const double scale_lo = std::max(std::abs(c), std::abs(y.front()));
  {
    const double len = (y.front() - c) * (1.0 + 1e-12);
    const double base = y.front() - len;
    auto g = make(base);
    // Near base (t = 0) G < 0; next to y_1 G -> +inf.
    auto neg = [&](double t) { return -g(t); };
    double root;
    if (g(0.0) >= 0.0)
      root = 0.0;
    else
      root = root_in_gap(neg, len, true, scale_lo);
    minima.push_back(base + root);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double len = y[k + 1] - y[k];
    const double yk = y[k];
    const double yk1 = y[k + 1];
    auto g = [&](double t) {
      CompensatedSum s;
      for (std::size_t j = 0; j <= k; ++j) s.add(w[j] / ((yk - y[j]) + t));
      for (std::size_t j = k + 1; j < n; ++j)
        s.add(w[j] / ((yk1 - y[j]) - (len - t)));
      return -half_a * s.value() + (yk - z) + t;
    };
    auto neg = [&](double t) { return -g(t); };
    const double scale = std::max(std::abs(yk), std::abs(yk1));
    minima.push_back(yk + root_in_gap(neg, len, true, scale));
  }
  {
    const double d = 0.5 * (y.back() + z +
                            std::sqrt((y.back() - z) * (y.back() - z) + 4.0 * half_a));
    const double len = (d - y.back()) * (1.0 + 1e-12);
    auto g = make(y.back());
    const double scale = std::max(std::abs(d), std::abs(y.back()));
    double root;
    if (g(len) <= 0.0)
      root = len;
    else
      root = root_in_gap([&](double t) { return -g(t); }, len, true, scale);
    minima.push_back(y.back() + root);
  }
  return RectangularDiagram(std::move(minima), y);
}

double grid_quotient_integral(const DensityGrid& g, double x,
                              const QuadratureConfig& cfg) {
  g.validate();
  const auto& u = g.grid;
  const auto& v = g.values;
  if (!(x >= u.front() && x <= u.back()))
    throw DomainError("recovery point must lie within the density grid");
  const double gx = g.value(x);
  CompensatedSum s;
  // Linear cell [l, r] not containing x in its interior.
  auto cell = [&](double l, double gl, double r, double gr) {
    if (l == x || r == x) {
      s.add(gr - gl);
      return;
    }
    const CellLogs c = cell_logs(l, r, x);
    s.add((gl - gx) * c.ell + (gr - gl) * c.ratio);
  };
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (u[i] < x && x < u[i + 1]) {
      cell(u[i], v[i], x, gx);
      cell(x, gx, u[i + 1], v[i + 1]);
    } else {
      cell(u[i], v[i], u[i + 1], v[i + 1]);
    }
  }
  s.add(tail_quotient(v.front(), g.left_exponent, u.front() - g.interval.a,
                      x - u.front(), gx, true, cfg));
  s.add(tail_quotient(v.back(), g.right_exponent, g.interval.b - u.back(),
                      u.back() - x, gx, false, cfg));
  return s.value();
}

double slope_from_exterior_density(const DensityGrid& g, double x,
                                   const QuadratureConfig& cfg) {
  if (g.kind != WalkKind::exterior)
    throw InvalidInput("exterior recovery needs an exterior density");
  const double gx = positive_value(g.value(x));
  const double H = grid_quotient_integral(g, x, cfg);
  return exterior_slope(bracket_term(g.interval, x) + H / gx);
}

double slope_from_interior_density(const DensityGrid& h,
                                   const InteriorInverseParams& p, double x,
                                   const QuadratureConfig& cfg) {
  if (h.kind != WalkKind::interior)
    throw InvalidInput("interior recovery needs an interior density");
  p.validate();
  const double hx = positive_value(h.value(x));
  const double H = grid_quotient_integral(h, x, cfg);
  return interior_slope(bracket_term(h.interval, x) +
                        (H + 2.0 * (x - p.center) / p.area) / hx);
}

double slope_from_exterior_density(const numerics::StepFunction& g, double x) {
  g.validate();
  const Interval I{g.lo(), g.hi()};
  if (!I.contains_open(x))
    throw DomainError("recovery point must lie inside the step support");
  const double gx = positive_value(g(x));
  return exterior_slope(bracket_term(I, x) +
                        numerics::difference_quotient_integral_step(g, x) / gx);
}

double slope_from_interior_density(const numerics::StepFunction& h,
                                   const InteriorInverseParams& p, double x) {
  h.validate();
  p.validate();
  const Interval I{h.lo(), h.hi()};
  if (!I.contains_open(x))
    throw DomainError("recovery point must lie inside the step support");
  const double hx = positive_value(h(x));
  const double H = numerics::difference_quotient_integral_step(h, x);
  return interior_slope(bracket_term(I, x) +
                        (H + 2.0 * (x - p.center) / p.area) / hx);
}

void SlopeFunction::validate() const {
  interval.validate();
  if (grid.empty() || grid.size() != values.size())
    throw InvalidInput("slope function needs matching, non-empty grid and values");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!interval.contains_open(grid[i]))
      throw InvalidInput("slope grid points must lie in the open interval");
    if (i > 0 && !(grid[i - 1] < grid[i]))
      throw InvalidInput("slope grid points must be strictly increasing");
    if (!(std::abs(values[i]) < 1.0))
      throw InvalidInput("slopes must lie strictly inside (-1, 1)");
  }
}

SlopeFunction recover_slopes(const DensityGrid& g, const QuadratureConfig& cfg) {
  SlopeFunction s{g.grid, {}, g.interval};
  s.values.reserve(g.grid.size());
  for (double x : g.grid) s.values.push_back(slope_from_exterior_density(g, x, cfg));
  s.validate();
  return s;
}

SlopeFunction recover_slopes(const DensityGrid& h, const InteriorInverseParams& p,
                             const QuadratureConfig& cfg) {
  SlopeFunction s{h.grid, {}, h.interval};
  s.values.reserve(h.grid.size());
  for (double x : h.grid)
    s.values.push_back(slope_from_interior_density(h, p, x, cfg));
  s.validate();
  return s;
}

PiecewiseLinearDiagram diagram_from_slopes(const SlopeFunction& s) {
  s.validate();
  const Interval& I = s.interval;
  std::vector<double> knots{I.a};
  for (std::size_t i = 0; i + 1 < s.grid.size(); ++i)
    knots.push_back(0.5 * (s.grid[i] + s.grid[i + 1]));
  knots.push_back(I.b);
  CompensatedSum total;
  for (std::size_t i = 0; i < s.values.size(); ++i)
    total.add(s.values[i] * (knots[i + 1] - knots[i]));
  const double start = 0.5 * (I.length() - total.value());
  std::vector<std::pair<double, double>> pts{{I.a, start}};
  CompensatedSum run;
  run.add(start);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    run.add(s.values[i] * (knots[i + 1] - knots[i]));
    pts.emplace_back(knots[i + 1], run.value());
  }
  // Pin the last value onto the hinge so rounding in the running sum cannot
  // leave a residual.
  pts.back().second = I.b - I.a - start;
  return PiecewiseLinearDiagram(std::move(pts));
}

}  // namespace hookwalk
