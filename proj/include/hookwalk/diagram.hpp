#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "hookwalk/errors.hpp"

namespace hookwalk {

struct Interval {
  double a = 0.0;
  double b = 1.0;

  void validate() const;
  double length() const { return b - a; }
  bool contains(double x) const { return a <= x && x <= b; }
  bool contains_open(double x) const { return a < x && x < b; }
};

//! Rectangular diagram given by interlacing local minima x_1 < y_1 < ... <
//! y_{n-1} < x_n. Slopes are exactly +-1 between consecutive extrema and the
//! diagram coincides with |x - z| outside [x_1, x_n].
class RectangularDiagram {
 public:
  //! Without an interval the support is padded on both sides so the dual
  //! domain of the exterior walk does not degenerate.
  RectangularDiagram(std::vector<double> minima, std::vector<double> maxima,
                     std::optional<Interval> interval = std::nullopt);

  static RectangularDiagram trivial(double center,
                                    std::optional<Interval> interval = {});

  const std::vector<double>& minima() const { return minima_; }
  const std::vector<double>& maxima() const { return maxima_; }
  const Interval& interval() const { return interval_; }
  bool is_trivial() const { return maxima_.empty(); }

  //! sum |x - x_i| - sum |x - y_j|, exact for every real x.
  double evaluate(double x) const;
  double slope_left(double x) const;
  double slope_right(double x) const;
  double center() const;
  double area() const;
  //! Minima and maxima merged in increasing order.
  std::vector<double> breakpoints() const;

  //! Interval padded around [x_1, x_n] used when none is supplied.
  static Interval default_interval(std::span<const double> minima);

 private:
  std::vector<double> minima_;
  std::vector<double> maxima_;
  Interval interval_;
};

//! Piecewise-linear diagram with every slope strictly inside (-1, 1).
class PiecewiseLinearDiagram {
 public:
  explicit PiecewiseLinearDiagram(
      std::vector<std::pair<double, double>> breakpoints);

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  //! slopes()[k] holds on [knots()[k], knots()[k+1]].
  const std::vector<double>& slopes() const { return slopes_; }
  const Interval& interval() const { return interval_; }
  std::size_t segment_count() const { return slopes_.size(); }
  //! Segment containing x; knots resolve to the segment on their left.
  std::size_t segment_index(double x) const;

  double evaluate(double x) const;
  double slope_left(double x) const;
  double slope_right(double x) const;
  double center() const { return interval_.a + values_.front(); }
  double area() const;
  //! Interior knots (where the slope jumps).
  std::vector<double> breakpoints() const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  Interval interval_;
};

//! Diagram of class S: twice differentiable with slopes in [c1, c2], -1 < c1
//! <= c2 < 1. The curvature function is optional and only sharpens the
//! removable singularity in difference-quotient integrals.
class SmoothDiagram {
 public:
  using Fn = std::function<double(double)>;

  SmoothDiagram(Fn omega, Fn slope, Interval interval,
                std::pair<double, double> slope_bounds, Fn curvature = {});

  //! omega(x) = omega(a) + c (x - a) with omega(a) fixed by the hinge.
  static SmoothDiagram constant_slope(double c, Interval interval);

  double evaluate(double x) const;
  double slope(double x) const;
  double slope_left(double x) const { return slope(x); }
  double slope_right(double x) const { return slope(x); }
  const Fn& slope_function() const { return slope_; }
  const Fn& curvature_function() const { return curvature_; }
  const Interval& interval() const { return interval_; }
  std::pair<double, double> slope_bounds() const { return bounds_; }
  double center() const { return center_; }
  double area() const;
  std::vector<double> breakpoints() const { return {}; }

 private:
  Fn omega_;
  Fn slope_;
  Fn curvature_;
  Interval interval_;
  std::pair<double, double> bounds_;
  double center_;
};

//! Increasing function f on [a, b] with f(a) = 0 and m <= f' <= M, 0 < m.
class UnrotatedDiagram {
 public:
  using Fn = std::function<double(double)>;

  UnrotatedDiagram(Fn f, Fn derivative, Interval interval,
                   std::pair<double, double> derivative_bounds,
                   Fn second_derivative = {});

  //! f(x) = sum coeffs[k] x^k (ascending coefficients).
  static UnrotatedDiagram polynomial(std::vector<double> coeffs,
                                     Interval interval);

  double evaluate(double x) const { return f_(x); }
  double derivative(double x) const { return df_(x); }
  bool has_second_derivative() const { return static_cast<bool>(d2f_); }
  double second_derivative(double x) const { return d2f_(x); }
  //! (f(u) - f(x)) / (u - x), f'(midpoint) when u and x nearly coincide.
  double slope_between(double u, double x) const;
  //! f^{-1}(y) for y in [0, f(b)].
  double inverse(double y) const;
  const Interval& interval() const { return interval_; }
  std::pair<double, double> derivative_bounds() const { return bounds_; }
  double top() const { return top_; }
  //! Integral of f over [a, b].
  double area() const;

 private:
  Fn f_;
  Fn df_;
  Fn d2f_;
  Interval interval_;
  std::pair<double, double> bounds_;
  double top_;
};

using Diagram =
    std::variant<RectangularDiagram, PiecewiseLinearDiagram, SmoothDiagram>;

double evaluate(const Diagram& d, double x);
double center(const Diagram& d);
double area(const Diagram& d);
Interval interval(const Diagram& d);

//! Rotation t = (x + f(x)) / sqrt 2, omega(t) = (f(x) + b - x) / sqrt 2 onto
//! [a / sqrt 2, (b + f(b)) / sqrt 2].
SmoothDiagram rotate(const UnrotatedDiagram& f);
//! Inverse of rotate: x = (t - omega(t) + z) / sqrt 2, f = (t + omega(t) - z)
//! / sqrt 2 on [sqrt 2 A, sqrt 2 z].
UnrotatedDiagram unrotate(const SmoothDiagram& d);

//! Rectangular diagram whose minima are the n-equipartition points of every
//! linearity segment of d, interpolating d there.
RectangularDiagram rectangular_approximation(const PiecewiseLinearDiagram& d,
                                             int n);

//! Piecewise-linear interpolant of any diagram on `segments` equal cells.
PiecewiseLinearDiagram piecewise_linear_interpolant(const Diagram& d,
                                                    int segments);

//! Hinge residual |(a + omega(a)) - (b - omega(b))|.
double hinge_residual(const Diagram& d);

}  // namespace hookwalk
