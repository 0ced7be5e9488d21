#include "hookwalk/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "hookwalk/numerics.hpp"

namespace hookwalk {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kHingeTol = 1e-12;
constexpr int kProbes = 257;

bool finite(double v) { return std::isfinite(v); }

// Root of the strictly increasing g on [lo, hi] with g' = dg: Newton steps
// kept inside a shrinking bracket, bisection when a step escapes it.
double solve_increasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double lo,
                        double hi, double guess) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo >= 0.0) return lo;
  if (ghi <= 0.0) return hi;
  double x = std::clamp(guess, lo, hi);
  const double scale = std::abs(lo) + std::abs(hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (gx < 0.0)
      lo = x;
    else
      hi = x;
    const double slope = dg(x);
    double next = x - gx / slope;
    if (!(next > lo && next < hi) || !finite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * scale || hi - lo <= 1e-16 * scale)
      return next;
    x = next;
  }
  return x;
}

void check_finite(std::initializer_list<double> vs, const char* what) {
  for (double v : vs)
    if (!finite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

}  // namespace

void Interval::validate() const {
  check_finite({a, b}, "interval endpoints");
  if (!(a < b)) throw InvalidInput("interval needs a < b");
}

// ---------------------------------------------------------------------------

Interval RectangularDiagram::default_interval(std::span<const double> minima) {
  if (minima.empty()) throw InvalidInput("rectangular diagram needs minima");
  const double span = minima.back() - minima.front();
  const double pad = std::max(1.0, 0.5 * span);
  return {minima.front() - pad, minima.back() + pad};
}

RectangularDiagram::RectangularDiagram(std::vector<double> minima,
                                       std::vector<double> maxima,
                                       std::optional<Interval> interval)
    : minima_(std::move(minima)), maxima_(std::move(maxima)) {
  if (minima_.empty())
    throw InvalidInput("rectangular diagram needs at least one minimum");
  if (maxima_.size() + 1 != minima_.size())
    throw InvalidInput("rectangular diagram needs exactly n-1 maxima");
  for (double v : minima_) check_finite({v}, "minima");
  for (double v : maxima_) check_finite({v}, "maxima");
  for (std::size_t i = 0; i < maxima_.size(); ++i) {
    if (!(minima_[i] < maxima_[i] && maxima_[i] < minima_[i + 1]))
      throw InvalidInput("minima and maxima must strictly interlace");
  }
  interval_ = interval ? *interval : default_interval(minima_);
  interval_.validate();
  if (minima_.front() < interval_.a || minima_.back() > interval_.b)
    throw InvalidInput("rectangular diagram extrema must lie in the interval");
}

RectangularDiagram RectangularDiagram::trivial(double center,
                                               std::optional<Interval> interval) {
  return RectangularDiagram({center}, {}, interval);
}

double RectangularDiagram::evaluate(double x) const {
  double s = 0.0;
  for (double v : minima_) s += std::abs(x - v);
  for (double v : maxima_) s -= std::abs(x - v);
  return s;
}

double RectangularDiagram::slope_right(double x) const {
  double s = 0.0;
  for (double v : minima_) s += x >= v ? 1.0 : -1.0;
  for (double v : maxima_) s -= x >= v ? 1.0 : -1.0;
  return s;
}

double RectangularDiagram::slope_left(double x) const {
  double s = 0.0;
  for (double v : minima_) s += x > v ? 1.0 : -1.0;
  for (double v : maxima_) s -= x > v ? 1.0 : -1.0;
  return s;
}

double RectangularDiagram::center() const {
  numerics::CompensatedSum s;
  for (double v : minima_) s.add(v);
  for (double v : maxima_) s.add(-v);
  return s.value();
}

double RectangularDiagram::area() const {
  // 2 sum_k (x_{k+1} - y_k) sum_{j<=k} (y_j - x_j)
  numerics::CompensatedSum total;
  double prefix = 0.0;
  for (std::size_t k = 0; k < maxima_.size(); ++k) {
    prefix += maxima_[k] - minima_[k];
    total.add(prefix * (minima_[k + 1] - maxima_[k]));
  }
  return 2.0 * total.value();
}

std::vector<double> RectangularDiagram::breakpoints() const {
  std::vector<double> out;
  out.reserve(minima_.size() + maxima_.size());
  for (std::size_t i = 0; i < minima_.size(); ++i) {
    out.push_back(minima_[i]);
    if (i < maxima_.size()) out.push_back(maxima_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

PiecewiseLinearDiagram::PiecewiseLinearDiagram(
    std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.size() < 2)
    throw InvalidInput("piecewise-linear diagram needs at least two breakpoints");
  for (auto [t, v] : breakpoints) {
    check_finite({t, v}, "breakpoints");
    knots_.push_back(t);
    values_.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (!(knots_[i] < knots_[i + 1]))
      throw InvalidInput("breakpoint abscissae must be strictly increasing");
    const double d =
        (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
    if (!(std::abs(d) < 1.0))
      throw InvalidInput("segment slopes must lie strictly inside (-1, 1)");
    slopes_.push_back(d);
  }
  interval_ = {knots_.front(), knots_.back()};
  const double hinge = std::abs((interval_.a + values_.front()) -
                                (interval_.b - values_.back()));
  if (hinge > kHingeTol)
    throw InvalidInput("hinge condition a + w(a) = b - w(b) violated by " +
                       std::to_string(hinge));
  const double z = center();
  for (std::size_t i = 0; i < knots_.size(); ++i)
    if (values_[i] < std::abs(knots_[i] - z) - kHingeTol)
      throw InvalidInput("diagram dips below |x - z| at a breakpoint");
}

std::size_t PiecewiseLinearDiagram::segment_index(double x) const {
  auto it = std::lower_bound(knots_.begin() + 1, knots_.end(), x);
  if (it == knots_.end()) --it;
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

double PiecewiseLinearDiagram::evaluate(double x) const {
  if (x <= interval_.a || x >= interval_.b) return std::abs(x - center());
  const std::size_t k = segment_index(x);
  return values_[k] + slopes_[k] * (x - knots_[k]);
}

double PiecewiseLinearDiagram::slope_left(double x) const {
  if (x <= interval_.a) return x <= center() ? -1.0 : 1.0;
  if (x > interval_.b) return 1.0;
  return slopes_[segment_index(x)];
}

double PiecewiseLinearDiagram::slope_right(double x) const {
  if (x < interval_.a) return -1.0;
  if (x >= interval_.b) return x >= center() ? 1.0 : -1.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  return slopes_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

double PiecewiseLinearDiagram::area() const {
  numerics::CompensatedSum s;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
    s.add(0.5 * (values_[i] + values_[i + 1]) * (knots_[i + 1] - knots_[i]));
  const double z = center();
  const double l = z - interval_.a;
  const double r = interval_.b - z;
  s.add(-0.5 * (l * l + r * r));
  return s.value();
}

std::vector<double> PiecewiseLinearDiagram::breakpoints() const {
  return {knots_.begin() + 1, knots_.end() - 1};
}

// ---------------------------------------------------------------------------

SmoothDiagram::SmoothDiagram(Fn omega, Fn slope, Interval interval,
                             std::pair<double, double> slope_bounds,
                             Fn curvature)
    : omega_(std::move(omega)),
      slope_(std::move(slope)),
      curvature_(std::move(curvature)),
      interval_(interval),
      bounds_(slope_bounds) {
  if (!omega_ || !slope_)
    throw InvalidInput("smooth diagram needs evaluator and derivative");
  interval_.validate();
  const auto [c1, c2] = bounds_;
  check_finite({c1, c2}, "slope bounds");
  if (!(-1.0 < c1 && c1 <= c2 && c2 < 1.0))
    throw InvalidInput("slope bounds must satisfy -1 < c1 <= c2 < 1");
  const double a = interval_.a;
  const double b = interval_.b;
  for (int i = 0; i < kProbes; ++i) {
    const double x = a + (b - a) * i / (kProbes - 1);
    const double d = slope_(x);
    if (!(d >= c1 - kHingeTol && d <= c2 + kHingeTol))
      throw InvalidInput("derivative leaves the declared slope bounds at x = " +
                         std::to_string(x));
  }
  const double wa = omega_(a);
  const double wb = omega_(b);
  check_finite({wa, wb}, "diagram endpoint values");
  const double hinge = std::abs((a + wa) - (b - wb));
  if (hinge > kHingeTol)
    throw InvalidInput("hinge condition a + w(a) = b - w(b) violated by " +
                       std::to_string(hinge));
  center_ = a + wa;
}

SmoothDiagram SmoothDiagram::constant_slope(double c, Interval interval) {
  interval.validate();
  if (!(std::abs(c) < 1.0))
    throw InvalidInput("constant slope must lie strictly inside (-1, 1)");
  const double a = interval.a;
  const double wa = 0.5 * (interval.b - interval.a) * (1.0 - c);
  return SmoothDiagram([=](double x) { return wa + c * (x - a); },
                       [=](double) { return c; }, interval, {c, c},
                       [](double) { return 0.0; });
}

double SmoothDiagram::evaluate(double x) const {
  if (x <= interval_.a || x >= interval_.b) {
    if (x == interval_.a || x == interval_.b) return omega_(x);
    return std::abs(x - center_);
  }
  return omega_(x);
}

double SmoothDiagram::slope(double x) const {
  if (x < interval_.a) return -1.0;
  if (x > interval_.b) return 1.0;
  return slope_(x);
}

double SmoothDiagram::area() const {
  auto excess = [this](double x) { return omega_(x) - std::abs(x - center_); };
  double s = 0.0;
  if (center_ > interval_.a)
    s += numerics::integrate(excess, interval_.a, center_);
  if (center_ < interval_.b)
    s += numerics::integrate(excess, center_, interval_.b);
  return s;
}

// ---------------------------------------------------------------------------

UnrotatedDiagram::UnrotatedDiagram(Fn f, Fn derivative, Interval interval,
                                   std::pair<double, double> derivative_bounds,
                                   Fn second_derivative)
    : f_(std::move(f)),
      df_(std::move(derivative)),
      d2f_(std::move(second_derivative)),
      interval_(interval),
      bounds_(derivative_bounds) {
  if (!f_ || !df_)
    throw InvalidInput("unrotated diagram needs evaluator and derivative");
  interval_.validate();
  const auto [m, M] = bounds_;
  check_finite({m, M}, "derivative bounds");
  if (!(0.0 < m && m <= M))
    throw InvalidInput("derivative bounds must satisfy 0 < m <= M < inf");
  const double a = interval_.a;
  const double b = interval_.b;
  if (std::abs(f_(a)) > kHingeTol)
    throw InvalidInput("unrotated diagram must satisfy f(a) = 0");
  const double slack = kHingeTol * std::max(1.0, M);
  for (int i = 0; i < kProbes; ++i) {
    const double x = a + (b - a) * i / (kProbes - 1);
    const double d = df_(x);
    if (!(d >= m - slack && d <= M + slack))
      throw InvalidInput("f' leaves the declared derivative bounds at x = " +
                         std::to_string(x));
  }
  top_ = f_(b);
  check_finite({top_}, "f(b)");
}

UnrotatedDiagram UnrotatedDiagram::polynomial(std::vector<double> coeffs,
                                              Interval interval) {
  interval.validate();
  if (coeffs.empty()) throw InvalidInput("polynomial needs coefficients");
  for (double c : coeffs) check_finite({c}, "coefficients");
  std::vector<double> d1;
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    d1.push_back(coeffs[k] * static_cast<double>(k));
  std::vector<double> d2;
  for (std::size_t k = 1; k < d1.size(); ++k)
    d2.push_back(d1[k] * static_cast<double>(k));
  auto horner = [](const std::vector<double>& c) {
    return [c](double x) {
      double s = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
      return s;
    };
  };
  auto df = horner(d1);
  double m = df(interval.a);
  double M = m;
  constexpr int kBoundProbes = 4097;
  for (int i = 1; i < kBoundProbes; ++i) {
    const double d = df(interval.a + interval.length() * i / (kBoundProbes - 1));
    m = std::min(m, d);
    M = std::max(M, d);
  }
  if (!(m > 0.0))
    throw InvalidInput("polynomial diagram needs f' > 0 on the interval");
  return UnrotatedDiagram(horner(coeffs), df, interval, {m, M}, horner(d2));
}

double UnrotatedDiagram::slope_between(double u, double x) const {
  if (std::abs(u - x) > 1e-5 * interval_.length())
    return (f_(u) - f_(x)) / (u - x);
  return df_(0.5 * (u + x));
}

double UnrotatedDiagram::inverse(double y) const {
  if (y <= 0.0) return interval_.a;
  if (y >= top_) return interval_.b;
  const double guess =
      interval_.a + interval_.length() * (y / top_);
  return solve_increasing([&](double x) { return f_(x) - y; }, df_,
                          interval_.a, interval_.b, guess);
}

double UnrotatedDiagram::area() const {
  return numerics::integrate(f_, interval_.a, interval_.b);
}

// ---------------------------------------------------------------------------

double evaluate(const Diagram& d, double x) {
  return std::visit([x](const auto& v) { return v.evaluate(x); }, d);
}

double center(const Diagram& d) {
  return std::visit([](const auto& v) { return v.center(); }, d);
}

double area(const Diagram& d) {
  return std::visit([](const auto& v) { return v.area(); }, d);
}

Interval interval(const Diagram& d) {
  return std::visit([](const auto& v) { return v.interval(); }, d);
}

double hinge_residual(const Diagram& d) {
  const Interval I = interval(d);
  return std::abs((I.a + evaluate(d, I.a)) - (I.b - evaluate(d, I.b)));
}

SmoothDiagram rotate(const UnrotatedDiagram& f) {
  auto src = std::make_shared<const UnrotatedDiagram>(f);
  const double a = f.interval().a;
  const double b = f.interval().b;
  const Interval I{a / kSqrt2, (b + f.top()) / kSqrt2};
  auto x_of_t = [src, I, a, b](double t) {
    if (t <= I.a) return a;
    if (t >= I.b) return b;
    const double target = kSqrt2 * t;
    const double guess = a + (b - a) * (t - I.a) / (I.b - I.a);
    return solve_increasing(
        [&](double x) { return x + src->evaluate(x) - target; },
        [&](double x) { return 1.0 + src->derivative(x); }, a, b, guess);
  };
  auto omega = [src, x_of_t, b](double t) {
    const double x = x_of_t(t);
    return (src->evaluate(x) + b - x) / kSqrt2;
  };
  auto slope = [src, x_of_t](double t) {
    return 1.0 - 2.0 / (1.0 + src->derivative(x_of_t(t)));
  };
  SmoothDiagram::Fn curvature;
  if (f.has_second_derivative()) {
    curvature = [src, x_of_t](double t) {
      const double x = x_of_t(t);
      const double q = 1.0 + src->derivative(x);
      return 2.0 * kSqrt2 * src->second_derivative(x) / (q * q * q);
    };
  }
  const auto [m, M] = f.derivative_bounds();
  return SmoothDiagram(omega, slope, I, {1.0 - 2.0 / (1.0 + m),
                                         1.0 - 2.0 / (1.0 + M)},
                       curvature);
}

UnrotatedDiagram unrotate(const SmoothDiagram& d) {
  auto src = std::make_shared<const SmoothDiagram>(d);
  const double z = d.center();
  const double A = d.interval().a;
  const double B = d.interval().b;
  const Interval I{kSqrt2 * A, kSqrt2 * z};
  auto t_of_x = [src, I, A, B, z](double x) {
    if (x <= I.a) return A;
    if (x >= I.b) return B;
    const double target = kSqrt2 * x;
    const double guess = A + (B - A) * (x - I.a) / (I.b - I.a);
    return solve_increasing(
        [&](double t) { return t - src->evaluate(t) + z - target; },
        [&](double t) { return 1.0 - src->slope(t); }, A, B, guess);
  };
  auto f = [src, t_of_x, z](double x) {
    const double t = t_of_x(x);
    return (t + src->evaluate(t) - z) / kSqrt2;
  };
  auto df = [src, t_of_x](double x) {
    const double w = src->slope(t_of_x(x));
    return (1.0 + w) / (1.0 - w);
  };
  UnrotatedDiagram::Fn d2f;
  if (d.curvature_function()) {
    d2f = [src, t_of_x](double x) {
      const double t = t_of_x(x);
      const double q = 1.0 - src->slope(t);
      return 2.0 * kSqrt2 * src->curvature_function()(t) / (q * q * q);
    };
  }
  const auto [c1, c2] = d.slope_bounds();
  return UnrotatedDiagram(f, df, I, {(1.0 + c1) / (1.0 - c1),
                                     (1.0 + c2) / (1.0 - c2)},
                          d2f);
}

RectangularDiagram rectangular_approximation(const PiecewiseLinearDiagram& d,
                                             int n) {
  if (n < 1) throw InvalidInput("approximation order must be positive");
  const auto& t = d.knots();
  std::vector<double> minima{t.front()};
  std::vector<double> maxima;
  for (std::size_t seg = 0; seg < d.segment_count(); ++seg) {
    const double A = t[seg];
    const double B = t[seg + 1];
    const double h = (B - A) / n;
    const double slope = d.slopes()[seg];
    for (int k = 0; k < n; ++k) {
      maxima.push_back(A + h * (k + 0.5) + 0.5 * h * slope);
      minima.push_back(k + 1 == n ? B : A + h * (k + 1));
    }
  }
  return RectangularDiagram(std::move(minima), std::move(maxima),
                            d.interval());
}

PiecewiseLinearDiagram piecewise_linear_interpolant(const Diagram& d,
                                                    int segments) {
  if (segments < 1) throw InvalidInput("segment count must be positive");
  const Interval I = interval(d);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= segments; ++i) {
    const double x = i == segments ? I.b : I.a + I.length() * i / segments;
    pts.emplace_back(x, evaluate(d, x));
  }
  return PiecewiseLinearDiagram(std::move(pts));
}

}  // namespace hookwalk
