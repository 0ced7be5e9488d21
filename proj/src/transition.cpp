#include "hookwalk/transition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hookwalk {

namespace {

using numerics::QuadratureConfig;

constexpr double kPi = std::numbers::pi;

// Support of the charge and of the measures: [x_1, x_n] for rectangular
// diagrams, the diagram interval otherwise.
Interval support_hull(const Diagram& d) {
  if (const auto* r = std::get_if<RectangularDiagram>(&d))
    return {r->minima().front(), r->minima().back()};
  return interval(d);
}

// Integral of the constant c over [s, e] against 1/(t - x), x outside.
double log_piece(double c, double s, double e, double x) {
  if (c == 0.0 || s == e) return 0.0;
  return c * std::log((e - x) / (s - x));
}

// (f'(u) - f'(x)) / ((1 + f'(x))(u - x + f(u) - f(x))) integrated over the
// parts of [lo, hi] on either side of x.
double unrotated_exponent(const UnrotatedDiagram& f, double x, double lo,
                          double hi, const QuadratureConfig& cfg) {
  if (!(lo < hi)) return 0.0;
  const double p = f.derivative(x);
  const double cutoff = 1e-6 * std::max(hi - lo, f.interval().length());
  auto near = [&](double u) {
    if (f.has_second_derivative()) {
      const double m = 0.5 * (u + x);
      return f.second_derivative(m) / (1.0 + f.derivative(m));
    }
    const double h = cutoff;
    const double v = x + h <= f.interval().b ? x + h : x - h;
    return (f.derivative(v) - p) / (v - x) / (1.0 + f.slope_between(v, x));
  };
  auto quotient = [&](double u, double signed_d) {
    if (std::abs(signed_d) < cutoff) return near(u);
    return (f.derivative(u) - p) / signed_d / (1.0 + f.slope_between(u, x));
  };
  double total = 0.0;
  if (x > lo) {
    const double gap = x >= hi ? x - hi : 0.0;
    const double top = std::min(x, hi);
    if (x - lo < cutoff)
      total += near(0.5 * (lo + top)) * (top - lo);
    else
      total += numerics::integrate_endpoint_singular(
          [&](double, double, double to_top) {
            const double d = gap + to_top;
            return quotient(x - d, -d);
          },
          lo, top, 0.0, 0.0, cfg);
  }
  if (x < hi) {
    const double gap = x <= lo ? lo - x : 0.0;
    const double bottom = std::max(x, lo);
    if (hi - x < cutoff)
      total += near(0.5 * (bottom + hi)) * (hi - bottom);
    else
      total += numerics::integrate_endpoint_singular(
          [&](double, double from_bottom, double) {
            const double d = gap + from_bottom;
            return quotient(x + d, d);
          },
          bottom, hi, 0.0, 0.0, cfg);
  }
  return total / (1.0 + p);
}

// g_{s,t}(x) on the support (x0, s), x0 = f^{-1}(t), from the distances l
// = x - x0 and r = s - x.
double started_value(const UnrotatedDiagram& f, double x0, double s, double x,
                     double l, double r, const QuadratureConfig& cfg) {
  const double p = f.derivative(x);
  const double q = 1.0 / (1.0 + p);
  const double y1 = l * (1.0 + f.slope_between(x0, x));
  const double y2 = r * (1.0 + f.slope_between(x, s));
  const double e = unrotated_exponent(f, x, x0, s, cfg);
  return (1.0 + p) * std::sin(kPi * q) / kPi *
         std::exp(-q * std::log(y1) - p * q * std::log(y2) - e);
}

}  // namespace

WalkKind parse_walk_kind(const std::string& s) {
  if (s == "exterior") return WalkKind::exterior;
  if (s == "interior") return WalkKind::interior;
  throw InvalidInput("walk must be exterior or interior, got \"" + s + "\"");
}

const char* to_string(WalkKind k) {
  return k == WalkKind::exterior ? "exterior" : "interior";
}

// ---------------------------------------------------------------------------

void AtomicMeasure::validate() const {
  if (locations.empty() || locations.size() != weights.size())
    throw InvalidInput("atomic measure needs matching, non-empty locations "
                       "and weights");
  numerics::CompensatedSum total;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!std::isfinite(locations[i]) || !std::isfinite(weights[i]))
      throw InvalidInput("atomic measure entries must be finite");
    if (!(weights[i] > 0.0))
      throw InvalidInput("atom weights must be positive");
    if (i > 0 && !(locations[i - 1] < locations[i]))
      throw InvalidInput("atom locations must be strictly increasing");
    total.add(weights[i]);
  }
  const double tol = 1e-12 * std::max(1.0, static_cast<double>(size()) / 16.0);
  if (std::abs(total.value() - 1.0) > tol)
    throw InvalidInput("atom weights must sum to 1");
}

double AtomicMeasure::cdf(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size() && locations[i] <= x; ++i) s += weights[i];
  return s;
}

AtomicMeasure exterior_atoms(const RectangularDiagram& d) {
  const auto& xs = d.minima();
  const auto& ys = d.maxima();
  AtomicMeasure m;
  m.locations = xs;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    // prod_i (x_k - y_i) / prod_{i != k} (x_k - x_i) in log magnitude.
    double log_mag = 0.0;
    int negatives = 0;
    for (double y : ys) {
      log_mag += std::log(std::abs(xs[k] - y));
      negatives += xs[k] < y;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i == k) continue;
      log_mag -= std::log(std::abs(xs[k] - xs[i]));
      negatives += xs[k] < xs[i];
    }
    m.weights.push_back((negatives % 2 ? -1.0 : 1.0) * std::exp(log_mag));
  }
  return m;
}

AtomicMeasure interior_atoms(const RectangularDiagram& d) {
  if (d.is_trivial())
    throw InvalidInput("the trivial diagram has no interior transition measure");
  const auto& xs = d.minima();
  const auto& ys = d.maxima();
  const double A = d.area();
  AtomicMeasure m;
  m.locations = ys;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    double log_mag = 0.0;
    int negatives = 0;
    for (double x : xs) {
      log_mag += std::log(std::abs(ys[k] - x));
      negatives += ys[k] < x;
    }
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (i == k) continue;
      log_mag -= std::log(std::abs(ys[k] - ys[i]));
      negatives += ys[k] < ys[i];
    }
    m.weights.push_back(-(2.0 / A) * (negatives % 2 ? -1.0 : 1.0) *
                        std::exp(log_mag));
  }
  return m;
}

AtomicMeasure exterior_atoms_factored(const RectangularDiagram& d) {
  const auto& x = d.minima();
  const auto& y = d.maxima();
  AtomicMeasure m;
  m.locations = x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double w = 1.0;
    for (std::size_t i = 0; i < k; ++i) w *= 1.0 - (y[i] - x[i]) / (x[k] - x[i]);
    for (std::size_t i = k + 1; i < x.size(); ++i)
      w *= 1.0 - (x[i] - y[i - 1]) / (x[i] - x[k]);
    m.weights.push_back(w);
  }
  return m;
}

AtomicMeasure interior_atoms_factored(const RectangularDiagram& d) {
  if (d.is_trivial())
    throw InvalidInput("the trivial diagram has no interior transition measure");
  const auto& x = d.minima();
  const auto& y = d.maxima();
  const double A = d.area();
  AtomicMeasure m;
  m.locations = y;
  for (std::size_t k = 0; k < y.size(); ++k) {
    double w = (2.0 / A) * (x[k + 1] - y[k]) * (y[k] - x[k]);
    for (std::size_t i = 0; i < k; ++i) w *= 1.0 + (y[i] - x[i]) / (y[k] - y[i]);
    for (std::size_t j = k + 1; j < y.size(); ++j)
      w *= 1.0 + (x[j + 1] - y[j]) / (y[j] - y[k]);
    m.weights.push_back(w);
  }
  return m;
}

// ---------------------------------------------------------------------------

TransitionDensity::TransitionDensity(Diagram d, WalkKind kind,
                                     QuadratureConfig cfg)
    : diagram_(std::make_shared<const Diagram>(std::move(d))),
      kind_(kind),
      cfg_(cfg) {
  cfg_.validate();
  if (std::holds_alternative<RectangularDiagram>(*diagram_))
    throw InvalidInput(
        "rectangular diagrams have atomic transition measures; use atoms");
  const double A = hookwalk::area(*diagram_);
  if (kind_ == WalkKind::interior && !(A > 0.0))
    throw InvalidInput("interior density needs a diagram of positive area");
  const double flip = kind_ == WalkKind::exterior ? 1.0 : -1.0;
  prefactor_ = kind_ == WalkKind::exterior ? 1.0 / kPi : 2.0 / (kPi * A);

  if (const auto* p = std::get_if<PiecewiseLinearDiagram>(&*diagram_)) {
    const auto& t = p->knots();
    const auto& d = p->slopes();
    const std::size_t n = d.size();
    knot_exponents_.resize(n + 1);
    knot_exponents_[0] = -flip * 0.5 * (1.0 + d[0]);
    knot_exponents_[n] = -flip * 0.5 * (1.0 - d[n - 1]);
    for (std::size_t i = 1; i < n; ++i)
      knot_exponents_[i] = flip * 0.5 * (d[i - 1] - d[i]);
    for (std::size_t k = 0; k < n; ++k)
      pieces_.push_back(
          {t[k], t[k + 1], knot_exponents_[k], knot_exponents_[k + 1]});
  } else {
    const auto& s = std::get<SmoothDiagram>(*diagram_);
    const Interval I = s.interval();
    pieces_.push_back({I.a, I.b, -flip * 0.5 * (1.0 + s.slope(I.a)),
                       -flip * 0.5 * (1.0 - s.slope(I.b))});
  }
}

double TransitionDensity::linear_value(const PiecewiseLinearDiagram& p,
                                       std::size_t k, double from_lo,
                                       double to_hi) const {
  const auto& t = p.knots();
  const auto& e = knot_exponents_;
  double log_v = std::log(prefactor_ * std::cos(0.5 * kPi * p.slopes()[k])) +
                 e[k] * std::log(from_lo) + e[k + 1] * std::log(to_hi);
  for (std::size_t i = 0; i < k; ++i)
    log_v += e[i] * std::log((t[k] - t[i]) + from_lo);
  for (std::size_t i = k + 2; i < t.size(); ++i)
    log_v += e[i] * std::log((t[i] - t[k + 1]) + to_hi);
  return std::exp(log_v);
}

double TransitionDensity::smooth_value(const SmoothDiagram& s, double x,
                                       double from_a, double to_b) const {
  const Interval I = s.interval();
  const double w = s.slope(x);
  numerics::RemovableLimit limit;
  if (s.curvature_function()) {
    limit.derivative = s.curvature_function();
  } else {
    const double h = 1e-6 * I.length();
    const double v = x + h <= I.b ? x + h : x - h;
    limit.value_at_x = (s.slope(v) - w) / (v - x);
  }
  const double D = numerics::quotient_integral(
      [&](double u) { return s.slope(u); }, w, x, I.a, I.b, limit, cfg_);
  const double sgn = kind_ == WalkKind::exterior ? 1.0 : -1.0;
  const double log_v = std::log(prefactor_ * std::cos(0.5 * kPi * w)) -
                       sgn * 0.5 * (1.0 + w) * std::log(from_a) -
                       sgn * 0.5 * (1.0 - w) * std::log(to_b) +
                       sgn * 0.5 * D;
  return std::exp(log_v);
}

double TransitionDensity::on_piece(std::size_t i, double from_lo,
                                   double to_hi) const {
  const DensityPiece& pc = pieces_.at(i);
  if (const auto* p = std::get_if<PiecewiseLinearDiagram>(&*diagram_))
    return linear_value(*p, i, from_lo, to_hi);
  const double x = from_lo <= to_hi ? pc.lo + from_lo : pc.hi - to_hi;
  return smooth_value(std::get<SmoothDiagram>(*diagram_), x, from_lo, to_hi);
}

double TransitionDensity::operator()(double x) const {
  const Interval I = interval();
  if (!I.contains_open(x))
    throw DomainError("density point must lie in the open interval");
  auto it = std::lower_bound(
      pieces_.begin(), pieces_.end(), x,
      [](const DensityPiece& p, double v) { return p.hi < v; });
  if (it == pieces_.end() || x == it->hi || x == it->lo)
    throw DomainError("density is undefined at a breakpoint");
  return on_piece(static_cast<std::size_t>(it - pieces_.begin()), x - it->lo,
                  it->hi - x);
}

double TransitionDensity::integrate(
    const std::function<double(double)>& weight) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const DensityPiece& p = pieces_[i];
    total += numerics::integrate_endpoint_singular(
        [&](double x, double l, double r) { return weight(x) * on_piece(i, l, r); },
        p.lo, p.hi, p.left_exponent, p.right_exponent, cfg_);
  }
  return total;
}

double TransitionDensity::mass() const {
  return integrate([](double) { return 1.0; });
}

double TransitionDensity::cdf(double x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const DensityPiece& p = pieces_[i];
    if (x <= p.lo) break;
    if (x >= p.hi) {
      total += numerics::integrate_endpoint_singular(
          [&](double, double l, double r) { return on_piece(i, l, r); }, p.lo,
          p.hi, p.left_exponent, p.right_exponent, cfg_);
      continue;
    }
    const double rest = p.hi - x;
    total += numerics::integrate_endpoint_singular(
        [&](double, double l, double r) { return on_piece(i, l, rest + r); },
        p.lo, x, p.left_exponent, 0.0, cfg_);
  }
  return total;
}

double exterior_density(const Diagram& d, double x,
                        const QuadratureConfig& cfg) {
  return TransitionDensity(d, WalkKind::exterior, cfg)(x);
}

double interior_density(const Diagram& d, double x,
                        const QuadratureConfig& cfg) {
  return TransitionDensity(d, WalkKind::interior, cfg)(x);
}

// ---------------------------------------------------------------------------

void DensityGrid::validate() const {
  interval.validate();
  if (grid.size() < 2 || grid.size() != values.size())
    throw InvalidInput("density grid needs at least two points and matching "
                       "values");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
      throw InvalidInput("density grid entries must be finite");
    if (!interval.contains_open(grid[i]))
      throw InvalidInput("density grid points must lie in the open interval");
    if (i > 0 && !(grid[i - 1] < grid[i]))
      throw InvalidInput("density grid points must be strictly increasing");
    if (values[i] < 0.0) throw InvalidInput("density values must be >= 0");
  }
  if (!(left_exponent > -1.0) || !(right_exponent > -1.0))
    throw InvalidInput("endpoint exponents must exceed -1");
}

double DensityGrid::value(double x) const {
  if (!interval.contains_open(x))
    throw DomainError("density grid evaluation outside the open interval");
  if (x < grid.front())
    return values.front() *
           std::pow((x - interval.a) / (grid.front() - interval.a),
                    left_exponent);
  if (x > grid.back())
    return values.back() *
           std::pow((interval.b - x) / (interval.b - grid.back()),
                    right_exponent);
  auto it = std::lower_bound(grid.begin(), grid.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  if (grid[j] == x) return values[j];
  const double w = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

double DensityGrid::mass() const {
  numerics::CompensatedSum s;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    s.add(0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]));
  s.add(values.front() * (grid.front() - interval.a) / (1.0 + left_exponent));
  s.add(values.back() * (interval.b - grid.back()) / (1.0 + right_exponent));
  return s.value();
}

DensityGrid sample_density(const TransitionDensity& rho,
                           const std::vector<double>& grid) {
  DensityGrid g;
  g.grid = grid;
  g.interval = rho.interval();
  g.kind = rho.kind();
  g.left_exponent = rho.pieces().front().left_exponent;
  g.right_exponent = rho.pieces().back().right_exponent;
  g.values.reserve(grid.size());
  for (double x : grid) g.values.push_back(rho(x));
  g.validate();
  return g;
}

std::vector<double> graded_grid(const TransitionDensity& rho, int n) {
  const auto& pieces = rho.pieces();
  if (n < 2 * static_cast<int>(pieces.size()))
    throw InvalidInput("grid needs at least two points per piece");
  const double total = rho.interval().length();
  std::vector<int> counts;
  int used = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    int m = i + 1 == pieces.size()
                ? n - used
                : std::max(2, static_cast<int>(std::lround(
                                  n * (pieces[i].hi - pieces[i].lo) / total)));
    if (i + 1 == pieces.size() && m < 2)
      throw InvalidInput("grid too coarse for the number of pieces");
    counts.push_back(m);
    used += m;
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double lo = pieces[i].lo;
    const double len = pieces[i].hi - lo;
    const int m = counts[i];
    for (int j = 0; j < m; ++j) {
      const double tau = (j + 0.5) / m;
      const double a4 = std::pow(tau, 4);
      const double b4 = std::pow(1.0 - tau, 4);
      out.push_back(tau <= 0.5 ? lo + len * a4 / (a4 + b4)
                               : pieces[i].hi - len * b4 / (a4 + b4));
    }
  }
  return out;
}

std::vector<double> uniform_grid(const Interval& I, int n) {
  if (n < 2) throw InvalidInput("grid needs at least two points");
  std::vector<double> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) out.push_back(I.a + I.length() * (j + 0.5) / n);
  return out;
}

// ---------------------------------------------------------------------------

UnrotatedDensity::UnrotatedDensity(UnrotatedDiagram f, Mode mode,
                                   Interval support, QuadratureConfig cfg)
    : f_(std::make_shared<const UnrotatedDiagram>(std::move(f))),
      mode_(mode),
      support_(support),
      cfg_(cfg) {
  cfg_.validate();
  if (mode_ == Mode::interior) area_ = f_->area();
}

UnrotatedDensity UnrotatedDensity::exterior(UnrotatedDiagram f,
                                            QuadratureConfig cfg) {
  const Interval I = f.interval();
  return UnrotatedDensity(std::move(f), Mode::exterior, I, cfg);
}

UnrotatedDensity UnrotatedDensity::interior(UnrotatedDiagram f,
                                            QuadratureConfig cfg) {
  const Interval I = f.interval();
  return UnrotatedDensity(std::move(f), Mode::interior, I, cfg);
}

UnrotatedDensity UnrotatedDensity::started(UnrotatedDiagram f, double s,
                                           double t, QuadratureConfig cfg) {
  const Interval I = f.interval();
  if (!(s > I.a && s <= I.b))
    throw DomainError("start abscissa must lie in (a, b]");
  if (!(t >= 0.0 && t < f.evaluate(s)))
    throw DomainError("start ordinate must satisfy 0 <= t < f(s)");
  const double x0 = f.inverse(t);
  return UnrotatedDensity(std::move(f), Mode::started, {x0, s}, cfg);
}

DensityPiece UnrotatedDensity::piece() const {
  const double pa = f_->derivative(support_.a);
  const double pb = f_->derivative(support_.b);
  switch (mode_) {
    case Mode::exterior:
      return {support_.a, support_.b, -pa / (1 + pa), -1 / (1 + pb)};
    case Mode::interior:
      return {support_.a, support_.b, pa / (1 + pa), 1 / (1 + pb)};
    default:
      return {support_.a, support_.b, -1 / (1 + pa), -pb / (1 + pb)};
  }
}

double UnrotatedDensity::exponent_integral(double x, double lo,
                                           double hi) const {
  return unrotated_exponent(*f_, x, lo, hi, cfg_);
}

double UnrotatedDensity::at(double x, double from_lo, double to_hi) const {
  const double lo = support_.a;
  const double hi = support_.b;
  if (mode_ == Mode::started)
    return started_value(*f_, lo, hi, x, from_lo, to_hi, cfg_);
  const double p = f_->derivative(x);
  const double q = 1.0 / (1.0 + p);
  const double x1 = from_lo * (1.0 + f_->slope_between(lo, x));
  const double x2 = to_hi * (1.0 + f_->slope_between(x, hi));
  const double e = unrotated_exponent(*f_, x, lo, hi, cfg_);
  const double base = (1.0 + p) * std::sin(kPi * q) / kPi;
  if (mode_ == Mode::exterior)
    return base * std::exp(-p * q * std::log(x1) - q * std::log(x2) + e);
  return base / area_ *
         std::exp(p * q * std::log(x1) + q * std::log(x2) - e);
}

double UnrotatedDensity::operator()(double x) const {
  if (!support_.contains_open(x))
    throw DomainError("density point must lie inside the support");
  return at(x, x - support_.a, support_.b - x);
}

double UnrotatedDensity::integrate(
    const std::function<double(double)>& weight) const {
  const DensityPiece p = piece();
  return numerics::integrate_endpoint_singular(
      [&](double x, double l, double r) { return weight(x) * at(x, l, r); },
      p.lo, p.hi, p.left_exponent, p.right_exponent, cfg_);
}

double UnrotatedDensity::mass() const {
  return integrate([](double) { return 1.0; });
}

double UnrotatedDensity::cdf(double x) const {
  if (x <= support_.a) return 0.0;
  if (x >= support_.b) return mass();
  const DensityPiece p = piece();
  const double rest = support_.b - x;
  return numerics::integrate_endpoint_singular(
      [&](double u, double l, double r) { return at(u, l, rest + r); },
      support_.a, x, p.left_exponent, 0.0, cfg_);
}

double exterior_density_unrotated(const UnrotatedDiagram& f, double x,
                                  const QuadratureConfig& cfg) {
  return UnrotatedDensity::exterior(f, cfg)(x);
}

double interior_density_unrotated(const UnrotatedDiagram& f, double x,
                                  const QuadratureConfig& cfg) {
  return UnrotatedDensity::interior(f, cfg)(x);
}

double started_interior_density(const UnrotatedDiagram& f, double s, double t,
                                double x, const QuadratureConfig& cfg) {
  return UnrotatedDensity::started(f, s, t, cfg)(x);
}

// ---------------------------------------------------------------------------

double IdentitySides::residual() const { return std::abs(lhs - rhs); }

double charge_stieltjes(const Diagram& d, double x,
                        const QuadratureConfig& cfg) {
  const Interval S = support_hull(d);
  if (x >= std::min(S.a, 0.0) && x <= std::max(S.b, 0.0))
    throw DomainError("x must lie outside the supports of the charge and "
                      "the measures");
  double total = 0.0;
  // Between 0 and z outside the support the diagram is |t - z| while the
  // charge compares against |t|.
  if (S.a > 0.0) total += log_piece(-1.0, 0.0, S.a, x);
  if (S.b < 0.0) total += log_piece(1.0, S.b, 0.0, x);

  auto slope_steps = [&](const std::vector<double>& knots,
                         const std::function<double(std::size_t)>& slope) {
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double s = knots[k];
      const double e = knots[k + 1];
      const double w = slope(k);
      if (s < 0.0 && e > 0.0) {
        total += log_piece(0.5 * (w + 1.0), s, 0.0, x);
        total += log_piece(0.5 * (w - 1.0), 0.0, e, x);
      } else {
        const double sg = e <= 0.0 ? -1.0 : 1.0;
        total += log_piece(0.5 * (w - sg), s, e, x);
      }
    }
  };

  if (const auto* r = std::get_if<RectangularDiagram>(&d)) {
    const auto bp = r->breakpoints();
    slope_steps(bp, [](std::size_t k) { return k % 2 == 0 ? 1.0 : -1.0; });
  } else if (const auto* p = std::get_if<PiecewiseLinearDiagram>(&d)) {
    slope_steps(p->knots(), [p](std::size_t k) { return p->slopes()[k]; });
  } else {
    const auto& s = std::get<SmoothDiagram>(d);
    auto part = [&](double lo, double hi) {
      if (!(lo < hi)) return 0.0;
      const double sg = hi <= 0.0 ? -1.0 : 1.0;
      return numerics::integrate(
          [&](double t) { return 0.5 * (s.slope(t) - sg) / (t - x); }, lo, hi,
          cfg);
    };
    total += part(S.a, std::min(S.b, 0.0)) + part(std::max(S.a, 0.0), S.b);
  }
  return total;
}

IdentitySides cauchy_identity(const Diagram& d, double x, WalkKind kind,
                              const QuadratureConfig& cfg) {
  const double C = charge_stieltjes(d, x, cfg);
  double stieltjes;  // int dm(t) / (x - t)
  if (const auto* r = std::get_if<RectangularDiagram>(&d)) {
    const AtomicMeasure m =
        kind == WalkKind::exterior ? exterior_atoms(*r) : interior_atoms(*r);
    numerics::CompensatedSum s;
    for (std::size_t i = 0; i < m.size(); ++i)
      s.add(m.weights[i] / (x - m.locations[i]));
    stieltjes = s.value();
  } else {
    stieltjes = TransitionDensity(d, kind, cfg).integrate(
        [x](double t) { return 1.0 / (x - t); });
  }
  if (kind == WalkKind::exterior) return {stieltjes, std::exp(C) / x};
  return {-0.5 * area(d) * stieltjes + x - center(d), x * std::exp(-C)};
}

IdentitySides started_self_consistency(const UnrotatedDiagram& f, double s,
                                       double t, double x,
                                       const QuadratureConfig& cfg) {
  const UnrotatedDensity g = UnrotatedDensity::started(f, s, t, cfg);
  const double x0 = g.support().a;
  if (!g.support().contains_open(x))
    throw DomainError("x must lie in (f^{-1}(t), s)");
  const double p = f.derivative(x);
  const double q = 1.0 / (1.0 + p);
  const double lhs = g(x);
  // Horizontal hook: g_{v,t}(x) for v in (x, s).
  const double horizontal = numerics::integrate_endpoint_singular(
      [&](double v, double l, double) {
        return started_value(f, x0, v, x, x - x0, l, cfg);
      },
      x, s, -p * q, 0.0, cfg);
  // Vertical hook: g_{s,v}(x) for v in (t, f(x)), written as v = f(w).
  const double vertical = numerics::integrate_endpoint_singular(
      [&](double w, double, double r) {
        return started_value(f, w, s, x, r, s - x, cfg) * f.derivative(w);
      },
      x0, x, 0.0, -q, cfg);
  const double hook = s - x0 + f.evaluate(s) - t;
  return {lhs, (horizontal + vertical) / hook};
}

IdentitySides started_mixture(const UnrotatedDiagram& f, double x,
                              const QuadratureConfig& cfg) {
  const Interval I = f.interval();
  if (!I.contains_open(x)) throw DomainError("x must lie in (a, b)");
  const double lhs = interior_density_unrotated(f, x, cfg);
  const double p = f.derivative(x);
  const double q = 1.0 / (1.0 + p);
  const double outer = numerics::integrate_endpoint_singular(
      [&](double s, double rs, double) {
        return numerics::integrate_endpoint_singular(
            [&](double w, double, double lw) {
              return started_value(f, w, s, x, lw, rs, cfg) * f.derivative(w);
            },
            I.a, x, 0.0, -q, cfg);
      },
      x, I.b, -p * q, 0.0, cfg);
  return {lhs, outer / f.area()};
}

}  // namespace hookwalk
