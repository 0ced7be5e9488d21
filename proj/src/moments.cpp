#include "hookwalk/moments.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <string>

#include "hookwalk/numerics.hpp"

namespace hookwalk {

namespace {

using numerics::CompensatedSum;

void check_order(int N, int min_order = 1) {
  if (N < min_order || N > kMaxMomentOrder)
    throw InvalidInput("moment order must lie in [" + std::to_string(min_order) +
                       ", " + std::to_string(kMaxMomentOrder) + "]");
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// prod_k (p_k / k)^{rho_k} / rho_k! for one partition.
double partition_term(const numerics::Partition& rho, const MomentVector& p) {
  double v = 1.0;
  for (auto [k, count] : rho.multiplicities) {
    const double base = p[k] / k;
    for (int i = 1; i <= count; ++i) v *= base / i;
  }
  return v;
}

// Power sums of signed point masses.
MomentVector point_power_sums(const std::vector<double>& at,
                              const std::vector<double>& mass, int N) {
  MomentVector out{MomentKind::p, std::vector<double>(N)};
  for (int n = 1; n <= N; ++n) {
    CompensatedSum s;
    for (std::size_t i = 0; i < at.size(); ++i)
      s.add(mass[i] * std::pow(at[i], n));
    out.values[n - 1] = s.value();
  }
  return out;
}

// y-series coefficients of exp(sign * sum_{k<=order} p_k y^k / k) up to y^order.
std::vector<double> exp_series(const MomentVector& p, int order, double sign) {
  std::vector<double> e(order + 1, 0.0);
  e[0] = 1.0;
  for (int n = 1; n <= order; ++n) {
    CompensatedSum s;
    for (int k = 1; k <= n; ++k) s.add(sign * p[k] * e[n - k]);
    e[n] = s.value() / n;
  }
  return e;
}

double horner(const std::vector<double>& c, double y) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * y + *it;
  return v;
}

}  // namespace

const char* to_string(MomentKind k) {
  switch (k) {
    case MomentKind::p:
      return "p";
    case MomentKind::h:
      return "h";
    default:
      return "g";
  }
}

double MomentVector::operator[](int n) const {
  if (n < first_index() || n > max_order())
    throw InvalidInput(std::string(to_string(kind)) + " moment of order " +
                       std::to_string(n) + " not available");
  return values[static_cast<std::size_t>(n - first_index())];
}

std::vector<double> affine_moments(const std::vector<double>& centered, double c,
                                   double s) {
  std::vector<double> out(centered.size());
  for (std::size_t n = 0; n < centered.size(); ++n) {
    CompensatedSum sum;
    for (std::size_t k = 0; k <= n; ++k)
      sum.add(binomial(static_cast<int>(n), static_cast<int>(k)) *
              std::pow(c, static_cast<double>(n - k)) *
              std::pow(s, static_cast<double>(k)) * centered[k]);
    out[n] = sum.value();
  }
  return out;
}

MomentVector p_moments(const Diagram& d, int N,
                       const numerics::QuadratureConfig& cfg) {
  check_order(N);
  // p_n = int u^n dtau, tau = omega''/2 on the whole line (mass 1).
  if (const auto* r = std::get_if<RectangularDiagram>(&d)) {
    std::vector<double> at, mass;
    for (double x : r->minima()) {
      at.push_back(x);
      mass.push_back(1.0);
    }
    for (double y : r->maxima()) {
      at.push_back(y);
      mass.push_back(-1.0);
    }
    return point_power_sums(at, mass, N);
  }
  if (const auto* pl = std::get_if<PiecewiseLinearDiagram>(&d)) {
    const auto& k = pl->knots();
    const auto& sl = pl->slopes();
    std::vector<double> mass(k.size());
    mass.front() = 0.5 * (1.0 + sl.front());
    for (std::size_t i = 1; i + 1 < k.size(); ++i)
      mass[i] = 0.5 * (sl[i] - sl[i - 1]);
    mass.back() = 0.5 * (1.0 - sl.back());
    return point_power_sums(k, mass, N);
  }
  const auto& sm = std::get<SmoothDiagram>(d);
  const Interval I = sm.interval();
  const double c = 0.5 * (I.a + I.b);
  const double s = 0.5 * I.length();
  // On v in [-1, 1]: p'_k = ((-1)^k + 1)/2 - (k/2) int v^{k-1} omega'(c + s v).
  std::vector<double> centered(N + 1);
  centered[0] = 1.0;
  for (int k = 1; k <= N; ++k) {
    const double ends = k % 2 == 0 ? 1.0 : 0.0;
    const double q = numerics::integrate(
        [&](double v) { return std::pow(v, k - 1) * sm.slope(c + s * v); },
        -1.0, 1.0, cfg);
    centered[k] = ends - 0.5 * k * q;
  }
  auto full = affine_moments(centered, c, s);
  return {MomentKind::p, std::vector<double>(full.begin() + 1, full.end())};
}

MomentVector h_from_p(const MomentVector& p) {
  if (p.kind != MomentKind::p) throw InvalidInput("h_from_p needs p moments");
  const int N = p.max_order();
  check_order(N, 0);
  MomentVector h{MomentKind::h, {1.0}};
  for (int n = 1; n <= N; ++n) {
    CompensatedSum s;
    for (const auto& rho : numerics::partitions(n)) s.add(partition_term(rho, p));
    h.values.push_back(s.value());
  }
  return h;
}

MomentVector g_from_p(const MomentVector& p, double area) {
  if (p.kind != MomentKind::p) throw InvalidInput("g_from_p needs p moments");
  if (!(area > 0.0)) throw InvalidInput("g moments need area A > 0");
  const int N = p.max_order();
  check_order(N, 2);
  MomentVector g{MomentKind::g, {}};
  for (int n = 2; n <= N; ++n) {
    CompensatedSum s;
    for (const auto& rho : numerics::partitions(n)) {
      const double sign = rho.part_count() % 2 == 0 ? -1.0 : 1.0;
      s.add(sign * partition_term(rho, p));
    }
    g.values.push_back(2.0 / area * s.value());
  }
  return g;
}

MomentVector p_from_h(const MomentVector& h) {
  if (h.kind != MomentKind::h) throw InvalidInput("p_from_h needs h moments");
  if (h.values.empty() || std::abs(h.values[0] - 1.0) > 1e-12)
    throw InvalidInput("p_from_h needs h_0 = 1");
  const int N = h.max_order();
  check_order(N);
  MomentVector p{MomentKind::p, {}};
  for (int n = 1; n <= N; ++n) {
    // Every partition but (n) only involves p_k with k < n.
    CompensatedSum s;
    s.add(h[n]);
    for (const auto& rho : numerics::partitions(n)) {
      if (rho.multiplicities.size() == 1 && rho.multiplicities[0].first == n)
        continue;
      s.add(-partition_term(rho, p));
    }
    p.values.push_back(n * s.value());
  }
  return p;
}

MomentVector measure_moments(const AtomicMeasure& m, int N, MomentKind kind) {
  if (kind == MomentKind::p) throw InvalidInput("measure moments are h or g");
  check_order(N, 0);
  m.validate();
  MomentVector out{kind, {}};
  for (int n = 0; n <= N; ++n) {
    CompensatedSum s;
    for (std::size_t i = 0; i < m.size(); ++i)
      s.add(m.weights[i] * std::pow(m.locations[i], n));
    out.values.push_back(s.value());
  }
  return out;
}

MomentVector measure_moments(const DensityGrid& g, int N) {
  check_order(N, 0);
  g.validate();
  const double c = 0.5 * (g.interval.a + g.interval.b);
  const double s = 0.5 * g.interval.length();
  using Rule = boost::math::quadrature::gauss<double, 24>;
  std::vector<CompensatedSum> acc(N + 1);
  // Linear cells in v = (u - c) / s; degree <= 41 is exact with 24 nodes.
  for (std::size_t i = 0; i + 1 < g.grid.size(); ++i) {
    const double l = (g.grid[i] - c) / s;
    const double r = (g.grid[i + 1] - c) / s;
    const double gl = g.values[i];
    const double gr = g.values[i + 1];
    const double mid = 0.5 * (l + r);
    const double half = 0.5 * (r - l);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (double sign : {-1.0, 1.0}) {
        if (x[j] == 0.0 && sign < 0.0) continue;
        const double t = sign * x[j];
        const double v = mid + half * t;
        const double val = 0.5 * (gl + gr) + 0.5 * (gr - gl) * t;
        double pw = 1.0;
        for (int k = 0; k <= N; ++k) {
          acc[k].add(s * half * w[j] * val * pw);
          pw *= v;
        }
      }
    }
  }
  // Tails v0 (d / L)^alpha with d the distance to the interval end.
  auto tail = [&](double v0, double alpha, double L, double end) {
    const double ratio = L / s;
    for (int k = 0; k <= N; ++k) {
      // int_0^1 tau^alpha (end - end * ratio * tau)^k d tau, end = -1 or 1.
      CompensatedSum t;
      for (int j = 0; j <= k; ++j)
        t.add(binomial(k, j) * std::pow(end, k) * std::pow(-ratio, j) /
              (alpha + j + 1.0));
      acc[k].add(v0 * L * t.value());
    }
  };
  tail(g.values.front(), g.left_exponent, g.grid.front() - g.interval.a, -1.0);
  tail(g.values.back(), g.right_exponent, g.interval.b - g.grid.back(), 1.0);
  std::vector<double> centered(N + 1);
  for (int k = 0; k <= N; ++k) centered[k] = acc[k].value();
  const MomentKind kind =
      g.kind == WalkKind::exterior ? MomentKind::h : MomentKind::g;
  return {kind, affine_moments(centered, c, s)};
}

MomentVector measure_moments(const TransitionDensity& rho, int N) {
  check_order(N, 0);
  const Interval I = rho.interval();
  const double c = 0.5 * (I.a + I.b);
  const double s = 0.5 * I.length();
  std::vector<double> centered(N + 1);
  for (int k = 0; k <= N; ++k)
    centered[k] =
        rho.integrate([&](double u) { return std::pow((u - c) / s, k); });
  const MomentKind kind =
      rho.kind() == WalkKind::exterior ? MomentKind::h : MomentKind::g;
  return {kind, affine_moments(centered, c, s)};
}

IdentitySides exterior_series_identity(const MomentVector& h,
                                       const MomentVector& p, double x) {
  if (h.kind != MomentKind::h || p.kind != MomentKind::p)
    throw InvalidInput("exterior series identity needs h and p moments");
  if (!(x != 0.0)) throw DomainError("series identity needs x != 0");
  const int N = std::min(h.max_order(), p.max_order());
  std::vector<double> lhs(h.values.begin(), h.values.begin() + N + 1);
  const double y = 1.0 / x;
  return {horner(lhs, y), horner(exp_series(p, N, 1.0), y)};
}

IdentitySides interior_series_identity(const MomentVector& g,
                                       const MomentVector& p, double center,
                                       double area, double x) {
  if (g.kind != MomentKind::g || p.kind != MomentKind::p)
    throw InvalidInput("interior series identity needs g and p moments");
  if (!(area > 0.0)) throw InvalidInput("series identity needs A > 0");
  if (!(x != 0.0)) throw DomainError("series identity needs x != 0");
  const int M = std::min(g.max_order(), p.max_order() - 2);
  if (M < 0) throw InvalidInput("interior series identity needs p_2");
  std::vector<double> lhs(M + 3, 0.0);
  lhs[0] = 1.0;
  lhs[1] = -center;
  for (int n = 0; n <= M; ++n) lhs[n + 2] = -0.5 * area * g[n];
  const double y = 1.0 / x;
  return {horner(lhs, y), horner(exp_series(p, M + 2, -1.0), y)};
}

}  // namespace hookwalk
