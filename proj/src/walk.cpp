#include "hookwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hookwalk/numerics.hpp"

namespace hookwalk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Ray through (x0, y0) with slope `ray_slope`, followed in direction `dir`
// (-1 left, +1 right).
struct Ray {
  double x0;
  double y0;
  double ray_slope;
  int dir;

  double at(double x) const { return y0 + ray_slope * (x - x0); }
};

double coordinate_scale(const Diagram& d, double x) {
  const Interval I = interval(d);
  return std::max({1.0, std::abs(I.a), std::abs(I.b), std::abs(x)});
}

// Exact piecewise-linear scan for rectangular diagrams.
HookRay rect_ray(const RectangularDiagram& r, const Ray& ray) {
  const auto pts = r.breakpoints();
  const double tol = 64.0 * kEps * coordinate_scale(Diagram{r}, ray.x0);
  auto psi = [&](double x) { return r.evaluate(x) - ray.at(x); };
  auto segment_slope = [&](double x) {
    return ray.dir < 0 ? r.slope_left(x) : r.slope_right(x);
  };
  // Breakpoints strictly beyond x0 in the walking direction, nearest first.
  std::vector<double> ahead;
  if (ray.dir < 0) {
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
      if (*it < ray.x0) ahead.push_back(*it);
  } else {
    for (double p : pts)
      if (p > ray.x0) ahead.push_back(p);
  }

  double contact = std::numeric_limits<double>::quiet_NaN();
  std::size_t next = 0;  // first breakpoint beyond the contact
  double prev = ray.x0;
  double psi_prev = psi(ray.x0);
  if (std::abs(psi_prev) <= tol) {
    contact = ray.x0;
  } else {
    for (; next < ahead.size(); ++next) {
      const double q = ahead[next];
      const double pq = psi(q);
      if (std::abs(pq) <= tol) {
        contact = q;
        ++next;
        break;
      }
      if (std::signbit(pq) != std::signbit(psi_prev)) {
        contact = prev + (q - prev) * psi_prev / (psi_prev - pq);
        break;
      }
      prev = q;
      psi_prev = pq;
    }
    if (std::isnan(contact)) {
      // Outside the support the graph has slope dir and psi is linear.
      const double rel = static_cast<double>(ray.dir) - ray.ray_slope;
      contact = prev - psi_prev / rel;
    }
  }
  // The ray runs along the graph while the segment slope matches its own.
  double end = contact;
  while (next < ahead.size() && segment_slope(end) == ray.ray_slope) {
    end = ahead[next];
    ++next;
  }
  return {contact, end};
}

HookRay root_ray(const Diagram& d, const Ray& ray, double far, bool above) {
  // psi = omega - ray; the ray starts on the side `above` (psi < 0) or
  // below (psi > 0) and psi is strictly monotone towards `far`.
  auto psi = [&](double x) { return evaluate(d, x) - ray.at(x); };
  const double start = psi(ray.x0);
  if (above ? start >= 0.0 : start <= 0.0) return {ray.x0, ray.x0};
  const double pf = psi(far);
  if (above ? pf <= 0.0 : pf >= 0.0) return {far, far};
  const double tol = 4.0 * kEps * coordinate_scale(d, ray.x0);
  const double lo = std::min(ray.x0, far);
  const double hi = std::max(ray.x0, far);
  const double root = numerics::find_root_bracketed(psi, lo, hi, tol);
  return {root, root};
}

HookRay hook_ray(const Diagram& d, const Ray& ray, bool above) {
  if (const auto* r = std::get_if<RectangularDiagram>(&d)) return rect_ray(*r, ray);
  const Interval I = interval(d);
  return root_ray(d, ray, ray.dir < 0 ? I.a : I.b, above);
}

struct Point {
  double x;
  double y;
};

// Samples the walk from p. `exterior` selects downward hooks and the sign of
// the vertical distance.
WalkSample run_walk(const Diagram& d, Point p, bool exterior,
                    const WalkConfig& cfg, SplitMix64& rng) {
  WalkSample out;
  const double vsign = exterior ? -1.0 : 1.0;
  auto distance = [&](const Point& q) {
    return exterior ? q.y - evaluate(d, q.x) : evaluate(d, q.x) - q.y;
  };
  // A start on the graph has no step rule; it is its own limit.
  if (distance(p) < cfg.stop_epsilon) {
    out.limit_x = p.x;
    return out;
  }
  // Beside a slope +-1 side the vertical distance is small while the hook is
  // long, so exact rectangular hooks stop on their own length instead.
  const bool by_hook = std::holds_alternative<RectangularDiagram>(d);
  for (;;) {
    if (out.steps_taken >= cfg.max_steps) {
      out.truncated = true;
      out.limit_x = p.x;
      return out;
    }
    const Hook h = exterior ? exterior_hook(d, p.x, p.y) : interior_hook(d, p.x, p.y);
    const double left = p.x - h.left.end;
    const double right = h.right.end - p.x;
    const double total = left + right;
    if (!(total > 0.0) || (by_hook && total < cfg.stop_epsilon)) {
      out.limit_x = p.x;
      return out;
    }
    const double u = rng.uniform() * total;
    ++out.steps_taken;
    double nx;
    if (u < left) {
      nx = p.x - u;
      // On the overlap the walk slides to its far end.
      if (nx <= h.left.contact && h.left.end < h.left.contact) {
        out.limit_x = h.left.end;
        return out;
      }
      p = {nx, p.y + vsign * u};
    } else {
      const double v = u - left;
      nx = p.x + v;
      if (nx >= h.right.contact && h.right.end > h.right.contact) {
        out.limit_x = h.right.end;
        return out;
      }
      p = {nx, p.y + vsign * v};
    }
    if (!by_hook && distance(p) < cfg.stop_epsilon) {
      out.limit_x = p.x;
      return out;
    }
  }
}

}  // namespace

void WalkConfig::validate() const {
  if (!(stop_epsilon > 0.0) || !std::isfinite(stop_epsilon))
    throw InvalidInput("walk stop epsilon must be positive");
  if (max_steps < 1) throw InvalidInput("walk max steps must be positive");
}

SplitMix64::SplitMix64(std::uint64_t master_seed, std::uint64_t stream)
    : state_(mix64(master_seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL))) {}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Hook exterior_hook(const Diagram& d, double x, double y) {
  return {hook_ray(d, {x, y, 1.0, -1}, true), hook_ray(d, {x, y, -1.0, 1}, true)};
}

Hook interior_hook(const Diagram& d, double x, double y) {
  return {hook_ray(d, {x, y, -1.0, -1}, false), hook_ray(d, {x, y, 1.0, 1}, false)};
}

WalkSample exterior_walk_sample(const Diagram& d, const WalkConfig& cfg,
                                std::uint64_t sample_index) {
  cfg.validate();
  const Interval I = interval(d);
  const double wa = evaluate(d, I.a);
  const double wb = evaluate(d, I.b);
  SplitMix64 rng(cfg.master_seed, sample_index);
  return run_walk(d, {I.b - wa, wa + wb}, true, cfg, rng);
}

WalkSample interior_walk_sample(const Diagram& d, const WalkConfig& cfg,
                                std::uint64_t sample_index) {
  cfg.validate();
  Interval box = interval(d);
  if (const auto* r = std::get_if<RectangularDiagram>(&d)) {
    if (r->is_trivial()) throw DomainError("interior walk needs positive area");
    box = {r->minima().front(), r->minima().back()};
  }
  const double z = center(d);
  SplitMix64 rng(cfg.master_seed, sample_index);
  for (;;) {
    const double x = box.a + box.length() * rng.uniform();
    const double y = box.length() * rng.uniform();
    if (y > std::abs(x - z) && y < evaluate(d, x))
      return run_walk(d, {x, y}, false, cfg, rng);
  }
}

WalkSample walk_sample(const Diagram& d, WalkKind kind, const WalkConfig& cfg,
                       std::uint64_t sample_index) {
  return kind == WalkKind::exterior ? exterior_walk_sample(d, cfg, sample_index)
                                    : interior_walk_sample(d, cfg, sample_index);
}

namespace {

WalkSample run_unrotated(const UnrotatedDiagram& f, double s, double t,
                         const WalkConfig& cfg, SplitMix64& rng) {
  WalkSample out;
  for (;;) {
    if (f.evaluate(s) - t < cfg.stop_epsilon) {
      out.limit_x = s;
      return out;
    }
    if (out.steps_taken >= cfg.max_steps) {
      out.truncated = true;
      out.limit_x = s;
      return out;
    }
    const double left = s - f.inverse(t);
    const double up = f.evaluate(s) - t;
    const double u = rng.uniform() * (left + up);
    ++out.steps_taken;
    if (u < left)
      s -= u;
    else
      t += u - left;
  }
}

}  // namespace

WalkSample interior_walk_from(const UnrotatedDiagram& f, double s, double t,
                              const WalkConfig& cfg, std::uint64_t sample_index) {
  cfg.validate();
  const Interval I = f.interval();
  if (!(s > I.a && s <= I.b) || !(t >= 0.0 && t <= f.evaluate(s)))
    throw DomainError("walk start must satisfy a < s <= b, 0 <= t <= f(s)");
  SplitMix64 rng(cfg.master_seed, sample_index);
  return run_unrotated(f, s, t, cfg, rng);
}

WalkSample unrotated_interior_walk(const UnrotatedDiagram& f,
                                   const WalkConfig& cfg,
                                   std::uint64_t sample_index) {
  cfg.validate();
  const Interval I = f.interval();
  SplitMix64 rng(cfg.master_seed, sample_index);
  for (;;) {
    const double x = I.a + I.length() * rng.uniform();
    const double y = f.top() * rng.uniform();
    if (x > I.a && y < f.evaluate(x)) return run_unrotated(f, x, y, cfg, rng);
  }
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCDF::fraction_in(double lo, double hi) const {
  if (sorted_.empty() || hi < lo) return 0.0;
  const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), lo);
  const auto last = std::upper_bound(sorted_.begin(), sorted_.end(), hi);
  return static_cast<double>(last - first) / static_cast<double>(sorted_.size());
}

EmpiricalCDF Simulation::cdf() const {
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const auto& s : samples) xs.push_back(s.limit_x);
  return EmpiricalCDF(std::move(xs));
}

Simulation simulate(const std::function<WalkSample(std::uint64_t)>& sampler,
                    std::size_t n_samples, int threads) {
  if (n_samples == 0) throw InvalidInput("simulation needs at least one sample");
  Simulation sim;
  sim.samples.resize(n_samples);
  numerics::parallel_for(n_samples, threads, 256,
                         [&](std::size_t begin, std::size_t end) {
                           for (std::size_t i = begin; i < end; ++i)
                             sim.samples[i] = sampler(i);
                         });
  for (const auto& s : sim.samples)
    if (s.truncated) ++sim.truncated;
  return sim;
}

Simulation simulate(const Diagram& d, WalkKind kind, std::size_t n_samples,
                    const WalkConfig& cfg, int threads) {
  cfg.validate();
  if (kind == WalkKind::interior)
    if (const auto* r = std::get_if<RectangularDiagram>(&d); r && r->is_trivial())
      throw DomainError("interior walk needs positive area");
  return simulate(
      [&](std::uint64_t i) { return walk_sample(d, kind, cfg, i); }, n_samples,
      threads);
}

std::function<double(double)> tabulate_cdf(
    const std::function<double(double)>& cdf, Interval I, int n) {
  I.validate();
  if (n < 2) throw InvalidInput("cdf table needs at least 2 cells");
  const double c = 0.5 * (I.a + I.b);
  const double s = 0.5 * I.length();
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = c - s * std::cos(std::numbers::pi * i / n);
    if (i == 0) xs[i] = I.a;
    if (i == n) xs[i] = I.b;
  }
  fs.front() = 0.0;
  fs.back() = 1.0;
  for (int i = 1; i < n; ++i) fs[i] = std::clamp(cdf(xs[i]), 0.0, 1.0);
  return [xs = std::move(xs), fs = std::move(fs)](double x) {
    if (x <= xs.front()) return 0.0;
    if (x >= xs.back()) return 1.0;
    const auto k = static_cast<std::size_t>(
        std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return fs[k - 1] + t * (fs[k] - fs[k - 1]);
  };
}

double ks_distance(const EmpiricalCDF& e,
                   const std::function<double(double)>& analytic_cdf) {
  const auto& xs = e.sorted();
  const double n = static_cast<double>(xs.size());
  if (xs.empty()) throw InvalidInput("ks distance needs samples");
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    // Left limits on the left side so atoms of the analytic law count once.
    const double before = analytic_cdf(std::nextafter(xs[i], -HUGE_VAL));
    const double at = analytic_cdf(xs[i]);
    d = std::max({d, std::abs(before - static_cast<double>(i) / n),
                  std::abs(at - static_cast<double>(j) / n)});
    i = j;
  }
  return d;
}

}  // namespace hookwalk
