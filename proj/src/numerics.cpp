#include "hookwalk/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>
#include <string>

namespace hookwalk::numerics {

namespace {

constexpr double kPi = std::numbers::pi;

// tanh-sinh node at abscissa t for an interval of half-width radius.
struct DeNode {
  double from_lo;
  double to_hi;
  double weight;
};

DeNode de_node(double t, double radius) {
  const double q = 0.5 * kPi * std::sinh(t);
  const double e = std::exp(-2.0 * std::abs(q));
  const double near = radius * 2.0 * e / (1.0 + e);
  const double far = radius * 2.0 / (1.0 + e);
  const double weight =
      radius * 0.5 * kPi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
  if (t >= 0.0) return {far, near, weight};
  return {near, far, weight};
}

double node_abscissa(double lo, double hi, const DeNode& n) {
  return n.from_lo <= n.to_hi ? lo + n.from_lo : hi - n.to_hi;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2))
    throw InvalidInput("quadrature tolerance must lie in (0, 1e-2]");
  if (max_levels < 3 || max_levels > 20)
    throw InvalidInput("quadrature refinement levels must lie in [3, 20]");
}

double integrate_endpoint_singular(const EdgeIntegrand& f, double lo,
                                   double hi, double alpha, double beta,
                                   const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw InvalidInput("endpoint exponents must exceed -1");
  if (!(lo < hi)) {
    if (lo == hi) return 0.0;
    throw InvalidInput("integration interval must satisfy lo <= hi");
  }
  // Nodes reach ~1e-300 of the interval length for singular integrands and
  // ~1e-37 otherwise.
  const double t_max = std::min(alpha, beta) < 0.0 ? 6.0 : 4.0;
  const double radius = 0.5 * (hi - lo);

  double total = 0.0;
  double total_abs = 0.0;
  auto accumulate = [&](double t) {
    const DeNode n = de_node(t, radius);
    if (n.weight == 0.0 || n.from_lo == 0.0 || n.to_hi == 0.0) return;
    const double v = f(node_abscissa(lo, hi, n), n.from_lo, n.to_hi);
    total += n.weight * v;
    total_abs += n.weight * std::abs(v);
  };

  for (int j = -static_cast<int>(t_max); j <= static_cast<int>(t_max); ++j)
    accumulate(static_cast<double>(j));
  double h = 1.0;
  double previous = total * h;
  for (int level = 1; level <= cfg.max_levels; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2.0 * h) {
      accumulate(t);
      accumulate(-t);
    }
    const double current = total * h;
    if (!std::isfinite(current))
      throw ConvergenceError("quadrature produced a non-finite value",
                             previous, current);
    const double err = std::abs(current - previous);
    // Cancelling integrands are judged against their L1 norm.
    const double floor = std::max(1e-4 * cfg.rel_tol, 1e-14) * total_abs * h;
    if (level >= 3 && (err <= cfg.rel_tol * std::abs(current) || err <= floor))
      return current;
    if (level == cfg.max_levels)
      throw ConvergenceError("quadrature did not converge within " +
                                 std::to_string(cfg.max_levels) + " levels",
                             previous, current);
    previous = current;
  }
  return previous;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureConfig& cfg) {
  return integrate_endpoint_singular(
      [&](double x, double, double) {
        if (x <= lo || x >= hi) return 0.0;
        return f(x);
      },
      lo, hi, -0.5, -0.5, cfg);
}

double quotient_integral(const std::function<double(double)>& f, double fx,
                         double x, double lo, double hi,
                         const RemovableLimit& limit,
                         const QuadratureConfig& cfg) {
  if (!(lo <= hi)) throw InvalidInput("quotient integral needs lo <= hi");
  // Below this distance the difference quotient is dominated by rounding.
  const double cutoff =
      1e-6 * std::max({hi - lo, std::abs(x), std::abs(lo), std::abs(hi)});
  auto near_value = [&](double u) {
    return limit.derivative ? limit.derivative(0.5 * (u + x))
                            : limit.value_at_x;
  };
  auto short_piece = [&](double l, double r) {
    return near_value(0.5 * (l + r)) * (r - l);
  };
  // Left of x: u = x - d; right of x: u = x + d.
  auto left = [&](double, double, double d) {
    if (d < cutoff) return near_value(x - d);
    return (f(x - d) - fx) / (-d);
  };
  auto right = [&](double, double d, double) {
    if (d < cutoff) return near_value(x + d);
    return (f(x + d) - fx) / d;
  };
  if (x <= lo) {
    const double gap = lo - x;
    return integrate_endpoint_singular(
        [&](double u, double from_lo, double to_hi) {
          return right(u, gap + from_lo, to_hi);
        },
        lo, hi, -0.5, -0.5, cfg);
  }
  if (x >= hi) {
    const double gap = x - hi;
    return integrate_endpoint_singular(
        [&](double u, double from_lo, double to_hi) {
          return left(u, from_lo, gap + to_hi);
        },
        lo, hi, -0.5, -0.5, cfg);
  }
  const double below = x - lo < cutoff
                           ? short_piece(lo, x)
                           : integrate_endpoint_singular(left, lo, x, -0.5, -0.5, cfg);
  const double above = hi - x < cutoff
                           ? short_piece(x, hi)
                           : integrate_endpoint_singular(right, x, hi, -0.5, -0.5, cfg);
  return below + above;
}

double difference_quotient_integral(const std::function<double(double)>& f,
                                    double fprime_at_x, double x, double lo,
                                    double hi, const QuadratureConfig& cfg) {
  if (!(lo < x && x < hi))
    throw DomainError("difference quotient point must be interior");
  return quotient_integral(f, f(x), x, lo, hi, {nullptr, fprime_at_x}, cfg);
}

void StepFunction::validate() const {
  if (values.empty() || edges.size() != values.size() + 1)
    throw InvalidInput("step function needs one more edge than values");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i] < edges[i + 1]))
      throw InvalidInput("step function edges must be strictly increasing");
}

std::size_t StepFunction::step_index(double x) const {
  if (x < edges.front() || x > edges.back())
    throw DomainError("point outside step function support");
  // First edge >= x closes the step on its left.
  auto it = std::lower_bound(edges.begin() + 1, edges.end(), x);
  if (it == edges.end()) --it;
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

double difference_quotient_integral_step(const StepFunction& f, double x) {
  f.validate();
  const std::size_t own = f.step_index(x);
  const double fx = f.values[own];
  double sum = 0.0;
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    if (j == own || f.values[j] == fx) continue;
    const double s = f.edges[j];
    const double e = f.edges[j + 1];
    sum += (f.values[j] - fx) *
           (std::log(std::abs(e - x)) - std::log(std::abs(s - x)));
  }
  return sum;
}

StepFunction step_approximation(const std::function<double(double)>& g,
                                std::span<const double> pieces, int n,
                                const QuadratureConfig& cfg) {
  if (pieces.size() < 2) throw InvalidInput("need at least one piece");
  if (n < 0 || n > 30) throw InvalidInput("refinement exponent out of range");
  const std::size_t parts = std::size_t{1} << n;
  StepFunction out;
  out.edges.push_back(pieces.front());
  for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
    const double s = pieces[p];
    const double e = pieces[p + 1];
    if (!(s < e)) throw InvalidInput("pieces must be strictly increasing");
    for (std::size_t k = 0; k < parts; ++k) {
      const double l = s + (e - s) * static_cast<double>(k) / parts;
      const double r = k + 1 == parts
                           ? e
                           : s + (e - s) * static_cast<double>(k + 1) / parts;
      out.values.push_back(integrate(g, l, r, cfg) / (r - l));
      out.edges.push_back(r);
    }
  }
  return out;
}

double find_root_bracketed(const std::function<double(double)>& g, double lo,
                           double hi, double tol) {
  double a = lo;
  double b = hi;
  double fa = g(a);
  double fb = g(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb))
    throw InvalidInput("find_root_bracketed: no sign change on bracket");
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a;
  double fc = fa;
  double d = 0.0;
  bool bisected = true;
  for (int iter = 0; iter < 300; ++iter) {
    if (std::abs(b - a) < tol) return b;
    double s;
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) +
          b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double mid = 0.5 * (3.0 * a + b) / 2.0;
    const bool outside = !((s > std::min(mid, b) && s < std::max(mid, b)));
    const bool slow =
        (bisected && std::abs(s - b) >= 0.5 * std::abs(b - c)) ||
        (!bisected && std::abs(s - b) >= 0.5 * std::abs(c - d)) ||
        (bisected && std::abs(b - c) < tol) ||
        (!bisected && std::abs(c - d) < tol);
    if (outside || slow) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    const double fs = g(s);
    if (fs == 0.0) return s;
    d = c;
    c = b;
    fc = fb;
    if (std::signbit(fa) != std::signbit(fs)) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return b;
}

int Partition::total() const {
  int n = 0;
  for (auto [k, m] : multiplicities) n += k * m;
  return n;
}

int Partition::part_count() const {
  int n = 0;
  for (auto [k, m] : multiplicities) n += m;
  return n;
}

namespace {

void extend_partitions(int remaining, int max_part, std::vector<int>& parts,
                       std::vector<Partition>& out) {
  if (remaining == 0) {
    Partition p;
    // parts are non-increasing; emit ascending multiplicities.
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      if (!p.multiplicities.empty() && p.multiplicities.back().first == *it)
        ++p.multiplicities.back().second;
      else
        p.multiplicities.emplace_back(*it, 1);
    }
    out.push_back(std::move(p));
    return;
  }
  for (int k = std::min(remaining, max_part); k >= 1; --k) {
    parts.push_back(k);
    extend_partitions(remaining - k, k, parts, out);
    parts.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions(int n) {
  if (n < 1 || n > 40) throw InvalidInput("partitions: n must lie in [1, 40]");
  std::vector<Partition> out;
  std::vector<int> parts;
  extend_partitions(n, n, parts, out);
  return out;
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    compensation_ += (sum_ - t) + v;
  else
    compensation_ += (v - t) + sum_;
  sum_ = t;
}

double arccot(double y) {
  // atan(1/y) keeps full relative accuracy as the value approaches 0.
  if (y >= 1.0) return std::atan(1.0 / y);
  return 0.5 * kPi - std::atan(y);
}

int default_thread_count() {
  if (const char* env = std::getenv("HOOKWALK_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int threads, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads < 0) throw InvalidInput("thread count must be non-negative");
  if (threads == 0) threads = default_thread_count();
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, chunks));
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      while (!failed.load()) {
        const std::size_t start = cursor.fetch_add(chunk);
        if (start >= n) return;
        body(start, std::min(n, start + chunk));
      }
    } catch (...) {
      errors[w] = std::current_exception();
      failed.store(true);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hookwalk::numerics
