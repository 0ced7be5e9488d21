#include "hookwalk/polyroots.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>

#include "hookwalk/errors.hpp"
#include "hookwalk/numerics.hpp"

namespace hookwalk {

namespace {

constexpr int kDirectLimit = 4096;

// sum_{i=0}^{k} 1/(t + i) - sum_{i=0}^{n-k-1} 1/(1 - t + i), decreasing in t
// on (0, 1).
double offset_sum(int n, int k, double t) {
  if (n <= kDirectLimit) {
    numerics::CompensatedSum s;
    // Smallest terms first.
    for (int i = k; i >= 0; --i) s.add(1.0 / (t + i));
    for (int i = n - k - 1; i >= 0; --i) s.add(-1.0 / (1.0 - t + i));
    return s.value();
  }
  using boost::math::digamma;
  // psi(t + k + 1) - psi(n - k + 1 - t) is the only large cancellation.
  return (digamma(t + k + 1.0) - digamma(n - k + 1.0 - t)) +
         (digamma(1.0 - t) - digamma(t));
}

double root_offset(int n, int k) {
  auto f = [&](double t) { return offset_sum(n, k, t); };
  double lo = 0.5, hi = 0.5;
  while (f(lo) <= 0.0) lo *= 0.5;
  while (f(hi) >= 0.0) hi = 1.0 - 0.5 * (1.0 - hi);
  return numerics::find_root_bracketed(f, lo, hi, 1e-15);
}

}  // namespace

RootProfile derivative_root_fractional_parts(int n, int threads) {
  if (n < 1 || n > kMaxRootDegree)
    throw InvalidInput("root profile needs 1 <= n <= 100000");
  RootProfile r{n, std::vector<double>(static_cast<std::size_t>(n))};
  numerics::parallel_for(static_cast<std::size_t>(n), threads, 64,
                         [&](std::size_t begin, std::size_t end) {
                           for (std::size_t k = begin; k < end; ++k)
                             r.lambdas[k] = root_offset(n, static_cast<int>(k));
                         });
  return r;
}

double limit_curve(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("limit curve needs 0 < x < 1");
  constexpr double pi = std::numbers::pi;
  return numerics::arccot(std::log((1.0 - x) / x) / pi) / pi;
}

double limit_curve_error(const RootProfile& r, double lo, double hi) {
  if (!(0.0 < lo && lo <= hi && hi < 1.0))
    throw InvalidInput("limit curve window must satisfy 0 < lo <= hi < 1");
  double err = 0.0;
  for (int k = 0; k < r.n; ++k) {
    const double x = static_cast<double>(k) / r.n;
    if (x < lo || x > hi) continue;
    err = std::max(err, std::abs(r.lambdas[k] - limit_curve(x)));
  }
  return err;
}

}  // namespace hookwalk
