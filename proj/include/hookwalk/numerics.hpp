#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hookwalk/errors.hpp"

//! Quadrature, root finding and combinatorics shared by every other module.
namespace hookwalk::numerics {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  int max_levels = 12;

  void validate() const;
};

//! Integrand that also receives the exact distances of the node to both ends
//! of the integration interval. Endpoint-singular factors such as
//! (x - lo)^alpha must be computed from these, never from x - lo.
using EdgeIntegrand =
    std::function<double(double x, double from_lo, double to_hi)>;

//! Double-exponential (tanh-sinh) quadrature of an integrand with integrable
//! power-type singularities at the ends. alpha and beta are the endpoint
//! exponents of the full integrand (> -1); they only steer how far the node
//! set reaches into the endpoints.
double integrate_endpoint_singular(const EdgeIntegrand& f, double lo,
                                   double hi, double alpha, double beta,
                                   const QuadratureConfig& cfg = {});

//! Plain integrand convenience overload (nodes that round onto an endpoint
//! are skipped).
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureConfig& cfg = {});

//! Limit used for the quotient (f(u) - f(x)) / (u - x) when u is within the
//! cancellation cutoff of x. If `derivative` is set it is evaluated at the
//! midpoint of u and x; otherwise `value_at_x` is used.
struct RemovableLimit {
  std::function<double(double)> derivative;
  double value_at_x = 0.0;
};

//! Integral of (f(u) - fx) / (u - x) over [lo, hi]. x may lie anywhere; when
//! it is interior the interval is split there so nodes cluster at the
//! removable singularity.
double quotient_integral(const std::function<double(double)>& f, double fx,
                         double x, double lo, double hi,
                         const RemovableLimit& limit,
                         const QuadratureConfig& cfg = {});

//! Integral of (f(u) - f(x)) / (u - x) over [lo, hi] for x in (lo, hi).
double difference_quotient_integral(const std::function<double(double)>& f,
                                    double fprime_at_x, double x, double lo,
                                    double hi, const QuadratureConfig& cfg = {});

//! Piecewise-constant function: values[i] holds on [edges[i], edges[i+1]].
struct StepFunction {
  std::vector<double> edges;
  std::vector<double> values;

  void validate() const;
  double lo() const { return edges.front(); }
  double hi() const { return edges.back(); }
  //! Index of the step containing x; at an interior boundary the left step.
  std::size_t step_index(double x) const;
  double operator()(double x) const { return values[step_index(x)]; }
};

//! Closed form of the integral of (f(u) - f(x)) / (u - x) over the support of
//! a step function. At a step boundary the left step supplies f(x), so the
//! result is infinite when the neighbouring values differ.
double difference_quotient_integral_step(const StepFunction& f, double x);

//! Splits each piece [pieces[i], pieces[i+1]] into 2^n equal parts and
//! averages g over each part.
StepFunction step_approximation(const std::function<double(double)>& g,
                                std::span<const double> pieces, int n,
                                const QuadratureConfig& cfg = {});

//! Brent's method (bisection safeguarded inverse quadratic interpolation).
//! Requires a sign change on [lo, hi]; returns once the bracket is < tol.
double find_root_bracketed(const std::function<double(double)>& g, double lo,
                           double hi, double tol);

//! Partition of n as multiplicities: (part k, count rho_k), k ascending.
struct Partition {
  std::vector<std::pair<int, int>> multiplicities;

  int total() const;
  int part_count() const;
};

//! All partitions of n exactly once, 1 <= n <= 40.
std::vector<Partition> partitions(int n);

//! Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

//! arccot valued in (0, pi), continuous in its argument.
double arccot(double y);

//! Worker count from HOOKWALK_THREADS, else hardware concurrency.
int default_thread_count();

//! Calls body(begin, end) on chunks of [0, n) from up to `threads` workers
//! (0: default_thread_count()). The first exception thrown is rethrown.
void parallel_for(std::size_t n, int threads, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace hookwalk::numerics
