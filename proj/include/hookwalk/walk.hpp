#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hookwalk/diagram.hpp"
#include "hookwalk/transition.hpp"

namespace hookwalk {

//! A walk stops once its point is within stop_epsilon of the graph
//! vertically; on rectangular diagrams once the hook is shorter than that.
struct WalkConfig {
  double stop_epsilon = 1e-9;
  int max_steps = 10000;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct WalkSample {
  double limit_x = 0.0;
  int steps_taken = 0;
  bool truncated = false;
};

//! SplitMix64 stream keyed by (master seed, sample index).
class SplitMix64 {
 public:
  SplitMix64(std::uint64_t master_seed, std::uint64_t stream);
  std::uint64_t next();
  //! Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

//! One hook ray run until it meets the graph. `contact` is the first point of
//! the graph on the ray; when the ray runs along a slope +-1 piece of the
//! graph from there, `end` is the far end of that overlap (else contact).
struct HookRay {
  double contact;
  double end;
};

struct Hook {
  HookRay left;
  HookRay right;
};

//! The exterior hook (rays down-left and down-right) of a point on or above
//! the graph.
Hook exterior_hook(const Diagram& d, double x, double y);
//! The interior hook (rays up-left and up-right) of a point on or below the
//! graph.
Hook interior_hook(const Diagram& d, double x, double y);

//! Starts at the dual-domain corner (b - w(a), w(a) + w(b)).
WalkSample exterior_walk_sample(const Diagram& d, const WalkConfig& cfg,
                                std::uint64_t sample_index);
//! Starts at an area-uniform point of the domain; throws for the trivial
//! diagram.
WalkSample interior_walk_sample(const Diagram& d, const WalkConfig& cfg,
                                std::uint64_t sample_index);
WalkSample walk_sample(const Diagram& d, WalkKind kind, const WalkConfig& cfg,
                       std::uint64_t sample_index);

//! Interior walk of an unrotated diagram from (s, t), hooks going left to the
//! graph and up to it.
WalkSample interior_walk_from(const UnrotatedDiagram& f, double s, double t,
                              const WalkConfig& cfg, std::uint64_t sample_index);
//! Same walk from an area-uniform start under the graph.
WalkSample unrotated_interior_walk(const UnrotatedDiagram& f,
                                   const WalkConfig& cfg,
                                   std::uint64_t sample_index);

class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> samples);

  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t count() const { return sorted_.size(); }
  //! Fraction of samples <= x.
  double operator()(double x) const;
  //! Fraction of samples in [lo, hi].
  double fraction_in(double lo, double hi) const;

 private:
  std::vector<double> sorted_;
};

struct Simulation {
  std::vector<WalkSample> samples;
  std::size_t truncated = 0;

  EmpiricalCDF cdf() const;
};

//! Samples 0..n-1 on up to `threads` workers (0: the default count). Output does not depend on the worker count.
Simulation simulate(const std::function<WalkSample(std::uint64_t)>& sampler,
                    std::size_t n_samples, int threads = 0);
Simulation simulate(const Diagram& d, WalkKind kind, std::size_t n_samples,
                    const WalkConfig& cfg, int threads = 0);

//! Piecewise-linear table of a CDF on n + 1 Chebyshev-spaced points of I,
//! clamped to 0 and 1 outside.
std::function<double(double)> tabulate_cdf(
    const std::function<double(double)>& cdf, Interval I, int n = 2000);

//! sup of |empirical - analytic| over the sample points and their left
//! limits.
double ks_distance(const EmpiricalCDF& e,
                   const std::function<double(double)>& analytic_cdf);

}  // namespace hookwalk
