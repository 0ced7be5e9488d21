#pragma once

#include <vector>

namespace hookwalk {

//! Fractional parts of the roots of p_n' for p_n(t) = t(t-1)...(t-n): the
//! k-th root lies at k + lambdas[k], k = 0..n-1.
struct RootProfile {
  int n = 0;
  std::vector<double> lambdas;
};

constexpr int kMaxRootDegree = 100000;

//! Roots of sum_{j=0}^n 1/(x - j) on each (k, k+1), by bracketed root finding
//! in the offset t = x - k. Compensated direct sums up to n = 4096, digamma
//! differences beyond.
RootProfile derivative_root_fractional_parts(int n, int threads = 1);

//! (1/pi) arccot((1/pi) log((1 - x)/x)) for 0 < x < 1.
double limit_curve(double x);

//! max over k/n in [lo, hi] of |lambda_{n,k} - limit_curve(k/n)|.
double limit_curve_error(const RootProfile& r, double lo = 0.1, double hi = 0.9);

}  // namespace hookwalk
