#pragma once

#include <vector>

#include "hookwalk/diagram.hpp"
#include "hookwalk/transition.hpp"

namespace hookwalk {

enum class MomentKind { p, h, g };

const char* to_string(MomentKind k);

//! Charge moments p_1..p_N or measure moments h_0..h_N / g_0..g_N.
struct MomentVector {
  MomentKind kind = MomentKind::p;
  std::vector<double> values;

  int first_index() const { return kind == MomentKind::p ? 1 : 0; }
  int max_order() const {
    return first_index() + static_cast<int>(values.size()) - 1;
  }
  //! Moment of order n (first_index() <= n <= max_order()).
  double operator[](int n) const;
};

constexpr int kMaxMomentOrder = 40;

//! p_n = -n int u^{n-1} dsigma(u), n = 1..N. Exact power sums for rectangular
//! and piecewise-linear diagrams, quadrature on [-1, 1] after centering for
//! smooth ones.
MomentVector p_moments(const Diagram& d, int N,
                       const numerics::QuadratureConfig& cfg = {});

//! h_n from the partition sum over rho |- n, n = 0..max order of p.
MomentVector h_from_p(const MomentVector& p);
//! g_{n-2} = (2/A) sum (-1)^{|rho|+1} prod (p_k/k)^{rho_k} / rho_k!, giving
//! g_0..g_{N-2}. Requires A > 0 and N >= 2.
MomentVector g_from_p(const MomentVector& p, double area);
//! Inverse of h_from_p order by order.
MomentVector p_from_h(const MomentVector& h);

//! sum_k w_k x_k^n.
MomentVector measure_moments(const AtomicMeasure& m, int N,
                             MomentKind kind = MomentKind::h);
//! Exact moments of the interpolated grid density and its power-law tails.
MomentVector measure_moments(const DensityGrid& g, int N);
//! Quadrature of u^n against the density.
MomentVector measure_moments(const TransitionDensity& rho, int N);

//! Coefficient-truncated generating functions at x: the h series against the
//! power series of exp(sum p_k x^{-k} / k) cut at the same order.
IdentitySides exterior_series_identity(const MomentVector& h,
                                       const MomentVector& p, double x);
//! 1 - z/x - (A/2) sum g_n x^{-(n+2)} against exp(-sum p_k x^{-k} / k) cut at
//! order max_order(g) + 2.
IdentitySides interior_series_identity(const MomentVector& g,
                                       const MomentVector& p, double center,
                                       double area, double x);

//! Moments of u = c + s v from moments m'_0..m'_N of v (m'_0 included).
std::vector<double> affine_moments(const std::vector<double>& centered,
                                   double c, double s);

}  // namespace hookwalk
