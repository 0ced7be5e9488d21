#pragma once

#include <vector>

#include "hookwalk/diagram.hpp"
#include "hookwalk/numerics.hpp"
#include "hookwalk/transition.hpp"

namespace hookwalk {

//! Area and center of the diagram an interior measure is inverted into. The
//! interior measure alone does not fix them.
struct InteriorInverseParams {
  double area = 1.0;
  double center = 0.0;

  void validate() const;
};

//! Minima at the atoms, maxima at the roots of sum w_k / (x - x_k) between
//! consecutive atoms.
RectangularDiagram rect_from_exterior_atoms(const AtomicMeasure& m);

//! Maxima at the atoms, minima at the roots of
//! -(A/2) sum w_k / (x - y_k) + x - z.
RectangularDiagram rect_from_interior_atoms(const AtomicMeasure& m,
                                            const InteriorInverseParams& p);

//! Integral of (g(u) - g(x)) / (u - x) over the interval of a gridded density
//! (linear between grid points, power-law tails). x must lie in
//! [grid.front(), grid.back()].
double grid_quotient_integral(const DensityGrid& g, double x,
                              const numerics::QuadratureConfig& cfg = {});

double slope_from_exterior_density(const DensityGrid& g, double x,
                                   const numerics::QuadratureConfig& cfg = {});
double slope_from_interior_density(const DensityGrid& h,
                                   const InteriorInverseParams& p, double x,
                                   const numerics::QuadratureConfig& cfg = {});
//! Step densities use the closed-form quotient integral over their support.
double slope_from_exterior_density(const numerics::StepFunction& g, double x);
double slope_from_interior_density(const numerics::StepFunction& h,
                                   const InteriorInverseParams& p, double x);

struct SlopeFunction {
  std::vector<double> grid;
  std::vector<double> values;
  Interval interval;

  void validate() const;
};

//! Slopes recovered at every grid point (interior kind needs params).
SlopeFunction recover_slopes(const DensityGrid& g,
                             const numerics::QuadratureConfig& cfg = {});
SlopeFunction recover_slopes(const DensityGrid& h,
                             const InteriorInverseParams& p,
                             const numerics::QuadratureConfig& cfg = {});

//! Each grid value holds on its nearest-point cell; omega(a) is chosen so the
//! hinge condition holds.
PiecewiseLinearDiagram diagram_from_slopes(const SlopeFunction& s);

}  // namespace hookwalk
