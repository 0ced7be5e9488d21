#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hookwalk/diagram.hpp"
#include "hookwalk/numerics.hpp"

namespace hookwalk {

enum class WalkKind { exterior, interior };

WalkKind parse_walk_kind(const std::string& s);
const char* to_string(WalkKind k);

struct AtomicMeasure {
  std::vector<double> locations;
  std::vector<double> weights;

  //! Strictly increasing locations, positive weights, total mass 1 to
  //! 1e-12 (scaled up by n/16 for more than 16 atoms).
  void validate() const;
  std::size_t size() const { return locations.size(); }
  double cdf(double x) const;
};

AtomicMeasure exterior_atoms(const RectangularDiagram& d);
//! Throws InvalidInput for the trivial diagram.
AtomicMeasure interior_atoms(const RectangularDiagram& d);
//! Same weights through the telescoped products (1 -+ gap / distance).
AtomicMeasure exterior_atoms_factored(const RectangularDiagram& d);
AtomicMeasure interior_atoms_factored(const RectangularDiagram& d);

//! Interval of smoothness of a density with the power-law exponents at its
//! two ends.
struct DensityPiece {
  double lo;
  double hi;
  double left_exponent;
  double right_exponent;
};

//! Transition density of a piecewise-linear or smooth diagram.
class TransitionDensity {
 public:
  TransitionDensity(Diagram d, WalkKind kind,
                    numerics::QuadratureConfig cfg = {});

  WalkKind kind() const { return kind_; }
  const Diagram& diagram() const { return *diagram_; }
  Interval interval() const { return hookwalk::interval(*diagram_); }
  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  const numerics::QuadratureConfig& config() const { return cfg_; }

  //! Density at x in (a, b); breakpoints and outside points throw.
  double operator()(double x) const;
  //! Density on piece i at the point with the given distances to its ends.
  double on_piece(std::size_t i, double from_lo, double to_hi) const;
  //! Integral of weight(x) times the density over (a, b).
  double integrate(const std::function<double(double)>& weight) const;
  double mass() const;
  double cdf(double x) const;

 private:
  double smooth_value(const SmoothDiagram& s, double x, double from_a,
                      double to_b) const;
  double linear_value(const PiecewiseLinearDiagram& p, std::size_t k,
                      double from_lo, double to_hi) const;

  std::shared_ptr<const Diagram> diagram_;
  WalkKind kind_;
  numerics::QuadratureConfig cfg_;
  std::vector<DensityPiece> pieces_;
  // Piecewise-linear data: exponent attached to every knot.
  std::vector<double> knot_exponents_;
  double prefactor_ = 1.0;
};

double exterior_density(const Diagram& d, double x,
                        const numerics::QuadratureConfig& cfg = {});
double interior_density(const Diagram& d, double x,
                        const numerics::QuadratureConfig& cfg = {});

//! Density values on open-interval grid points with the analytic endpoint
//! exponents of the two outer pieces.
struct DensityGrid {
  std::vector<double> grid;
  std::vector<double> values;
  Interval interval;
  WalkKind kind = WalkKind::exterior;
  double left_exponent = 0.0;
  double right_exponent = 0.0;

  void validate() const;
  //! Linear interpolation inside the grid, power-law tails outside it.
  double value(double x) const;
  //! Trapezoid mass plus the exact mass of the two power-law tails.
  double mass() const;
};

DensityGrid sample_density(const TransitionDensity& rho,
                           const std::vector<double>& grid);
//! n points clustered toward the ends of every piece (w(tau) = tau^4 /
//! (tau^4 + (1 - tau)^4) on midpoints tau), never on a breakpoint.
std::vector<double> graded_grid(const TransitionDensity& rho, int n);
//! Cell midpoints of n equal cells of the interval.
std::vector<double> uniform_grid(const Interval& I, int n);

//! Transition densities of an unrotated diagram: the exterior and interior
//! walks and the interior walk started at (s, t).
class UnrotatedDensity {
 public:
  static UnrotatedDensity exterior(UnrotatedDiagram f,
                                   numerics::QuadratureConfig cfg = {});
  static UnrotatedDensity interior(UnrotatedDiagram f,
                                   numerics::QuadratureConfig cfg = {});
  //! Requires (s, t) in the domain: a < s <= b, 0 <= t < f(s).
  static UnrotatedDensity started(UnrotatedDiagram f, double s, double t,
                                  numerics::QuadratureConfig cfg = {});

  const UnrotatedDiagram& diagram() const { return *f_; }
  //! Support (f^{-1}(t), s) for started walks, (a, b) otherwise.
  Interval support() const { return support_; }
  DensityPiece piece() const;

  double operator()(double x) const;
  double at(double x, double from_lo, double to_hi) const;
  double integrate(const std::function<double(double)>& weight) const;
  double mass() const;
  double cdf(double x) const;

  //! Integral of (f'(u) - f'(x)) / ((1 + f'(x))(u - x + f(u) - f(x))) over
  //! [lo, hi].
  double exponent_integral(double x, double lo, double hi) const;

 private:
  enum class Mode { exterior, interior, started };
  UnrotatedDensity(UnrotatedDiagram f, Mode mode, Interval support,
                   numerics::QuadratureConfig cfg);

  std::shared_ptr<const UnrotatedDiagram> f_;
  Mode mode_;
  Interval support_;
  numerics::QuadratureConfig cfg_;
  double area_ = 1.0;
};

double exterior_density_unrotated(const UnrotatedDiagram& f, double x,
                                  const numerics::QuadratureConfig& cfg = {});
double interior_density_unrotated(const UnrotatedDiagram& f, double x,
                                  const numerics::QuadratureConfig& cfg = {});
double started_interior_density(const UnrotatedDiagram& f, double s, double t,
                                double x,
                                const numerics::QuadratureConfig& cfg = {});

struct IdentitySides {
  double lhs;
  double rhs;
  double residual() const;
};

//! Exterior: int dmu(t)/(x-t) against (1/x) exp(int dsigma(t)/(t-x)).
//! Interior: -(A/2) int dnu(t)/(x-t) + x - z against
//! x exp(-int dsigma(t)/(t-x)). x must lie outside [min(a,0), max(b,0)].
IdentitySides cauchy_identity(const Diagram& d, double x, WalkKind kind,
                              const numerics::QuadratureConfig& cfg = {});

//! int dsigma(t)/(t - x) over the real line, sigma the charge of d.
double charge_stieltjes(const Diagram& d, double x,
                        const numerics::QuadratureConfig& cfg = {});

//! g_{s,t}(x) against the averaged hook integrals of the started densities.
IdentitySides started_self_consistency(const UnrotatedDiagram& f, double s,
                                       double t, double x,
                                       const numerics::QuadratureConfig& cfg = {});
//! Interior density against the area-average of the started densities.
IdentitySides started_mixture(const UnrotatedDiagram& f, double x,
                              const numerics::QuadratureConfig& cfg = {});

}  // namespace hookwalk
