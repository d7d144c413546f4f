#pragma once

// Spatial data (initial values, source shapes) and time profiles.

#include <functional>
#include <variant>
#include <vector>

#include "fracfem/domain.hpp"

namespace fracfem {

namespace datum {

struct Zero {};

/// amplitude * sin(j pi x), or amplitude * sin(j pi x) sin(k pi y) when k > 0.
struct Sine {
  int j = 1;
  int k = 0;
  double amplitude = 1.0;
};

/// amplitude * x (1 - x) on the interval.
struct Bubble {
  double amplitude = 1.0;
};

/// Characteristic function of [a, b] on the interval.
struct Indicator {
  double a = 0.0;
  double b = 0.5;
};

/// Point mass at x0 on the interval.
struct Dirac {
  double x0 = 0.5;
};

/// Characteristic function of the box (x0,x1) x (y0,y1).
struct IndicatorBox {
  double x0 = 0.0;
  double x1 = 0.5;
  double y0 = 0.0;
  double y1 = 1.0;
};

/// Line mass (arc-length measure) on the boundary of the square [lo,hi]^2.
struct DiracSquareBoundary {
  double lo = 0.25;
  double hi = 0.75;
};

/// Arbitrary L2 function on the interval; pairings use quadrature.
struct Function {
  std::function<double(double)> value;
};

}  // namespace datum

using SpatialDatum =
    std::variant<datum::Zero, datum::Sine, datum::Bubble, datum::Indicator,
                 datum::Dirac, datum::IndicatorBox, datum::DiracSquareBoundary,
                 datum::Function>;

/// Throws std::invalid_argument if d cannot live on the domain or its
/// parameters are out of range.
void validate(const SpatialDatum& d, DomainKind domain);

bool is_zero(const SpatialDatum& d);
/// Measures (Dirac, line mass) are not functions; they have no L2 norm.
bool is_measure(const SpatialDatum& d);
/// True when the datum is in H^1_0 with a computable gradient pairing.
bool has_gradient(const SpatialDatum& d);

/// ||d||_{L2}; +inf for measures.
double l2_norm(const SpatialDatum& d);
/// ||grad d||_{L2}; throws for data without H^1 regularity.
double h1_seminorm(const SpatialDatum& d);

/// Pointwise value (functions only).
double evaluate(const SpatialDatum& d, double x, double y = 0.0);

/// (d, phi) for one eigenfunction: closed forms, or Gauss-Kronrod to 1e-12
/// for datum::Function.
double spectral_coefficient(const SpatialDatum& d, const SpectralMode& mode);

/// A closed pulse [start, end] of extra height on top of the base value.
struct Pulse {
  double start = 0.0;
  double end = 0.0;
  double height = 1.0;
};

/// g(t) = base + sum of pulses, or an arbitrary callable when `generic` is set.
struct TimeProfile {
  double base = 1.0;
  std::vector<Pulse> pulses;
  std::function<double(double)> generic;

  double operator()(double t) const;
  bool piecewise_constant() const { return !generic; }
  /// Jump locations of a piecewise-constant profile, sorted.
  std::vector<double> switch_times() const;
};

/// f(x, t) = time(t) * space(x).
struct SourceTerm {
  SpatialDatum space;
  TimeProfile time;
};

}  // namespace fracfem
