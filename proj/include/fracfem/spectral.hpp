#pragma once

// Eigen-expansion (reference) solutions on the unit interval and square:
//   u(t) = E(t) v + int_0^t Ebar(t - s) f(s) ds.

#include <vector>

#include "fracfem/data.hpp"
#include "fracfem/domain.hpp"
#include "fracfem/orders.hpp"

namespace fracfem {

/// Coefficients (w, phi_m) over a finite list of modes.
struct SpectralField {
  DomainKind domain = DomainKind::Interval;
  std::vector<SpectralMode> modes;
  std::vector<double> coeffs;

  std::size_t truncation() const { return modes.size(); }
};

/// First `count` modes sorted by eigenvalue, ties by (j, k).
std::vector<SpectralMode> laplace_eigenpairs(DomainKind domain, int count);

/// The n x n tensor block (j, k) in [1, n]^2 on the square (n modes on the
/// interval), sorted like laplace_eigenpairs.
std::vector<SpectralMode> tensor_modes(DomainKind domain, int n);

SpectralField fourier_coeffs(const SpatialDatum& d, DomainKind domain,
                             std::vector<SpectralMode> modes);

struct HsNorm {
  double value = 0.0;
  /// Share of the squared norm carried by the upper half of the modes; stays
  /// near zero for converged sums and does not decay when d is not in H^s.
  double tail_share = 0.0;
};

/// (sum lambda^s c^2)^{1/2} in mode order, long double accumulation.
HsNorm hs_norm(const SpectralField& field, double s);

/// E(t) v, per mode e(t) from mode_factors.
SpectralField evolve_homogeneous(const SpectralField& v, const FracOrders& orders, double t);

struct DuhamelOptions {
  /// Generic time profiles: 8-point Gauss on panels graded geometrically
  /// toward both ends of [0, t], this many per end.
  int graded_levels = 24;
};

/// int_0^t Ebar(t - s) f(s) ds for a sum of separable sources. Piecewise
/// constant profiles use the closed-form primitive I(t) per mode.
SpectralField evolve_inhomogeneous(const std::vector<SourceTerm>& sources, DomainKind domain,
                                   const std::vector<SpectralMode>& modes,
                                   const FracOrders& orders, double t,
                                   const DuhamelOptions& options = {});

/// Duhamel weight of one mode: int_0^t ebar(t - s) g(s) ds.
double duhamel_weight(double lambda, const TimeProfile& g, const FracOrders& orders, double t,
                      const DuhamelOptions& options = {});

/// E(t) v + Duhamel term, all on `modes`.
SpectralField spectral_solution(const SpatialDatum& initial,
                                const std::vector<SourceTerm>& sources, DomainKind domain,
                                const std::vector<SpectralMode>& modes,
                                const FracOrders& orders, double t);

}  // namespace fracfem
