#pragma once

// Semidiscrete Galerkin solution through the discrete eigen-expansion
//   u_h(t) = E_h(t) v_h + int_0^t Ebar_h(t - s) P_h f(s) ds,
// exact in time, so measured errors are purely spatial.

#include <vector>

#include "fracfem/data.hpp"
#include "fracfem/fem.hpp"
#include "fracfem/orders.hpp"
#include "fracfem/spectral.hpp"

namespace fracfem {

enum class Projection { Auto, L2, Ritz };

/// Ritz for data of regularity q >= 2 that admit it, L2 otherwise.
Projection choose_projection(const SpatialDatum& v, double q);

Vector project_initial(const FemSystem& system, const SpatialDatum& v, Projection projection);

class SemidiscreteSolution {
 public:
  SemidiscreteSolution(FemSystem system, FracOrders orders, const SpatialDatum& initial,
                       double regularity, std::vector<SourceTerm> sources = {},
                       Projection projection = Projection::Auto);

  const FemSystem& system() const { return system_; }
  const FracOrders& orders() const { return orders_; }
  const Vector& initial() const { return initial_; }
  Projection projection() const { return projection_; }

  /// Nodal coefficients of u_h(t); t = 0 returns v_h.
  Vector evolve(double t) const;

 private:
  FemSystem system_;
  FracOrders orders_;
  std::vector<SourceTerm> sources_;
  Projection projection_;
  Vector initial_;
  Vector initial_modal_;
  std::vector<Vector> source_modal_;
};

struct ErrorPair {
  double l2 = 0.0;
  double h1 = 0.0;
};

/// ||u_h - u_J|| in L2 and H1 seminorm against a truncated eigen-expansion,
/// exact in space: the hat/eigenfunction pairings are closed form, and the
/// part of u_h outside the J modes is ||u_h||^2 - sum_m (u_h, phi_m)^2.
ErrorPair error_against_field(const Mesh& mesh, const FemSystem& system, const Vector& c,
                              const SpectralField& reference);

/// Same against a datum with exact load and gradient pairings (polynomials,
/// sines): ||c - u||^2 = c^T M c - 2 c . b + ||u||^2.
ErrorPair error_against_datum(const FemSystem& system, const Vector& c,
                              const SpatialDatum& exact);

}  // namespace fracfem
