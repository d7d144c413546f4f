#pragma once

// Per-mode solution kernels of P(d_t) u + lambda u = 0 and their real-axis
// integral representations.
//
//   e(t)    = 1 - lambda t^a E_{abar,1+a}(z)     (relaxation, u(0) = 1)
//   ebar(t) = t^{a-1} E_{abar,a}(z)               (response to an impulse)
//   I(t)    = int_0^t ebar = t^a E_{abar,1+a}(z)
//
// with abar = (a, a-a_1, ...) and z = (-lambda t^a, -b_1 t^{a-a_1}, ...).
// Collapsing the Bromwich path onto the negative axis gives
//   ebar(t) = int_0^inf exp(-r t) K(r) dr,   e(t) = lambda int_0^inf exp(-r t) K(r)/r dr
// with the strictly positive kernel K below.

#include "fracfem/orders.hpp"

namespace fracfem {

/// K(r) = B / (pi ((A + lambda)^2 + B^2)),
/// A = r^a cos(a pi) + sum b_i r^{a_i} cos(a_i pi), B likewise with sin.
double ebar_kernel(double r, double lambda, const FracOrders& orders);

/// int_0^inf exp(-r t) K(r) dr by adaptive Gauss-Kronrod in log r.
/// Throws NumericalError if the error estimate stays above tol * |value|.
double ebar_integral(double t, double lambda, const FracOrders& orders,
                     double tol = 1e-10);

/// lambda int_0^inf exp(-r t) K(r) / r dr, i.e. e(t); same quadrature.
double relaxation_integral(double t, double lambda, const FracOrders& orders,
                           double tol = 1e-10);

/// int_0^T ebar(t) dt computed by tanh-sinh quadrature in t over
/// ebar_integral. Independent of any Mittag-Leffler evaluation.
double ebar_time_integral(double horizon, double lambda, const FracOrders& orders,
                          double tol = 1e-8);

struct ModeFactors {
  double relaxation = 1.0;  // e(t)
  double response = 0.0;    // ebar(t); +inf at t = 0
  double primitive = 0.0;   // I(t)
};

/// e, ebar and I at one (lambda, t) through mml_value. e is taken from the
/// sum-of-terms form (relaxation_alt), which has no cancellation for large
/// lambda t^a; 1 - lambda I is the cross-check.
ModeFactors mode_factors(double lambda, double t, const FracOrders& orders);

/// Only I(t); one ML evaluation.
double mode_primitive(double lambda, double t, const FracOrders& orders);

/// Only ebar(t); one ML evaluation. t must be positive.
double mode_response(double lambda, double t, const FracOrders& orders);

/// e(t) = E_{abar,1}(z) + sum_i b_i t^{a-a_i} E_{abar,1+a-a_i}(z).
double relaxation_alt(double lambda, double t, const FracOrders& orders);

}  // namespace fracfem
