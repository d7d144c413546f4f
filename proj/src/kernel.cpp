#include "fracfem/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracfem/mittag_leffler.hpp"

namespace fracfem {
namespace {

using boost::math::quadrature::gauss_kronrod;

void check_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

// Points in log r where the kernel or the exponential changes behavior.
std::vector<double> log_breakpoints(double t, double lambda, const FracOrders& orders) {
  std::vector<double> breaks{-std::log(t), std::log(lambda) / orders.alpha()};
  for (const auto& term : orders.lower()) {
    breaks.push_back(std::log(lambda / term.weight) / term.order);
  }
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

// Integrates g(s) over [lo, hi] piecewise between the breakpoints.
template <class F>
double integrate_pieces(F&& g, double lo, double hi, const std::vector<double>& breaks,
                        double tol, const char* who) {
  // Nearly coincident breakpoints only produce slivers with noisy error
  // estimates; keep them at least 0.5 apart in log r.
  std::vector<double> nodes{lo};
  for (double b : breaks) {
    if (b > nodes.back() + 0.5 && b < hi - 0.5) nodes.push_back(b);
  }
  nodes.push_back(hi);
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double piece_error = 0.0;
    total += gauss_kronrod<double, 31>::integrate(g, nodes[i], nodes[i + 1], 20, tol * 1e-2,
                                                  &piece_error);
    error += piece_error;
  }
  if (!(error <= tol * std::fabs(total)) || !std::isfinite(total)) {
    throw NumericalError(std::string(who) + ": quadrature did not reach tolerance");
  }
  return total;
}

}  // namespace

double ebar_kernel(double r, double lambda, const FracOrders& orders) {
  check_positive(r, "ebar_kernel: r");
  check_positive(lambda, "ebar_kernel: lambda");
  const double pi = std::numbers::pi;
  const double ra = std::pow(r, orders.alpha());
  double a = ra * std::cos(orders.alpha() * pi);
  double b = ra * std::sin(orders.alpha() * pi);
  for (const auto& term : orders.lower()) {
    const double rb = term.weight * std::pow(r, term.order);
    a += rb * std::cos(term.order * pi);
    b += rb * std::sin(term.order * pi);
  }
  const double shifted = a + lambda;
  // Scale before squaring so huge r does not overflow.
  const double scale = std::max(std::fabs(shifted), b);
  const double sa = shifted / scale;
  const double sb = b / scale;
  return (sb / scale) / (pi * (sa * sa + sb * sb));
}

double ebar_integral(double t, double lambda, const FracOrders& orders, double tol) {
  check_positive(t, "ebar_integral: t");
  check_positive(lambda, "ebar_integral: lambda");
  check_positive(tol, "ebar_integral: tol");
  const auto breaks = log_breakpoints(t, lambda, orders);
  // Integrand ~ r^{1+a_min} at zero and exp(-r t) at infinity.
  // exp(lo) must stay a normal double
  const double lo = std::max(breaks.front() - 60.0 / (1.0 + orders.min_order()), -700.0);
  const double hi = std::log(800.0 / t);
  auto g = [&](double s) {
    const double r = std::exp(s);
    return std::exp(-r * t) * ebar_kernel(r, lambda, orders) * r;
  };
  return integrate_pieces(g, lo, hi, breaks, tol, "ebar_integral");
}

double relaxation_integral(double t, double lambda, const FracOrders& orders,
                           double tol) {
  check_positive(t, "relaxation_integral: t");
  check_positive(lambda, "relaxation_integral: lambda");
  check_positive(tol, "relaxation_integral: tol");
  const auto breaks = log_breakpoints(t, lambda, orders);
  const double a_min = orders.min_order();
  const double lo = std::max(breaks.front() - 60.0 / a_min, -700.0);
  const double hi = std::log(800.0 / t);
  auto g = [&](double s) {
    const double r = std::exp(s);
    return std::exp(-r * t) * ebar_kernel(r, lambda, orders);
  };
  const double body = integrate_pieces(g, lo, hi, breaks, tol, "relaxation_integral");
  // K(r) ~ c r^{a_min} below exp(lo).
  const double head = ebar_kernel(std::exp(lo), lambda, orders) / a_min;
  return lambda * (body + head);
}

double ebar_time_integral(double horizon, double lambda, const FracOrders& orders,
                          double tol) {
  check_positive(horizon, "ebar_time_integral: horizon");
  check_positive(tol, "ebar_time_integral: tol");
  const double a = orders.alpha();
  // t = T u^{1/a} absorbs the t^{a-1} singularity of ebar at t = 0.
  // The lower orders leave u^{(a-a_i)/a} terms, so use tanh-sinh for the
  // endpoint behavior; below t ~ 1e-200 only the leading term matters.
  auto g = [&](double u) {
    const double t = horizon * std::pow(u, 1.0 / a);
    if (t < 1e-200) return horizon / a * std::pow(horizon, a - 1.0) / std::tgamma(a);
    return horizon / a * std::pow(u, 1.0 / a - 1.0) *
           ebar_integral(t, lambda, orders, tol * 1e-2);
  };
  double error = 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double value = integrator.integrate(g, 0.0, 1.0, tol * 1e-2, &error);
  if (!(error <= tol * std::fabs(value))) {
    throw NumericalError("ebar_time_integral: quadrature did not reach tolerance");
  }
  return value;
}

double mode_primitive(double lambda, double t, const FracOrders& orders) {
  if (t < 0.0) throw std::invalid_argument("mode_primitive: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double a = orders.alpha();
  const auto zs = orders.ml_arguments(lambda, t);
  const MLParams params{orders.ml_betas(), 1.0 + a};
  return std::pow(t, a) * mml_value(params, zs).value;
}

double mode_response(double lambda, double t, const FracOrders& orders) {
  check_positive(t, "mode_response: t");
  const double a = orders.alpha();
  const auto zs = orders.ml_arguments(lambda, t);
  const MLParams params{orders.ml_betas(), a};
  return std::pow(t, a - 1.0) * mml_value(params, zs).value;
}

ModeFactors mode_factors(double lambda, double t, const FracOrders& orders) {
  ModeFactors out;
  if (t < 0.0) throw std::invalid_argument("mode_factors: t must be >= 0");
  if (t == 0.0) {
    out.response = std::numeric_limits<double>::infinity();
    return out;
  }
  out.primitive = mode_primitive(lambda, t, orders);
  // The sum form keeps full relative accuracy where 1 - lambda I cancels.
  out.relaxation = relaxation_alt(lambda, t, orders);
  out.response = mode_response(lambda, t, orders);
  return out;
}

double relaxation_alt(double lambda, double t, const FracOrders& orders) {
  if (t < 0.0) throw std::invalid_argument("relaxation_alt: t must be >= 0");
  if (t == 0.0) return 1.0;
  const double a = orders.alpha();
  const auto zs = orders.ml_arguments(lambda, t);
  const auto betas = orders.ml_betas();
  double value = mml_value({betas, 1.0}, zs).value;
  for (const auto& term : orders.lower()) {
    const double shift = a - term.order;
    value += term.weight * std::pow(t, shift) * mml_value({betas, 1.0 + shift}, zs).value;
  }
  return value;
}

}  // namespace fracfem
