#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracfem {

/// Raised when an iterative or adaptive numerical procedure cannot meet its
/// tolerance (series divergence, quadrature budget, eigen-solver failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LowerOrder {
  double order = 0.0;
  double weight = 0.0;
};

/// The multi-term operator d_t^alpha + sum_i b_i d_t^{alpha_i} on [0, T].
///
/// Invariants: 0 < alpha_m <= ... <= alpha_1 < alpha < 1, b_i > 0, T > 0.
/// An empty list of lower orders is the single-term equation.
class FracOrders {
 public:
  FracOrders(double alpha, std::vector<LowerOrder> lower = {},
             double horizon = 1.0);

  /// Convenience for the common two-term model d^alpha + b d^beta.
  static FracOrders two_term(double alpha, double beta, double weight = 1.0,
                             double horizon = 1.0);

  double alpha() const { return alpha_; }
  double horizon() const { return horizon_; }
  std::span<const LowerOrder> lower() const { return lower_; }
  std::size_t lower_count() const { return lower_.size(); }
  double min_order() const;

  /// The ML parameter vector (alpha, alpha - alpha_1, ..., alpha - alpha_m).
  std::vector<double> ml_betas() const;

  /// ML arguments (-lambda t^alpha, -b_1 t^{alpha-alpha_1}, ...).
  std::vector<double> ml_arguments(double lambda, double t) const;

  FracOrders with_horizon(double horizon) const;
  std::string describe() const;

 private:
  double alpha_;
  std::vector<LowerOrder> lower_;
  double horizon_;
};

}  // namespace fracfem
